#pragma once

#include <stdexcept>
#include <string>

namespace mbsc {

enum class ErrorCode {
    // usage
    InvalidArgument,
    // data
    RaggedRows,
    NonInteger,
    OutOfDeclaredRange,
    SizeNotMultiple,
    MissingSidecarField,
    SampleOutOfRange,
    ConfigMismatch,
    InvalidLayout,
    ShapeMismatch,
    SingularSystem,
    IoFailure,
    // stream
    BadMagic,
    VersionUnsupported,
    MalformedStream,
    EndOfStream,
};

enum class ErrorCategory { Usage, Data, Stream };

const char* error_code_name(ErrorCode code) noexcept;
ErrorCategory error_category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return error_category(code_); }

private:
    ErrorCode code_;
};

}  // namespace mbsc
