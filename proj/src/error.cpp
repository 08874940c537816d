#include "mbsc/error.hpp"

namespace mbsc {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::RaggedRows: return "RaggedRows";
        case ErrorCode::NonInteger: return "NonInteger";
        case ErrorCode::OutOfDeclaredRange: return "OutOfDeclaredRange";
        case ErrorCode::SizeNotMultiple: return "SizeNotMultiple";
        case ErrorCode::MissingSidecarField: return "MissingSidecarField";
        case ErrorCode::SampleOutOfRange: return "SampleOutOfRange";
        case ErrorCode::ConfigMismatch: return "ConfigMismatch";
        case ErrorCode::InvalidLayout: return "InvalidLayout";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::VersionUnsupported: return "VersionUnsupported";
        case ErrorCode::MalformedStream: return "MalformedStream";
        case ErrorCode::EndOfStream: return "EndOfStream";
    }
    return "Unknown";
}

ErrorCategory error_category(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument:
            return ErrorCategory::Usage;
        case ErrorCode::BadMagic:
        case ErrorCode::VersionUnsupported:
        case ErrorCode::MalformedStream:
        case ErrorCode::EndOfStream:
            return ErrorCategory::Stream;
        default:
            return ErrorCategory::Data;
    }
}

}  // namespace mbsc
