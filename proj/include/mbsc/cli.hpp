#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mbsc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kMalformedStream = 3 };

// Entry point for the mbsc tool. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses "0..10", "0,5,10" or a single value.
std::vector<unsigned> parse_delta_list(const std::string& text);

}  // namespace mbsc::cli
