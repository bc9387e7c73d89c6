#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fcp::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point shared by the executable and the tests; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcp::cli
