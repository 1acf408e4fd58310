// Command-line front end: verify, constants, hardness, plot-theta2, simulate.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tightgap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 2;  // verification or tolerance failure
inline constexpr int kExitUsage = 3;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(const std::string& data);

}  // namespace tightgap
