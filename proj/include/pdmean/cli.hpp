#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and returns the process exit status:
//   0  success
//   1  usage or input error
//   2  a solver did not converge
//   3  a theorem check failed

#include <ostream>
#include <string>
#include <vector>

namespace pdmean::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitCheckFailed = 3;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdmean::cli
