#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "deconv/grid.hpp"

namespace deconv::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kDimension = 3,
  kPrecondition = 4,
  kTruncation = 5,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Default signal of the Gaussian noise experiment: a wide bump of height
/// 1e-3 centred at 12.8 with standard deviation 2, sampled at 512 points
/// with spacing 0.05 from x = 0.
GridSignal noise_test_signal();

/// Padding used with noise_test_signal, giving a 1024-sample grid on
/// [-12.8, 38.4).
inline constexpr double kNoiseTestPadding = 12.8;

}  // namespace deconv::cli
