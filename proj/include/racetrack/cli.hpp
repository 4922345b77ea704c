#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace racetrack::cli {

enum ExitCode : int { ok = 0, config_error = 2, numerical_error = 3, io_error = 4 };

/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "RACETRACK_OUTPUT";

/// Parses argv and runs one subcommand
/// (eigen | critical | curve | heatmap | simulate | probe | sweep).
/// Artifacts land in <output root>/<command>-<config hash>/.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "1..6", "-2..2" or "1,3,5"; zero is rejected.
std::vector<int> parse_mode_list(const std::string& text);

/// "lo:hi:count", count >= 2.
struct GridSpec {
  double lo;
  double hi;
  int count;
};
GridSpec parse_grid_spec(const std::string& text);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace racetrack::cli
