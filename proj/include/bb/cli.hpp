#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bb/theorems.hpp"

namespace bb::cli {

enum class Format { json, csv, human };

enum ExitCode : int { kAllHold = 0, kClaimFailed = 1, kUsage = 2, kHypothesisOnly = 3 };

struct RunConfig {
  int grid_points = 4097;
  int refine_rounds = 3;
  double slack = 1e-2;
  std::int64_t n_max = 1'000'000;
  Format format = Format::json;

  /// grid_points >= 17 and odd, 0 <= slack < 0.5, n_max >= 2. Throws Error.
  void validate() const;
  CheckConfig check_config() const;
};

/// Runs the command line. BB_GRID_POINTS in the environment replaces the grid default;
/// an explicit --grid wins over it.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bb::cli
