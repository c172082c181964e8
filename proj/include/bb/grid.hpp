#pragma once

#include <functional>
#include <span>
#include <string_view>

namespace bb {

/// Resolution of every sup estimate. Defaults are the production settings; tests use
/// coarser grids where the closed forms allow it.
struct GridConfig {
  int grid_points = 4097;  // 1-D sup scans (norms)
  int refine_rounds = 3;   // golden-section rounds per local maximum
  int modulus_h_points = 513;
  int modulus_x_points = 2049;
  int modulus_refine_rounds = 1;
  int classical_h_points = 1025;
  int classical_x_points = 2049;

  /// Throws Error if any count is too small to bracket a maximum.
  void validate() const;
};

/// Numerically estimated supremum. Always a lower bound of the true sup: value is the
/// objective evaluated at argmax.
struct NormEstimate {
  static constexpr std::string_view kind = "sup-underestimate";

  double value = 0.0;
  double argmax = 0.0;
  int grid_size = 0;
  int refinement_rounds = 0;
};

/// Evaluates an objective at every point of xs into out.
using BatchObjective = std::function<void(std::span<const double> xs, std::span<double> out)>;

struct Probe {
  double x = 0.0;
  double value = 0.0;
};

/// True when a beats b: larger value, ties to the smaller abscissa.
inline bool better(const Probe& a, const Probe& b) {
  return a.value > b.value || (a.value == b.value && a.x < b.x);
}

/// Golden-section search for a maximum of f on [lo, hi]. Returns the best point seen,
/// never worse than `incumbent`.
Probe golden_maximize(const std::function<double(double)>& f, double lo, double hi, int iterations,
                      Probe incumbent);

/// Dense uniform scan of [a,b] followed by `refine_rounds` golden-section rounds on the
/// bracket around each of the largest local maxima of the scan.
NormEstimate maximize_on_interval(const BatchObjective& objective, double a, double b, int grid_points,
                                  int refine_rounds);

}  // namespace bb
