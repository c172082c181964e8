#include "bb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bb/error.hpp"
#include "bb/function.hpp"

namespace bb {
namespace {

constexpr double kInvPhi = 0.6180339887498949;  // 1/golden ratio
constexpr int kIterationsPerRound = 24;
constexpr std::size_t kMaxRefinedMaxima = 16;

}  // namespace

void GridConfig::validate() const {
  auto check = [](int v, int min, const char* what) {
    if (v < min) throw Error(std::string(what) + " must be at least " + std::to_string(min));
  };
  check(grid_points, 3, "grid_points");
  check(refine_rounds, 0, "refine_rounds");
  check(modulus_h_points, 2, "modulus_h_points");
  check(modulus_x_points, 3, "modulus_x_points");
  check(modulus_refine_rounds, 0, "modulus_refine_rounds");
  check(classical_h_points, 2, "classical_h_points");
  check(classical_x_points, 2, "classical_x_points");
}

Probe golden_maximize(const std::function<double(double)>& f, double lo, double hi, int iterations,
                      Probe incumbent) {
  Probe best = incumbent;
  if (!(hi > lo)) return best;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  auto offer = [&](double x, double v) {
    if (better({x, v}, best)) best = {x, v};
  };
  offer(c, fc);
  offer(d, fd);
  for (int it = 0; it < iterations; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      offer(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      offer(d, fd);
    }
  }
  return best;
}

NormEstimate maximize_on_interval(const BatchObjective& objective, double a, double b, int grid_points,
                                  int refine_rounds) {
  if (grid_points < 3) throw Error("grid_points must be at least 3");
  const auto xs = uniform_grid(a, b, static_cast<std::size_t>(grid_points));
  std::vector<double> vals(xs.size());
  objective(xs, vals);

  Probe best{xs[0], vals[0]};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (better({xs[i], vals[i]}, best)) best = {xs[i], vals[i]};
  }

  if (refine_rounds > 0) {
    std::vector<std::size_t> maxima;
    const std::size_t last = xs.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
      const bool ge_left = i == 0 || vals[i] >= vals[i - 1];
      const bool ge_right = i == last || vals[i] >= vals[i + 1];
      const bool flat = (i == 0 || vals[i] == vals[i - 1]) && (i == last || vals[i] == vals[i + 1]);
      if (ge_left && ge_right && !flat) maxima.push_back(i);
    }
    std::stable_sort(maxima.begin(), maxima.end(),
                     [&](std::size_t l, std::size_t r) { return vals[l] > vals[r]; });
    if (maxima.size() > kMaxRefinedMaxima) maxima.resize(kMaxRefinedMaxima);

    auto point = [&](double x) {
      double v = 0.0;
      objective(std::span<const double>(&x, 1), std::span<double>(&v, 1));
      return v;
    };
    for (std::size_t i : maxima) {
      double lo = xs[i == 0 ? 0 : i - 1];
      double hi = xs[i == last ? last : i + 1];
      Probe local{xs[i], vals[i]};
      for (int round = 0; round < refine_rounds; ++round) {
        local = golden_maximize(point, lo, hi, kIterationsPerRound, local);
        const double width = (hi - lo) * std::pow(kInvPhi, kIterationsPerRound);
        lo = std::max(a, local.x - width);
        hi = std::min(b, local.x + width);
      }
      if (better(local, best)) best = local;
    }
  }
  return {best.value, best.x, grid_points, refine_rounds};
}

}  // namespace bb
