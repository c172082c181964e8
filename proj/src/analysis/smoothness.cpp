#include "bb/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "bb/error.hpp"
#include "bb/simd/difference_kernel.hpp"

namespace bb {
namespace {

constexpr int kGoldenIterations = 60;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double phi_pow(double x, int p) {
  const double q = clamp01(x) * (1.0 - clamp01(x));
  double r = 1.0;
  for (int i = 0; i < p / 2; ++i) r *= q;
  if (p % 2 != 0) r *= std::sqrt(q);
  return r;
}

double combine(double minus, double centre, double plus) { return std::abs((plus - 2.0 * centre) + minus); }

// Fills pts with [x - h phi | x | x + h phi] for every x in xs.
void stencil(double h, std::span<const double> xs, std::vector<double>& pts) {
  const std::size_t m = xs.size();
  pts.resize(3 * m);
  for (std::size_t i = 0; i < m; ++i) {
    const double step = h * phi(xs[i]);
    pts[i] = clamp01(xs[i] - step);
    pts[m + i] = xs[i];
    pts[2 * m + i] = clamp01(xs[i] + step);
  }
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error("delta must be in (0, 1], got " + std::to_string(delta));
  }
}

}  // namespace

double phi(double x) {
  const double c = clamp01(x);
  return std::sqrt(c * (1.0 - c));
}

NormEstimate weighted_norm(const FunctionSpec& f, int weight_power, int deriv_order, const GridConfig& cfg) {
  if (weight_power < 0) throw Error("weight power must be >= 0");
  if (deriv_order < 0 || deriv_order > f.max_order()) {
    throw HypothesisError("'" + f.name() + "' has max_order " + std::to_string(f.max_order()) +
                          ", derivative " + std::to_string(deriv_order) + " requested");
  }
  std::vector<double> rows;
  auto objective = [&](std::span<const double> xs, std::span<double> out) {
    const std::size_t m = xs.size();
    rows.resize(static_cast<std::size_t>(deriv_order + 1) * m);
    f.evaluate(xs, deriv_order, rows);
    const double* d = rows.data() + static_cast<std::size_t>(deriv_order) * m;
    for (std::size_t i = 0; i < m; ++i) out[i] = std::abs(phi_pow(xs[i], weight_power) * d[i]);
  };
  return maximize_on_interval(objective, 0.0, 1.0, cfg.grid_points, cfg.refine_rounds);
}

double dt_second_difference(const FunctionSpec& f, double h, double x) {
  const double xs[1] = {x};
  std::vector<double> pts;
  stencil(h, xs, pts);
  double v[3];
  f.values(pts, v);
  return (v[2] - 2.0 * v[1]) + v[0];
}

ModulusResult dt_modulus2(const FunctionSpec& f, double delta, const GridConfig& cfg) {
  require_delta(delta);
  const int nh = cfg.modulus_h_points;
  const int nx = cfg.modulus_x_points;
  if (nh < 2 || nx < 3) throw Error("modulus grid too small");

  ModulusResult res{0.0, delta, 0.0, 0.0, nh, nx};
  const auto hs = uniform_grid(0.0, delta, static_cast<std::size_t>(nh));
  std::vector<double> pts;
  std::vector<double> vals;
  std::size_t best_row = 0;
  // Row h = 0 is identically zero; scanning starts from it as the incumbent.
  for (std::size_t j = 1; j < hs.size(); ++j) {
    const double h = hs[j];
    const auto xs = uniform_grid(admissible_lo(h), admissible_hi(h), static_cast<std::size_t>(nx));
    stencil(h, xs, pts);
    vals.resize(pts.size());
    f.values(pts, vals);
    const std::size_t m = xs.size();
    for (std::size_t i = 0; i < m; ++i) {
      const double v = combine(vals[i], vals[m + i], vals[2 * m + i]);
      if (v > res.value) {
        res.value = v;
        res.h_star = h;
        res.x_star = xs[i];
        best_row = j;
      }
    }
  }
  if (res.value == 0.0) return res;

  auto at = [&](double h, double x) { return std::abs(dt_second_difference(f, h, x)); };
  const double dh = hs[1] - hs[0];
  for (int round = 0; round < cfg.modulus_refine_rounds; ++round) {
    const double h = res.h_star;
    const double lo = admissible_lo(h);
    const double hi = admissible_hi(h);
    const double dx = (admissible_hi(hs[best_row]) - admissible_lo(hs[best_row])) / (nx - 1);
    Probe px = golden_maximize([&](double x) { return at(h, x); }, std::max(lo, res.x_star - dx),
                               std::min(hi, res.x_star + dx), kGoldenIterations, {res.x_star, res.value});
    res.x_star = px.x;
    res.value = px.value;

    const double x = res.x_star;
    auto along_h = [&](double hh) { return at(hh, std::clamp(x, admissible_lo(hh), admissible_hi(hh))); };
    Probe ph = golden_maximize(along_h, std::max(0.0, h - dh), std::min(delta, h + dh), kGoldenIterations,
                               {h, res.value});
    res.h_star = ph.x;
    res.x_star = std::clamp(x, admissible_lo(ph.x), admissible_hi(ph.x));
    res.value = at(res.h_star, res.x_star);
  }
  return res;
}

ClassicalPair classical_moduli(const FunctionSpec& f, int use_deriv, double delta, const GridConfig& cfg) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error("delta must be positive");
  if (use_deriv < 0 || use_deriv > f.max_order()) {
    throw HypothesisError("'" + f.name() + "' has max_order " + std::to_string(f.max_order()) +
                          ", derivative " + std::to_string(use_deriv) + " requested");
  }
  const int steps = cfg.classical_h_points - 1;
  if (steps < 1 || cfg.classical_x_points < 2) throw Error("classical modulus grid too small");

  // Lattice with x spacing s dividing the h spacing, so g(x+h) and g(x+2h) are lattice
  // values and g is evaluated once per point.
  const double h_max = std::min(delta, 1.0);
  const double h_step = h_max / steps;
  const auto q = static_cast<std::size_t>(
      std::max(1.0, std::ceil(h_step * (cfg.classical_x_points - 1) - 1e-9)));
  const double s = h_step / static_cast<double>(q);
  const auto last = static_cast<std::size_t>(std::floor(1.0 / s + 1e-9));
  std::vector<double> xs(last + 1);
  for (std::size_t i = 0; i <= last; ++i) xs[i] = std::min(1.0, static_cast<double>(i) * s);
  std::vector<double> g(xs.size());
  f.derivatives(xs, use_deriv, g);

  const int grid_x = static_cast<int>(xs.size());
  ClassicalPair out;
  out.first = {0.0, delta, 0.0, 0.0, cfg.classical_h_points, grid_x};
  out.second = {0.0, delta, 0.0, 0.0, cfg.classical_h_points, grid_x};

  // Order 1: max - min over every lattice window of span steps*q.
  const std::size_t span = static_cast<std::size_t>(steps) * q;
  std::deque<std::size_t> hi_q;
  std::deque<std::size_t> lo_q;
  for (std::size_t r = 0; r < g.size(); ++r) {
    while (!hi_q.empty() && g[hi_q.back()] <= g[r]) hi_q.pop_back();
    while (!lo_q.empty() && g[lo_q.back()] >= g[r]) lo_q.pop_back();
    hi_q.push_back(r);
    lo_q.push_back(r);
    while (hi_q.front() + span < r) hi_q.pop_front();
    while (lo_q.front() + span < r) lo_q.pop_front();
    const double v = g[hi_q.front()] - g[lo_q.front()];
    if (v > out.first.value) {
      const std::size_t a = std::min(hi_q.front(), lo_q.front());
      const std::size_t b = std::max(hi_q.front(), lo_q.front());
      out.first.value = v;
      out.first.x_star = xs[a];
      out.first.h_star = xs[b] - xs[a];
    }
  }

  // Order 2: one pass per lattice step m = j*q with 2m inside the lattice.
  const auto kernel = simd::second_diff_max_kernel();
  for (std::size_t j = 1; j <= static_cast<std::size_t>(steps); ++j) {
    const std::size_t m = j * q;
    if (2 * m > last) break;
    const auto r = kernel(g.data(), last + 1 - 2 * m, m);
    if (r.value > out.second.value) {
      out.second.value = r.value;
      out.second.x_star = xs[r.index];
      out.second.h_star = static_cast<double>(m) * s;
    }
  }
  return out;
}

ModulusResult classical_modulus(const FunctionSpec& f, int use_deriv, int order, double delta,
                                const GridConfig& cfg) {
  if (order != 1 && order != 2) throw Error("classical modulus order must be 1 or 2");
  auto pair = classical_moduli(f, use_deriv, delta, cfg);
  return order == 1 ? pair.first : pair.second;
}

KInterval kfunctional_bounds(const FunctionSpec& f, double t, const GridConfig& cfg) {
  if (!(t > 0.0 && t <= std::sqrt(0.5) + 1e-15)) throw Error("t must be in (0, 1/sqrt(2)]");
  if (f.max_order() < 2) throw HypothesisError("K-functional bracket needs f''");
  if (f.is_affine()) return {t, 0.0, 0.0};
  const double w = dt_modulus2(f, t, cfg).value;
  const double p = weighted_norm(f, 2, 2, cfg).value;
  return {t, w / 16.0, std::min(10.0 * w, t * t * p)};
}

}  // namespace bb
