#include "bb/theorems.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>

#include "bb/bernstein.hpp"
#include "bb/error.hpp"

namespace bb {
namespace {

int as_degree(std::int64_t n) {
  if (n < 1 || n > INT_MAX) throw Error("n out of range: " + std::to_string(n));
  return static_cast<int>(n);
}

double delta_of(std::int64_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); }

void require_order(const FunctionSpec& f, int order, const char* claim) {
  if (f.max_order() < order) {
    throw HypothesisError(std::string(claim) + " needs derivatives up to order " + std::to_string(order) + ", '" +
                          f.name() + "' provides " + std::to_string(f.max_order()));
  }
}

void require_unit_open(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw Error(std::string(what) + " must be in (0,1)");
}

BoundReport make_report(const Analysis& a, std::string id, std::int64_t n, ClaimKind kind, double left,
                        double right, double constant) {
  BoundReport r;
  r.claim_id = std::move(id);
  r.n = n;
  r.kind = kind;
  r.left = left;
  r.right = right;
  r.constant = constant;
  r.slack = a.config().slack;
  r.abs_floor = a.config().abs_floor;
  r.holds = claim_holds(kind, left, right, r.slack, r.abs_floor);
  if (a.affine()) {
    r.holds = true;
    r.note = "affine input: both sides vanish, holds trivially";
  }
  return r;
}

// floor(v) + 1 for a nonnegative finite v.
std::int64_t integer_part_plus_one(double v) {
  if (!std::isfinite(v) || v < 0.0 || v >= 9.0e18) throw Error("threshold value out of range");
  return static_cast<std::int64_t>(std::floor(v)) + 1;
}

std::vector<std::int64_t> n0_samples(std::int64_t n_max) {
  std::vector<std::int64_t> s;
  for (std::int64_t n = 2; n <= std::min<std::int64_t>(1000, n_max); ++n) s.push_back(n);
  const double ratio = std::exp2(0.125);
  for (double v = 1000.0 * ratio; v < static_cast<double>(n_max); v *= ratio) {
    const auto n = static_cast<std::int64_t>(std::llround(v));
    if (n > s.back()) s.push_back(n);
  }
  if (s.empty() || s.back() != n_max) s.push_back(n_max);
  return s;
}

}  // namespace

void CheckConfig::validate() const {
  grid.validate();
  if (!(slack >= 0.0 && slack < 0.5)) throw Error("slack must be in [0, 0.5)");
  if (!(abs_floor >= 0.0)) throw Error("abs_floor must be >= 0");
  if (n_max < 2) throw Error("n_max must be at least 2");
}

bool claim_holds(ClaimKind kind, double left, double right, double slack, double abs_floor) {
  if (kind == ClaimKind::upper) return left <= right * (1.0 + slack) + abs_floor;
  return left >= right * (1.0 - slack) - abs_floor;
}

Estimate Estimate::of(std::string quantity, const NormEstimate& e) {
  return {std::move(quantity), std::string(NormEstimate::kind), e.value, e.argmax, 0.0, e.grid_size, 0,
          e.refinement_rounds};
}

Estimate Estimate::of(std::string quantity, const ModulusResult& m, int rounds) {
  return {std::move(quantity), std::string(NormEstimate::kind), m.value, m.x_star, m.h_star, m.grid_x,
          m.grid_h, rounds};
}

Estimate Estimate::exact(std::string quantity, double value) {
  return {std::move(quantity), "closed-form", value, 0.0, 0.0, 0, 0, 0};
}

Analysis::Analysis(FunctionSpec f, CheckConfig cfg) : f_(std::move(f)), cfg_(cfg), affine_(f_.is_affine()) {
  cfg_.validate();
}

const NormEstimate& Analysis::error_norm(std::int64_t n) {
  auto it = error_.find(n);
  if (it == error_.end()) it = error_.emplace(n, approx_error_norm(f_, as_degree(n), cfg_.grid)).first;
  return it->second;
}

const ModulusResult& Analysis::dt_modulus(std::int64_t n) {
  auto it = modulus_.find(n);
  if (it == modulus_.end()) {
    as_degree(n);
    it = modulus_.emplace(n, dt_modulus2(f_, delta_of(n), cfg_.grid)).first;
  }
  return it->second;
}

const NormEstimate& Analysis::residual_norm(std::int64_t n) {
  auto it = residual_.find(n);
  if (it == residual_.end()) {
    it = residual_.emplace(n, voronovskaja_residual_norm(f_, as_degree(n), cfg_.grid)).first;
  }
  return it->second;
}

const ClassicalPair& Analysis::f2_moduli(std::int64_t n) {
  auto it = f2_.find(n);
  if (it == f2_.end()) {
    if (n < 1) throw Error("n must be >= 1");
    it = f2_.emplace(n, classical_moduli(f_, 2, delta_of(n), cfg_.grid)).first;
  }
  return it->second;
}

const NormEstimate& Analysis::weighted(int weight_power, int deriv_order) {
  const auto key = std::make_pair(weight_power, deriv_order);
  auto it = weighted_.find(key);
  if (it == weighted_.end()) {
    it = weighted_.emplace(key, weighted_norm(f_, weight_power, deriv_order, cfg_.grid)).first;
  }
  return it->second;
}

SandwichResult sandwich_check(Analysis& a, std::int64_t n, double mu0) {
  require_unit_open(mu0, "mu0");
  require_order(a.function(), 2, "sandwich check");
  const auto& e = a.error_norm(n);
  const auto& w = a.dt_modulus(n);
  SandwichResult out;
  out.upper = make_report(a, "eq1.5-upper", n, ClaimKind::upper, e.value, 3.0 * w.value, 3.0);
  out.lower = make_report(a, "eq1.5-lower", n, ClaimKind::lower, e.value, mu0 / 32.0 * w.value, mu0 / 32.0);
  for (auto* r : {&out.upper, &out.lower}) {
    r->provenance = {Estimate::of("error_norm", e), Estimate::of("dt_modulus", w, a.config().grid.modulus_refine_rounds)};
  }
  if (!a.affine() && w.value > 0.0) out.ratio = e.value / w.value;
  return out;
}

double lambda_estimate(Analysis& a, std::int64_t n) {
  require_order(a.function(), 2, "lambda estimate");
  const double p = a.weighted(2, 2).value;
  if (a.affine() || !(p > 0.0)) {
    throw DegenerateInputError("lambda estimate undefined: ||phi^2 f''|| vanishes for '" + a.function().name() + "'");
  }
  return static_cast<double>(n) * a.dt_modulus(n).value / p;
}

ThresholdResult find_n0(Analysis& a, double lambda0, std::int64_t n_max) {
  if (!(lambda0 > 0.0)) throw Error("lambda0 must be positive");
  if (n_max < 2) throw Error("n_max must be at least 2");
  const auto samples = n0_samples(n_max);
  std::size_t first_ok = samples.size();
  for (std::size_t i = samples.size(); i-- > 0;) {
    if (lambda_estimate(a, samples[i]) < lambda0) break;
    first_ok = i;
  }
  if (first_ok == samples.size()) {
    throw NotFoundError("no n0 <= " + std::to_string(n_max) + " with lambda estimate >= " + std::to_string(lambda0));
  }
  ThresholdResult r;
  r.formula_id = "n0";
  r.n_value = samples[first_ok];
  r.inputs = {{"lambda0", lambda0},
              {"n_max", static_cast<double>(n_max)},
              {"lambda_at_n0", lambda_estimate(a, r.n_value)},
              {"samples", static_cast<double>(samples.size())}};
  r.note = "lambda estimate >= lambda0 on every sampled n in [n0, n_max]";
  return r;
}

double an_value(Analysis& a, std::int64_t n) {
  require_order(a.function(), 2, "A_n");
  if (a.affine()) throw DegenerateInputError("A_n undefined for affine input (0/0)");
  const double w = a.dt_modulus(n).value;
  if (!(w > 0.0)) throw DegenerateInputError("A_n undefined: modulus estimate vanishes");
  const auto& m = a.f2_moduli(n);
  const double nn = static_cast<double>(n);
  return (5.0 / (8.0 * nn) * m.first.value + 13.0 / (64.0 * nn) * m.second.value) / w;
}

AnBracket an_bracket(Analysis& a, std::int64_t n, double lambda0) {
  require_order(a.function(), 2, "A_n bracket");
  if (!(lambda0 > 0.0)) throw Error("lambda0 must be positive");
  const double p = a.weighted(2, 2).value;
  if (a.affine() || !(p > 0.0)) throw DegenerateInputError("A_n bracket undefined for affine input");
  const auto& m = a.f2_moduli(n);
  const double s = 5.0 / 8.0 * m.first.value + 13.0 / 64.0 * m.second.value;
  return {s / (16.0 * p), s / (lambda0 * p)};
}

ThresholdResult find_n1(Analysis& a, double mu0, double lambda0, std::int64_t n_max) {
  require_unit_open(mu0, "mu0");
  require_unit_open(lambda0, "lambda0");
  if (a.affine()) throw DegenerateInputError("n1 undefined for affine input");
  const std::int64_t n0 = find_n0(a, lambda0, n_max).n_value;
  auto ok = [&](std::int64_t n) { return 1.0 / 32.0 - an_bracket(a, n, lambda0).upper >= mu0 / 32.0; };

  std::int64_t hi = n0;
  std::int64_t lo = n0;
  if (!ok(hi)) {
    for (;;) {
      lo = hi;
      hi = std::min(2 * hi, n_max);
      if (ok(hi)) break;
      if (hi == n_max) {
        throw NotFoundError("no n1 <= " + std::to_string(n_max) + " satisfies the A_n condition");
      }
    }
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      (ok(mid) ? hi : lo) = mid;
    }
  }
  ThresholdResult r;
  r.formula_id = "n1";
  r.n_value = hi;
  const auto br = an_bracket(a, hi, lambda0);
  r.inputs = {{"mu0", mu0},
              {"lambda0", lambda0},
              {"n0", static_cast<double>(n0)},
              {"phi2_f2_norm", a.weighted(2, 2).value},
              {"an_upper_at_n1", br.upper},
              {"target", (1.0 - mu0) / 32.0}};
  r.note = "smallest n >= n0 with 1/32 - upper(A_n) >= mu0/32 (upper member of the A_n bracket)";
  return r;
}

ThresholdResult corollary1_threshold(double M, double m) {
  if (!(M > 0.0) || !(m > 0.0) || !std::isfinite(M) || !std::isfinite(m)) {
    throw Error("corollary threshold needs M > 0 and m > 0");
  }
  const double v = 1024.0 * M * M / (m * m);
  ThresholdResult r;
  r.formula_id = "cor1";
  r.inputs = {{"M", M}, {"m", m}, {"1024*M^2/m^2", v}};
  r.n_value = integer_part_plus_one(v);
  return r;
}

CorollaryInputs corollary1_inputs(Analysis& a) {
  const auto& f = a.function();
  require_order(f, 3, "corollary threshold");
  const auto xs = uniform_grid(0.0, 1.0, static_cast<std::size_t>(a.config().grid.grid_points));
  std::vector<double> f2(xs.size());
  f.derivatives(xs, 2, f2);
  double m = INFINITY;
  for (double v : f2) m = std::min(m, std::abs(v));
  if (!(m > 1e-12)) {
    throw HypothesisError("inf |f''| vanishes on [0,1] for '" + f.name() + "'; the corollary does not apply");
  }
  return {a.weighted(0, 3).value, m, true};
}

ThresholdResult corollary1_threshold(const CorollaryInputs& in) {
  if (in.M == 0.0 && in.m > 0.0) {
    ThresholdResult r;
    r.formula_id = "cor1";
    r.inputs = {{"M", 0.0}, {"m", in.m}, {"1024*M^2/m^2", 0.0}};
    r.n_value = 1;
    r.note = "f''' vanishes; the bound applies for every n";
    return r;
  }
  return corollary1_threshold(in.M, in.m);
}

BoundReport corollary1_check(Analysis& a, std::int64_t n, std::optional<double> M, std::optional<double> m) {
  require_order(a.function(), 2, "corollary check");
  BoundReport r;
  ThresholdResult th;
  if (!a.affine()) {
    CorollaryInputs in;
    if (M && m) {
      in = {*M, *m, false};
    } else {
      in = corollary1_inputs(a);
      if (M) in.M = *M;
      if (m) in.m = *m;
    }
    if (!(in.m > 0.0)) throw HypothesisError("corollary needs inf |f''| > 0");
    th = corollary1_threshold(in);
    if (n < th.n_value) {
      throw HypothesisError("corollary applies from n = " + std::to_string(th.n_value) + ", got n = " +
                            std::to_string(n));
    }
  }
  const auto& e = a.error_norm(n);
  const auto& w = a.dt_modulus(n);
  r = make_report(a, "cor1", n, ClaimKind::lower, e.value, w.value / 64.0, 1.0 / 64.0);
  r.provenance = {Estimate::of("error_norm", e), Estimate::of("dt_modulus", w, a.config().grid.modulus_refine_rounds)};
  for (const auto& [name, v] : th.inputs) r.provenance.push_back(Estimate::exact(name, v));
  if (!a.affine()) r.note = "threshold n1 = " + std::to_string(th.n_value);
  return r;
}

BoundReport eq24_check(Analysis& a, std::int64_t n) {
  require_order(a.function(), 2, "modulus cap");
  const auto& w = a.dt_modulus(n);
  const auto& p = a.weighted(2, 2);
  auto r = make_report(a, "eq2.4", n, ClaimKind::upper, w.value, 16.0 * p.value / static_cast<double>(n), 16.0);
  r.provenance = {Estimate::of("dt_modulus", w, a.config().grid.modulus_refine_rounds),
                  Estimate::of("phi2_f2_norm", p)};
  return r;
}

BoundReport theorem3_check(Analysis& a, std::int64_t n) {
  require_order(a.function(), 2, "residual bound");
  const auto& res = a.residual_norm(n);
  const auto& w = a.dt_modulus(n);
  auto r = make_report(a, "eq2.8", n, ClaimKind::upper, res.value, 4.0 * w.value, 4.0);
  r.provenance = {Estimate::of("residual_norm", res),
                  Estimate::of("dt_modulus", w, a.config().grid.modulus_refine_rounds)};
  if (!a.affine()) {
    const double lambda = lambda_estimate(a, n);
    r.provenance.push_back(Estimate::exact("lambda_estimate", lambda));
    if (lambda < 0.5) {
      r.prerequisite_met = false;
      r.note = "lambda estimate below 1/2 at this n: report only";
    }
  }
  return r;
}

BoundReport theorem4_check(Analysis& a, std::int64_t n) {
  require_order(a.function(), 2, "residual bound");
  const auto& res = a.residual_norm(n);
  const auto& m = a.f2_moduli(n);
  const double nn = static_cast<double>(n);
  const double right = 5.0 / (8.0 * nn) * m.first.value + 13.0 / (64.0 * nn) * m.second.value;
  auto r = make_report(a, "eq2.9", n, ClaimKind::upper, res.value, right, 5.0 / 8.0);
  r.provenance = {Estimate::of("residual_norm", res), Estimate::of("omega1_f2", m.first, 0),
                  Estimate::of("omega2_f2", m.second, 0)};
  if (n < 2 && !a.affine()) {
    r.prerequisite_met = false;
    r.note = "stated for n >= 2: report only";
  }
  return r;
}

BoundReport theoremE_check(Analysis& a, std::int64_t n) {
  require_order(a.function(), 3, "residual bound with phi^3 f'''");
  const auto& res = a.residual_norm(n);
  const auto& w3 = a.weighted(3, 3);
  const double right = std::pow(static_cast<double>(n), -1.5) * w3.value;
  auto r = make_report(a, "eq2.7", n, ClaimKind::upper, res.value, right, 1.0);
  r.provenance = {Estimate::of("residual_norm", res), Estimate::of("phi3_f3_norm", w3)};
  if (n < 12 && !a.affine()) {
    r.prerequisite_met = false;
    r.note = "stated for n >= 12: report only";
  }
  return r;
}

ThresholdResult remark3_n2(Analysis& a, double lambda0, double mu0, N2Variant variant) {
  require_unit_open(lambda0, "lambda0");
  require_unit_open(mu0, "mu0");
  const auto& f = a.function();
  require_order(f, variant == N2Variant::c4 ? 4 : 3, "n2 threshold");
  const double p = a.weighted(2, 2).value;
  if (a.affine() || !(p > 0.0)) throw DegenerateInputError("n2 undefined for affine input");

  ThresholdResult r;
  if (variant == N2Variant::w3phi) {
    const double w3 = a.weighted(3, 3).value;
    const double q = 32.0 * w3 / (lambda0 * (1.0 - mu0) * p);
    r.formula_id = "n2.w3phi";
    r.inputs = {{"lambda0", lambda0}, {"mu0", mu0}, {"phi3_f3_norm", w3}, {"phi2_f2_norm", p}};
    r.n_value = integer_part_plus_one(q * q);
    return r;
  }

  const double f3 = a.weighted(0, 3).value;
  const double f4 = a.weighted(0, 4).value;
  const double target = lambda0 * p * (1.0 - mu0) / 32.0;
  auto ok = [&](std::int64_t n) {
    const double nn = static_cast<double>(n);
    return 5.0 / (8.0 * std::sqrt(nn)) * f3 + 13.0 / (64.0 * nn) * f4 <= target;
  };
  std::int64_t hi = 1;
  std::int64_t lo = 0;  // lo fails (or is 0), hi passes
  while (!ok(hi)) {
    lo = hi;
    if (hi > (INT64_MAX >> 2)) throw NotFoundError("n2 beyond 64-bit range");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  r.formula_id = "n2.c4";
  r.inputs = {{"lambda0", lambda0}, {"mu0", mu0}, {"f3_norm", f3}, {"f4_norm", f4}, {"phi2_f2_norm", p}};
  r.n_value = hi;
  return r;
}

ExampleConstants example_constants() {
  ExampleConstants c;
  const BatchObjective xphi2 = [](std::span<const double> xs, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i] * xs[i] * (1.0 - xs[i]);
  };
  c.xphi2_max_numeric = maximize_on_interval(xphi2, 0.0, 1.0, 4097, 3).value;
  c.quarter_sin_half = std::sin(0.5) / 4.0;
  c.lambda0_sin = 32.0 / (27.0 * std::pow(std::numbers::pi, 3));
  c.e_threshold = 1024.0 * std::numbers::e * std::numbers::e;
  c.cos1 = std::cos(1.0);
  return c;
}

std::vector<ThresholdResult> example_thresholds() {
  const auto c = example_constants();
  std::vector<ThresholdResult> out;

  auto exp_entry = corollary1_threshold(std::numbers::e, 1.0);
  exp_entry.formula_id = "example1.exp.corollary-formula";
  exp_entry.note = "smallest integer above 1024 e^2";
  out.push_back(exp_entry);

  ThresholdResult cos_printed;
  cos_printed.formula_id = "example2.cos.paper-printed";
  cos_printed.inputs = {{"cos(1)", c.cos1}, {"1024/cos(1)", 1024.0 / c.cos1}};
  cos_printed.n_value = integer_part_plus_one(1024.0 / c.cos1);
  cos_printed.note = "printed value [1024/cos(1)]+1; disagrees with the corollary formula (m^2 in the denominator)";
  out.push_back(cos_printed);

  auto cos_formula = corollary1_threshold(1.0, c.cos1);
  cos_formula.formula_id = "example2.cos.corollary-formula";
  cos_formula.note = "[1024 M^2/m^2]+1 with M = 1, m = cos(1)";
  out.push_back(cos_formula);

  const double lambda0 = c.lambda0_sin;
  const double mu0 = c.mu0_sin;
  const double sin_half = std::sin(0.5);
  for (double k : {212.0, 32.0 * 4.0 * (5.0 / 8.0 + 13.0 / 64.0)}) {
    const double q = k / (lambda0 * (1.0 - mu0) * sin_half);
    ThresholdResult r;
    r.formula_id = k == 212.0 ? "example3.sin.n2-printed" : "example3.sin.n2-rederived";
    r.inputs = {{"constant", k},
                {"lambda0=32/(27pi^3)", lambda0},
                {"mu0", mu0},
                {"sin(1/2)", sin_half},
                {"sin(1/2)/4", c.quarter_sin_half},
                {"max x*phi^2(x)=4/27", c.xphi2_max}};
    r.n_value = integer_part_plus_one(q * q);
    r.note = k == 212.0 ? "[(212/(lambda0 (1-mu0) sin(1/2)))^2]+1 as printed"
                        : "same formula with 32*4*(5/8+13/64) = 106 from the preceding inequality";
    out.push_back(r);
  }
  return out;
}

}  // namespace bb
