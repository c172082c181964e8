#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bb/function.hpp"
#include "bb/grid.hpp"
#include "bb/smoothness.hpp"

namespace bb {

struct CheckConfig {
  GridConfig grid;
  double slack = 1e-2;       // relative, applied in the direction that favours the claim
  double abs_floor = 1e-12;  // absolute allowance for sides that vanish exactly
  std::int64_t n_max = 1'000'000;

  void validate() const;
};

enum class ClaimKind { upper, lower };

/// One numerically estimated quantity entering a report, with its grid metadata.
struct Estimate {
  std::string quantity;
  std::string kind;  // "sup-underestimate" or "closed-form"
  double value = 0.0;
  double x = 0.0;
  double h = 0.0;
  int grid_x = 0;
  int grid_h = 0;
  int rounds = 0;

  static Estimate of(std::string quantity, const NormEstimate& e);
  static Estimate of(std::string quantity, const ModulusResult& m, int rounds);
  static Estimate exact(std::string quantity, double value);
};

struct BoundReport {
  std::string claim_id;
  std::int64_t n = 0;
  ClaimKind kind = ClaimKind::upper;
  double left = 0.0;
  double right = 0.0;
  double constant = 0.0;
  bool holds = false;
  double slack = 0.0;
  double abs_floor = 0.0;
  bool prerequisite_met = true;  // false: report-only, not counted as a failure
  std::string note;
  std::vector<Estimate> provenance;
};

/// upper: left <= right (1 + slack) + floor;  lower: left >= right (1 - slack) - floor.
bool claim_holds(ClaimKind kind, double left, double right, double slack, double abs_floor);

struct ThresholdResult {
  std::string formula_id;
  std::vector<std::pair<std::string, double>> inputs;
  std::int64_t n_value = 1;
  std::string note;
};

/// Memoized per-function quantities at a given n (delta = 1/sqrt(n)). Not thread-safe;
/// use one instance per thread.
class Analysis {
 public:
  Analysis(FunctionSpec f, CheckConfig cfg);

  const FunctionSpec& function() const noexcept { return f_; }
  const CheckConfig& config() const noexcept { return cfg_; }
  bool affine() const noexcept { return affine_; }

  const NormEstimate& error_norm(std::int64_t n);       // ||f - B_n f||
  const ModulusResult& dt_modulus(std::int64_t n);      // omega^2_phi(f, 1/sqrt(n))
  const NormEstimate& residual_norm(std::int64_t n);    // ||B_n f - f - phi^2 f''/(2n)||
  const ClassicalPair& f2_moduli(std::int64_t n);       // omega_1, omega_2 of f'' at 1/sqrt(n)
  const NormEstimate& weighted(int weight_power, int deriv_order);  // ||phi^p f^(k)||

 private:
  FunctionSpec f_;
  CheckConfig cfg_;
  bool affine_;
  std::map<std::int64_t, NormEstimate> error_;
  std::map<std::int64_t, ModulusResult> modulus_;
  std::map<std::int64_t, NormEstimate> residual_;
  std::map<std::int64_t, ClassicalPair> f2_;
  std::map<std::pair<int, int>, NormEstimate> weighted_;
};

struct SandwichResult {
  BoundReport upper;  // ||f - B_n f|| <= 3 omega
  BoundReport lower;  // ||f - B_n f|| >= (mu0/32) omega
  std::optional<double> ratio;  // E/omega; empty for affine f (0/0)
};

SandwichResult sandwich_check(Analysis& a, std::int64_t n, double mu0);

/// n omega^2_phi(f, 1/sqrt(n)) / ||phi^2 f''||. Throws DegenerateInputError for affine f.
double lambda_estimate(Analysis& a, std::int64_t n);

/// Smallest n <= n_max from which lambda_estimate stays >= lambda0 on the sampled set
/// {2..1000} plus geometric points (ratio 2^(1/8)) above, plus n_max.
ThresholdResult find_n0(Analysis& a, double lambda0, std::int64_t n_max);

/// (5/(8n) omega_1(f'') + 13/(64n) omega_2(f'')) / omega^2_phi(f, 1/sqrt(n)).
double an_value(Analysis& a, std::int64_t n);

struct AnBracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// [S/(16 ||phi^2 f''||), S/(lambda0 ||phi^2 f''||)], S = 5/8 omega_1 + 13/64 omega_2 of f''.
AnBracket an_bracket(Analysis& a, std::int64_t n, double lambda0);

/// Smallest n >= n0 with 1/32 - an_bracket(n).upper >= mu0/32.
ThresholdResult find_n1(Analysis& a, double mu0, double lambda0, std::int64_t n_max);

/// floor(1024 M^2 / m^2) + 1.
ThresholdResult corollary1_threshold(double M, double m);

struct CorollaryInputs {
  double M = 0.0;  // sup |f'''|
  double m = 0.0;  // inf |f''|
  bool estimated = true;
};

/// Grid estimates of M and m. Throws HypothesisError when m vanishes.
CorollaryInputs corollary1_inputs(Analysis& a);

/// Threshold from (possibly estimated) inputs; M = 0 (f''' vanishes) gives n = 1.
ThresholdResult corollary1_threshold(const CorollaryInputs& in);

/// ||f - B_n f|| >= omega/64. Throws HypothesisError when inf |f''| = 0 or n is below
/// the threshold. Explicit M and m take precedence over estimates.
BoundReport corollary1_check(Analysis& a, std::int64_t n, std::optional<double> M = std::nullopt,
                             std::optional<double> m = std::nullopt);

/// omega^2_phi(f, 1/sqrt(n)) <= 16 ||phi^2 f''|| / n.
BoundReport eq24_check(Analysis& a, std::int64_t n);

/// Voronovskaja residual norm <= 4 omega. Report-only unless lambda_estimate(n) >= 1/2.
BoundReport theorem3_check(Analysis& a, std::int64_t n);

/// Voronovskaja residual norm <= 5/(8n) omega_1(f'') + 13/(64n) omega_2(f''). Report-only for n < 2.
BoundReport theorem4_check(Analysis& a, std::int64_t n);

/// Voronovskaja residual norm <= n^(-3/2) ||phi^3 f'''||. Report-only for n < 12; needs f'''.
BoundReport theoremE_check(Analysis& a, std::int64_t n);

enum class N2Variant { c4, w3phi };

ThresholdResult remark3_n2(Analysis& a, double lambda0, double mu0, N2Variant variant);

/// Constants of the worked examples.
struct ExampleConstants {
  double xphi2_max = 4.0 / 27.0;  // max of x phi^2(x), at x = 2/3
  double xphi2_max_numeric = 0.0;
  double quarter_sin_half = 0.0;  // sin(1/2)/4, lower bound of ||phi^2 sin''||
  double lambda0_sin = 0.0;       // 32/(27 pi^3)
  double mu0_sin = 0.5;
  double e_threshold = 0.0;       // 1024 e^2
  double cos1 = 0.0;
};

ExampleConstants example_constants();

/// exp, cos (paper-printed and corollary-formula), sin (printed and re-derived constant).
std::vector<ThresholdResult> example_thresholds();

}  // namespace bb
