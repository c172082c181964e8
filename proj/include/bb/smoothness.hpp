#pragma once

#include "bb/function.hpp"
#include "bb/grid.hpp"

namespace bb {

/// sqrt(x(1-x)), clamped to 0 outside [0,1].
double phi(double x);

/// sup_x |phi(x)^p f^(k)(x)|.
NormEstimate weighted_norm(const FunctionSpec& f, int weight_power, int deriv_order, const GridConfig& cfg);

struct ModulusResult {
  double value = 0.0;
  double delta = 0.0;
  double h_star = 0.0;
  double x_star = 0.0;
  int grid_h = 0;
  int grid_x = 0;
};

/// f(x + h phi(x)) - 2 f(x) + f(x - h phi(x)), outer points clamped to [0,1].
double dt_second_difference(const FunctionSpec& f, double h, double x);

/// Admissible interval [h^2/(1+h^2), 1/(1+h^2)] of the weighted step h.
inline double admissible_lo(double h) { return h * h / (1.0 + h * h); }
inline double admissible_hi(double h) { return 1.0 / (1.0 + h * h); }

/// Second-order Ditzian-Totik modulus: sup over 0 <= h <= delta and admissible x of
/// |dt_second_difference(f, h, x)|. delta in (0, 1].
ModulusResult dt_modulus2(const FunctionSpec& f, double delta, const GridConfig& cfg);

/// Classical modulus of order 1 or 2 of g = f^(use_deriv):
///   order 1: sup |g(x+h) - g(x)|,          0 <= h <= delta, x, x+h in [0,1]
///   order 2: sup |g(x+2h) - 2g(x+h) + g(x)|, 0 <= h <= delta, x, x+2h in [0,1]
ModulusResult classical_modulus(const FunctionSpec& f, int use_deriv, int order, double delta,
                                const GridConfig& cfg);

/// Both classical moduli of f^(use_deriv) from one lattice evaluation.
struct ClassicalPair {
  ModulusResult first;
  ModulusResult second;
};
ClassicalPair classical_moduli(const FunctionSpec& f, int use_deriv, double delta, const GridConfig& cfg);

struct KInterval {
  double t = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Bracket on K(f, t^2): [omega/16, min(10 omega, t^2 ||phi^2 f''||)], omega = dt_modulus2(f, t).
KInterval kfunctional_bounds(const FunctionSpec& f, double t, const GridConfig& cfg);

}  // namespace bb
