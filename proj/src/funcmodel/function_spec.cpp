#include <algorithm>
#include <cmath>

#include "bb/error.hpp"
#include "bb/function.hpp"
#include "tape.hpp"

namespace bb {

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = a;
    return g;
  }
  const double span = b - a;
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + span * (static_cast<double>(i) / last);
  g.back() = b;
  return g;
}

Jet eval_jet(const ExprNode& body, double x, int order) {
  const Tape tape(body);
  Jet j;
  tape.evaluate(std::span<const double>(&x, 1), order, std::span<double>(j.d.data(), order + 1));
  return j;
}

FunctionSpec::FunctionSpec(std::string name, ExprNode body, int max_order)
    : name_(std::move(name)), body_(std::move(body)), max_order_(max_order) {
  if (max_order_ < 0 || max_order_ > kMaxOrder) {
    throw Error("max_order must be in 0.." + std::to_string(kMaxOrder));
  }
  tape_ = std::make_shared<const Tape>(body_);
  const auto probe = uniform_grid(0.0, 1.0, kProbePoints);
  std::vector<double> rows(static_cast<std::size_t>(max_order_ + 1) * probe.size());
  tape_->evaluate(probe, max_order_, rows);
}

FunctionSpec FunctionSpec::from_text(std::string name, std::string_view src, std::optional<int> max_order) {
  ExprNode body = parse(src);
  if (max_order) return FunctionSpec(std::move(name), std::move(body), *max_order);
  // Largest order with finite jets on the probe grid; order 0 failures propagate.
  for (int k = kMaxOrder; k > 0; --k) {
    try {
      return FunctionSpec(name, body, k);
    } catch (const DomainError&) {
    }
  }
  return FunctionSpec(std::move(name), std::move(body), 0);
}

void FunctionSpec::require_order(int order) const {
  if (order < 0 || order > max_order_) {
    throw HypothesisError("'" + name_ + "' provides derivatives up to order " + std::to_string(max_order_) +
                          ", order " + std::to_string(order) + " requested");
  }
}

double FunctionSpec::value(double x) const {
  double v = 0.0;
  tape_->evaluate(std::span<const double>(&x, 1), 0, std::span<double>(&v, 1));
  return v;
}

double FunctionSpec::derivative(double x, int k) const { return jet(x, k)[k]; }

Jet FunctionSpec::jet(double x, int order) const {
  require_order(order);
  Jet j;
  tape_->evaluate(std::span<const double>(&x, 1), order, std::span<double>(j.d.data(), order + 1));
  return j;
}

void FunctionSpec::evaluate(std::span<const double> xs, int order, std::span<double> rows) const {
  require_order(order);
  tape_->evaluate(xs, order, rows);
}

void FunctionSpec::values(std::span<const double> xs, std::span<double> out) const {
  tape_->evaluate(xs, 0, out);
}

void FunctionSpec::derivatives(std::span<const double> xs, int k, std::span<double> out) const {
  require_order(k);
  if (k == 0) {
    tape_->evaluate(xs, 0, out);
    return;
  }
  std::vector<double> rows(static_cast<std::size_t>(k + 1) * xs.size());
  tape_->evaluate(xs, k, rows);
  std::copy_n(rows.begin() + static_cast<std::ptrdiff_t>(k * xs.size()), xs.size(), out.begin());
}

bool FunctionSpec::is_affine() const {
  const auto probe = uniform_grid(0.0, 1.0, kProbePoints);
  if (max_order_ < 2) return false;
  std::vector<double> rows(3 * probe.size());
  tape_->evaluate(probe, 2, rows);
  double fmax = 0.0;
  double f2max = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    fmax = std::max(fmax, std::abs(rows[i]));
    f2max = std::max(f2max, std::abs(rows[2 * probe.size() + i]));
  }
  return f2max <= 1e-10 * (1.0 + fmax);
}

std::vector<FunctionSpec> builtin_corpus() {
  struct Entry {
    const char* name;
    const char* expr;
  };
  static constexpr Entry kEntries[] = {
      {"x", "x"},
      {"affine", "1 + 0.5*x"},
      {"x2", "x^2"},
      {"x3", "x^3"},
      {"exp", "exp(x)"},
      {"sin", "sin(x)"},
      {"cos", "cos(x)"},
      {"atan", "atan(x)"},
      {"runge", "1/(1+x^2)"},
  };
  std::vector<FunctionSpec> out;
  out.reserve(std::size(kEntries));
  for (const auto& e : kEntries) out.push_back(FunctionSpec::from_text(e.name, e.expr, kMaxOrder));
  return out;
}

std::optional<FunctionSpec> find_builtin(std::string_view name) {
  for (auto& f : builtin_corpus()) {
    if (f.name() == name) return f;
  }
  return std::nullopt;
}

}  // namespace bb
