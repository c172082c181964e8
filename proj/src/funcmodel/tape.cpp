#include "tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bb/error.hpp"
#include "bb/function.hpp"
#include "bb/simd/vecmath.hpp"

namespace bb {
namespace {

bool has_variable(const ExprNode& n) {
  if (n.op == Op::variable) return true;
  return std::any_of(n.children.begin(), n.children.end(), has_variable);
}

// Evaluates a variable-free subtree.
double fold(const ExprNode& n) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::neg: return -fold(n.children[0]);
    case Op::exp: return std::exp(fold(n.children[0]));
    case Op::log: return std::log(fold(n.children[0]));
    case Op::sin: return std::sin(fold(n.children[0]));
    case Op::cos: return std::cos(fold(n.children[0]));
    case Op::tan: return std::tan(fold(n.children[0]));
    case Op::atan: return std::atan(fold(n.children[0]));
    case Op::sqrt: return std::sqrt(fold(n.children[0]));
    case Op::add: return fold(n.children[0]) + fold(n.children[1]);
    case Op::sub: return fold(n.children[0]) - fold(n.children[1]);
    case Op::mul: return fold(n.children[0]) * fold(n.children[1]);
    case Op::div: return fold(n.children[0]) / fold(n.children[1]);
    case Op::pow: return std::pow(fold(n.children[0]), fold(n.children[1]));
    case Op::variable: break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

constexpr double kFactorial[kMaxOrder + 1] = {1.0, 1.0, 2.0, 6.0, 24.0};
constexpr int kMaxIntegerPower = 64;

}  // namespace

Tape::Tape(const ExprNode& root) {
  validate(root);
  result_ = emit(root);
}

int Tape::push(Instr in) {
  in.dst = static_cast<int>(code_.size());
  code_.push_back(std::move(in));
  return code_.back().dst;
}

int Tape::emit(const ExprNode& node) {
  switch (node.op) {
    case Op::constant:
      return push({Code::konst, 0, -1, -1, node.value, 0, render(node)});
    case Op::variable:
      return push({Code::var, 0, -1, -1, 0.0, 0, "x"});
    case Op::pow: {
      const int base = emit(node.children[0]);
      const ExprNode& expo = node.children[1];
      if (!has_variable(expo)) {
        const double c = fold(expo);
        if (!std::isfinite(c)) throw DomainError(render(expo), 0.0);
        if (c == std::round(c) && std::abs(c) <= kMaxIntegerPower) {
          return push({Code::powi, 0, base, -1, c, static_cast<int>(c), render(node)});
        }
        return push({Code::powr, 0, base, -1, c, 0, render(node)});
      }
      // a^b = exp(b log a)
      const int e = emit(expo);
      const std::string label = render(node);
      const int lg = push({Code::log, 0, base, -1, 0.0, 0, label});
      const int prod = push({Code::mul, 0, e, lg, 0.0, 0, label});
      return push({Code::exp, 0, prod, -1, 0.0, 0, label});
    }
    default:
      break;
  }
  if (node.kind() == NodeKind::unary) {
    const int a = emit(node.children[0]);
    Code code = Code::neg;
    switch (node.op) {
      case Op::neg: code = Code::neg; break;
      case Op::exp: code = Code::exp; break;
      case Op::log: code = Code::log; break;
      case Op::sin: code = Code::sin; break;
      case Op::cos: code = Code::cos; break;
      case Op::tan: code = Code::tan; break;
      case Op::atan: code = Code::atan; break;
      case Op::sqrt: code = Code::sqrt; break;
      default: break;
    }
    return push({code, 0, a, -1, 0.0, 0, render(node)});
  }
  const int a = emit(node.children[0]);
  const int b = emit(node.children[1]);
  Code code = Code::add;
  switch (node.op) {
    case Op::add: code = Code::add; break;
    case Op::sub: code = Code::sub; break;
    case Op::mul: code = Code::mul; break;
    case Op::div: code = Code::div; break;
    default: break;
  }
  return push({code, 0, a, b, 0.0, 0, render(node)});
}

void Tape::evaluate(std::span<const double> xs, int order, std::span<double> rows) const {
  if (order < 0 || order > kMaxOrder) throw Error("derivative order out of range: " + std::to_string(order));
  const std::size_t n = xs.size();
  if (rows.size() != static_cast<std::size_t>(order + 1) * n) throw Error("evaluate: output size mismatch");
  std::vector<double> scratch;
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t len = std::min(kBlock, n - start);
    double* out = rows.data() + start;
    switch (order) {
      case 0: run<0>(xs.data() + start, len, scratch, out, n); break;
      case 1: run<1>(xs.data() + start, len, scratch, out, n); break;
      case 2: run<2>(xs.data() + start, len, scratch, out, n); break;
      case 3: run<3>(xs.data() + start, len, scratch, out, n); break;
      default: run<4>(xs.data() + start, len, scratch, out, n); break;
    }
  }
}

// Slots hold normalized Taylor coefficients t_k = f^(k)/k!, one row of kBlock lanes per k.
template <int K>
void Tape::run(const double* xs, std::size_t n, std::vector<double>& scratch, double* out,
               std::size_t stride) const {
  constexpr std::size_t kRows = K + 1;
  // Two companion series (sin<->cos, atan's denominator and quotient) follow the slots.
  const std::size_t aux_base = code_.size() * kRows * kBlock;
  scratch.resize(aux_base + 2 * kRows * kBlock);
  auto row = [&](int slot, int k) { return scratch.data() + (static_cast<std::size_t>(slot) * kRows + k) * kBlock; };
  double* aux[2 * kRows];
  for (std::size_t r = 0; r < 2 * kRows; ++r) aux[r] = scratch.data() + aux_base + r * kBlock;

  const auto& math = simd::math_kernels();

  for (const Instr& in : code_) {
    double* d[kRows];
    for (int k = 0; k <= K; ++k) d[k] = row(in.dst, k);
    const double* a[kRows];
    const double* b[kRows];
    for (int k = 0; k <= K; ++k) {
      a[k] = in.a >= 0 ? row(in.a, k) : nullptr;
      b[k] = in.b >= 0 ? row(in.b, k) : nullptr;
    }

    switch (in.code) {
      case Code::konst:
        std::fill_n(d[0], n, in.c);
        for (int k = 1; k <= K; ++k) std::fill_n(d[k], n, 0.0);
        break;
      case Code::var:
        std::copy_n(xs, n, d[0]);
        for (int k = 1; k <= K; ++k) std::fill_n(d[k], n, k == 1 ? 1.0 : 0.0);
        break;
      case Code::add:
        for (int k = 0; k <= K; ++k)
          for (std::size_t i = 0; i < n; ++i) d[k][i] = a[k][i] + b[k][i];
        break;
      case Code::sub:
        for (int k = 0; k <= K; ++k)
          for (std::size_t i = 0; i < n; ++i) d[k][i] = a[k][i] - b[k][i];
        break;
      case Code::neg:
        for (int k = 0; k <= K; ++k)
          for (std::size_t i = 0; i < n; ++i) d[k][i] = -a[k][i];
        break;
      case Code::mul:
        for (int k = 0; k <= K; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j) s += a[j][i] * b[k - j][i];
            d[k][i] = s;
          }
        }
        break;
      case Code::div:
        for (std::size_t i = 0; i < n; ++i) d[0][i] = a[0][i] / b[0][i];
        for (int k = 1; k <= K; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            double s = a[k][i];
            for (int j = 1; j <= k; ++j) s -= b[j][i] * d[k - j][i];
            d[k][i] = s / b[0][i];
          }
        }
        break;
      case Code::exp:
        math.exp(a[0], d[0], n);
        for (int k = 1; k <= K; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += j * a[j][i] * d[k - j][i];
            d[k][i] = s / k;
          }
        }
        break;
      case Code::log:
        math.log(a[0], d[0], n);
        for (int k = 1; k <= K; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 1; j < k; ++j) s += j * d[j][i] * a[k - j][i];
            d[k][i] = (a[k][i] - s / k) / a[0][i];
          }
        }
        break;
      case Code::sin:
      case Code::cos: {
        if constexpr (K == 0) {
          (in.code == Code::sin ? math.sin : math.cos)(a[0], d[0], n);
          break;
        } else {
          double** s = in.code == Code::sin ? d : aux;
          double** c = in.code == Code::sin ? aux : d;
          math.sincos(a[0], s[0], c[0], n);
          for (int k = 1; k <= K; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
              double ss = 0.0;
              double cc = 0.0;
              for (int j = 1; j <= k; ++j) {
                ss += j * a[j][i] * c[k - j][i];
                cc += j * a[j][i] * s[k - j][i];
              }
              s[k][i] = ss / k;
              c[k][i] = -cc / k;
            }
          }
          break;
        }
      }
      case Code::tan: {
        double** u = aux;  // u = 1 + tan^2
        for (std::size_t i = 0; i < n; ++i) {
          d[0][i] = std::tan(a[0][i]);
          u[0][i] = 1.0 + d[0][i] * d[0][i];
        }
        for (int k = 1; k <= K; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += j * a[j][i] * u[k - j][i];
            d[k][i] = s / k;
            double t = 0.0;
            for (int j = 0; j <= k; ++j) t += d[j][i] * d[k - j][i];
            u[k][i] = t;
          }
        }
        break;
      }
      case Code::atan: {
        // atan' = a' / (1 + a^2); den in aux[0..K], quotient in aux[K+1..].
        double** den = aux;
        double** q = aux + kRows;
        for (std::size_t i = 0; i < n; ++i) d[0][i] = std::atan(a[0][i]);
        for (int m = 0; m < K; ++m) {
          for (std::size_t i = 0; i < n; ++i) {
            double e = m == 0 ? 1.0 : 0.0;
            for (int j = 0; j <= m; ++j) e += a[j][i] * a[m - j][i];
            den[m][i] = e;
            double s = (m + 1) * a[m + 1][i];
            for (int j = 1; j <= m; ++j) s -= den[j][i] * q[m - j][i];
            q[m][i] = s / den[0][i];
            d[m + 1][i] = q[m][i] / (m + 1);
          }
        }
        break;
      }
      case Code::sqrt:
        for (std::size_t i = 0; i < n; ++i) d[0][i] = std::sqrt(a[0][i]);
        for (int k = 1; k <= K; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            double s = a[k][i];
            for (int j = 1; j < k; ++j) s -= d[j][i] * d[k - j][i];
            d[k][i] = s / (2.0 * d[0][i]);
          }
        }
        break;
      case Code::powi: {
        // Row-wise binary powering: acc lives in d, base and the product in aux rows.
        const int p = std::abs(in.ipow);
        double* base[kRows];
        double* tmp[kRows];
        for (int k = 0; k <= K; ++k) {
          base[k] = aux[k];
          tmp[k] = aux[kRows + k];
          std::copy_n(a[k], n, base[k]);
          std::fill_n(d[k], n, k == 0 ? 1.0 : 0.0);
        }
        auto mul_into = [&](double* const* x, double* const* y) {
          for (int k = 0; k <= K; ++k) {
            std::fill_n(tmp[k], n, 0.0);
            for (int j = 0; j <= k; ++j)
              for (std::size_t i = 0; i < n; ++i) tmp[k][i] += x[j][i] * y[k - j][i];
          }
        };
        for (int e = p; e > 0; e >>= 1) {
          if (e & 1) {
            mul_into(d, base);
            for (int k = 0; k <= K; ++k) std::copy_n(tmp[k], n, d[k]);
          }
          if (e > 1) {
            mul_into(base, base);
            for (int k = 0; k <= K; ++k) std::copy_n(tmp[k], n, base[k]);
          }
        }
        if (in.ipow < 0) {
          for (int k = 0; k <= K; ++k) std::copy_n(d[k], n, base[k]);
          for (std::size_t i = 0; i < n; ++i) d[0][i] = 1.0 / base[0][i];
          for (int k = 1; k <= K; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
              double s = 0.0;
              for (int j = 1; j <= k; ++j) s += base[j][i] * d[k - j][i];
              d[k][i] = -s / base[0][i];
            }
          }
        }
        break;
      }
      case Code::powr: {
        // Non-integer exponent: the base must be strictly positive.
        const double c = in.c;
        for (std::size_t i = 0; i < n; ++i) {
          const double a0 = a[0][i];
          if (!(a0 > 0.0)) {
            for (int k = 0; k <= K; ++k) d[k][i] = std::numeric_limits<double>::quiet_NaN();
            continue;
          }
          d[0][i] = std::pow(a0, c);
          for (int k = 1; k <= K; ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += (c * j - k + j) * a[j][i] * d[k - j][i];
            d[k][i] = s / (k * a0);
          }
        }
        break;
      }
    }

    for (int k = 0; k <= K; ++k) {
      // x*0 is 0 for finite x and NaN otherwise; the sum vectorizes.
      double probe = 0.0;
      for (std::size_t i = 0; i < n; ++i) probe += d[k][i] * 0.0;
      if (probe == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(d[k][i])) throw DomainError(in.label, xs[i]);
      }
    }
  }

  for (int k = 0; k <= K; ++k) {
    const double* src = row(result_, k);
    double* dst = out + static_cast<std::size_t>(k) * stride;
    for (std::size_t i = 0; i < n; ++i) dst[i] = kFactorial[k] * src[i];
  }
}

}  // namespace bb
