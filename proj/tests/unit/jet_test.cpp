#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "bb/error.hpp"
#include "bb/function.hpp"

namespace {

bb::Jet jet_of(const char* src, double x, int order = 4) { return bb::eval_jet(bb::parse(src), x, order); }

}  // namespace

TEST(Jet, SquareAtHalf) {
  const auto j = jet_of("x^2", 0.5);
  EXPECT_DOUBLE_EQ(j[0], 0.25);
  EXPECT_DOUBLE_EQ(j[1], 1.0);
  EXPECT_DOUBLE_EQ(j[2], 2.0);
  EXPECT_DOUBLE_EQ(j[3], 0.0);
  EXPECT_DOUBLE_EQ(j[4], 0.0);
}

TEST(Jet, SinMaclaurin) {
  const auto j = jet_of("sin(x)", 0.0, 3);
  EXPECT_DOUBLE_EQ(j[0], 0.0);
  EXPECT_DOUBLE_EQ(j[1], 1.0);
  EXPECT_DOUBLE_EQ(j[2], 0.0);
  EXPECT_DOUBLE_EQ(j[3], -1.0);
}

TEST(Jet, ExpAtOne) {
  const auto j = jet_of("exp(x)", 1.0);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(j[k], std::numbers::e, 4e-16) << k;
}

TEST(Jet, PolynomialExactness) {
  // d^j/dx^j x^k = k!/(k-j)! x^(k-j)
  for (int k = 0; k <= 4; ++k) {
    const std::string src = "x^" + std::to_string(k);
    for (double x : {0.0, 0.125, 0.3, 0.5, 0.875, 1.0}) {
      const auto j = jet_of(src.c_str(), x);
      for (int d = 0; d <= 4; ++d) {
        double want = 0.0;
        if (d <= k) {
          double c = 1.0;
          for (int i = 0; i < d; ++i) c *= k - i;
          want = c * std::pow(x, k - d);
        }
        EXPECT_NEAR(j[d], want, 1e-14) << src << " d" << d << " at " << x;
      }
    }
  }
}

TEST(Jet, ProductAndQuotientAgainstClosedForms) {
  const double x = 0.37;
  // (x e^x)'''' = (x+4) e^x
  EXPECT_NEAR(jet_of("x*exp(x)", x)[4], (x + 4) * std::exp(x), 1e-13);
  // (1/(1+x^2))'' = (6x^2 - 2)/(1+x^2)^3
  EXPECT_NEAR(jet_of("1/(1+x^2)", x)[2], (6 * x * x - 2) / std::pow(1 + x * x, 3), 1e-13);
  // atan'' = -2x/(1+x^2)^2
  EXPECT_NEAR(jet_of("atan(x)", x)[2], -2 * x / std::pow(1 + x * x, 2), 1e-14);
  // sqrt(1+x)''' = 3/8 (1+x)^(-5/2)
  EXPECT_NEAR(jet_of("sqrt(1+x)", x)[3], 0.375 * std::pow(1 + x, -2.5), 1e-14);
  // tan' = 1 + tan^2
  const double t = std::tan(x);
  EXPECT_NEAR(jet_of("tan(x)", x)[1], 1 + t * t, 1e-14);
  // log(1+x)'''' = -6/(1+x)^4
  EXPECT_NEAR(jet_of("log(1+x)", x)[4], -6 / std::pow(1 + x, 4), 1e-13);
  // 2^x: ln2^4 2^x
  EXPECT_NEAR(jet_of("2^x", x)[4], std::pow(std::log(2.0), 4) * std::pow(2.0, x), 1e-14);
  // x^0.5 at x>0 through pow
  EXPECT_NEAR(jet_of("(1+x)^1.5", x)[2], 0.75 * std::pow(1 + x, -0.5), 1e-14);
}

// Each derivative against a central difference of the one below it (step 1e-4,
// 1001 points, 1e-3 away from the endpoints). Error relative to max(|d_k|, 1).
TEST(Jet, MatchesFiniteDifferencesOnCorpus) {
  constexpr double h = 1e-4;
  const auto xs = bb::uniform_grid(1e-3, 1.0 - 1e-3, 1001);
  for (const auto& f : bb::builtin_corpus()) {
    ASSERT_EQ(f.max_order(), 4) << f.name();
    double worst = 0.0;
    for (double x : xs) {
      const auto j = f.jet(x, 4);
      const auto jp = f.jet(x + h, 4);
      const auto jm = f.jet(x - h, 4);
      for (int k = 1; k <= 4; ++k) {
        const double fd = (jp[k - 1] - jm[k - 1]) / (2 * h);
        worst = std::max(worst, std::abs(fd - j[k]) / std::max(std::abs(j[k]), 1.0));
      }
    }
    EXPECT_LE(worst, 1e-6) << f.name();
  }
}

TEST(Jet, EntriesAboveOrderAreZero) {
  const auto j = jet_of("exp(x)", 0.5, 1);
  EXPECT_EQ(j[2], 0.0);
  EXPECT_EQ(j[4], 0.0);
}

TEST(Jet, DomainErrorNamesNode) {
  try {
    jet_of("log(x)", 0.0, 0);
    FAIL() << "expected DomainError";
  } catch (const bb::DomainError& e) {
    EXPECT_NE(e.node().find("log"), std::string::npos) << e.node();
  }
  EXPECT_THROW(jet_of("1/(x-0.5)", 0.5, 0), bb::DomainError);
  EXPECT_THROW(jet_of("sqrt(x)", 0.0, 1), bb::DomainError);
}

TEST(FunctionSpec, CorpusContents) {
  const auto corpus = bb::builtin_corpus();
  for (const char* name : {"x", "x2", "x3", "exp", "sin", "cos", "atan", "runge", "affine"}) {
    const auto f = bb::find_builtin(name);
    ASSERT_TRUE(f.has_value()) << name;
    EXPECT_EQ(f->max_order(), 4) << name;
  }
  EXPECT_GE(corpus.size(), 8u);
  EXPECT_TRUE(bb::find_builtin("x")->is_affine());
  EXPECT_TRUE(bb::find_builtin("affine")->is_affine());
  EXPECT_FALSE(bb::find_builtin("x2")->is_affine());
  EXPECT_FALSE(bb::find_builtin("nope").has_value());
}

TEST(FunctionSpec, ProbeGridRejectsInadmissible) {
  EXPECT_THROW(bb::FunctionSpec::from_text("f", "log(x)", 0), bb::Error);
  EXPECT_THROW(bb::FunctionSpec::from_text("f", "1/(x-0.5)"), bb::Error);
  // sqrt(x) is finite at 0 but its derivative is not
  EXPECT_EQ(bb::FunctionSpec::from_text("f", "sqrt(x)").max_order(), 0);
  EXPECT_THROW(bb::FunctionSpec::from_text("f", "sqrt(x)", 2), bb::Error);
}

TEST(FunctionSpec, BatchedEvaluationMatchesJets) {
  const auto f = *bb::find_builtin("runge");
  const auto xs = bb::uniform_grid(0.0, 1.0, 37);
  std::vector<double> rows(5 * xs.size());
  f.evaluate(xs, 4, rows);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto j = f.jet(xs[i], 4);
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(rows[k * xs.size() + i], j[k], 1e-13 * std::max(1.0, std::abs(j[k])));
  }
  std::vector<double> d2(xs.size());
  f.derivatives(xs, 2, d2);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_DOUBLE_EQ(d2[i], rows[2 * xs.size() + i]);
}

TEST(FunctionSpec, UniformGridEndpointsExact) {
  const auto g = bb::uniform_grid(0.0, 1.0, 4097);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(g[2048], 0.5);
}
