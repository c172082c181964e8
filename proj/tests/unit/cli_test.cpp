#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bb/cli.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = bb::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> v;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      v.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  v.push_back(cur);
  return v;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~ScopedEnv() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST(CliEval, Identity) {
  const auto r = run({"eval", "--expr", "x", "--n", "10", "--x", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 1u);
  EXPECT_EQ(j["rows"][0]["x"], 0.5);
  EXPECT_EQ(j["rows"][0]["f"], 0.5);
  EXPECT_NEAR(j["rows"][0]["bn"].get<double>(), 0.5, 1e-15);
  EXPECT_NEAR(j["rows"][0]["diff"].get<double>(), 0.0, 1e-15);
}

TEST(CliEval, SquareCsv) {
  const auto r = run({"eval", "--expr", "x^2", "--n", "10", "--x", "0.5,0", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "x,f,bn,diff");
  const auto row = split(l[1]);
  EXPECT_EQ(std::stod(row[0]), 0.5);
  EXPECT_EQ(std::stod(row[1]), 0.25);
  EXPECT_NEAR(std::stod(row[2]), 0.275, 1e-15);
  EXPECT_NEAR(std::stod(row[3]), 0.025, 1e-15);
  EXPECT_EQ(l[2], "0,0,0,0");
}

TEST(CliEval, SyntaxErrorExitsTwo) {
  const auto r = run({"eval", "--expr", "sin(", "--n", "10", "--x", "0.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("offset 4"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliEval, UsageErrors) {
  EXPECT_EQ(run({"eval", "--expr", "x", "--n", "10", "--x", "1.5"}).code, 2);
  EXPECT_EQ(run({"eval", "--expr", "x", "--builtin", "exp", "--n", "10", "--x", "0.5"}).code, 2);
  EXPECT_EQ(run({"eval", "--builtin", "nope", "--n", "10", "--x", "0.5"}).code, 2);
  EXPECT_EQ(run({"eval", "--expr", "x", "--x", "0.5"}).code, 2);
  EXPECT_EQ(run({"eval", "--expr", "x", "--n", "0", "--x", "0.5"}).code, 2);
  EXPECT_EQ(run({"eval", "--expr", "x", "--n", "3", "--x", "0.5", "--grid", "16"}).code, 2);
  EXPECT_EQ(run({"eval", "--expr", "x", "--n", "3", "--x", "0.5", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"eval", "--expr", "log(x)", "--n", "3", "--x", "0.5"}).code, 2);
}

TEST(CliEval, HumanFormat) {
  const auto r = run({"eval", "--builtin", "exp", "--n", "1", "--x", "0.5", "--format", "human"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("exp(x)"), std::string::npos);
  EXPECT_NE(r.out.find("1.64872"), std::string::npos) << r.out;
}

TEST(CliVerify, QuadraticAllClaimsHold) {
  const auto r = run({"verify", "--expr", "x^2", "--n", "10,100"});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["reports"].size(), 14u);
  for (const auto& rep : j["reports"]) {
    EXPECT_NE(rep["status"], "fail") << rep.dump();
    EXPECT_NE(rep["status"], "hypothesis-violation") << rep.dump();
  }
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"function", "config", "reports", "thresholds"}));
}

TEST(CliVerify, SinCorollaryIsHypothesisViolation) {
  const auto r = run({"verify", "--expr", "sin(x)", "--claims", "cor1", "--n", "100"});
  EXPECT_EQ(r.code, 3);
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["reports"].size(), 1u);
  EXPECT_EQ(j["reports"][0]["claim_id"], "cor1");
  EXPECT_EQ(j["reports"][0]["status"], "hypothesis-violation");
  EXPECT_FALSE(r.err.empty());
}

TEST(CliVerify, HypothesisDoesNotAbortBatch) {
  const auto r = run({"verify", "--builtin", "sin", "--claims", "cor1,eq1.5-upper", "--n", "50", "--format", "csv"});
  EXPECT_EQ(r.code, 3);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "claim_id,n,kind,left,right,constant,status");
  EXPECT_EQ(l[1], "cor1,50,,,,,hypothesis-violation");
  EXPECT_EQ(split(l[2])[0], "eq1.5-upper");
  EXPECT_EQ(split(l[2])[6], "hold");
}

TEST(CliVerify, AffineTriviallyHolds) {
  const auto r = run({"verify", "--expr", "x", "--n", "1,5,40", "--format", "human"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("fail"), std::string::npos);
}

TEST(CliVerify, UnknownClaimIsUsageError) {
  EXPECT_EQ(run({"verify", "--expr", "x", "--claims", "eq9.9", "--n", "5"}).code, 2);
  EXPECT_EQ(run({"verify", "--expr", "x", "--n", "5", "--mu0", "1.5"}).code, 2);
}

TEST(CliSweep, QuadraticRatioIsHalf) {
  const auto r = run({"sweep", "--expr", "x^2", "--n-from", "10", "--n-to", "100", "--n-step", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 11u);
  EXPECT_EQ(l[0], "n,err_norm,dt_modulus,ratio,an_value,vor_residual_norm,thm4_bound,thmE_bound");
  for (std::size_t i = 1; i < l.size(); ++i) {
    const auto c = split(l[i]);
    ASSERT_EQ(c.size(), 8u);
    EXPECT_NEAR(std::stod(c[3]), 0.5, 5e-3) << l[i];
    EXPECT_EQ(std::stod(c[4]), 0.0);
  }
  // thmE needs n >= 12
  EXPECT_EQ(split(l[1])[7], "");
  EXPECT_NE(split(l[2])[7], "");
}

TEST(CliSweep, AffineColumnsVanish) {
  const auto r = run({"sweep", "--expr", "x", "--n-from", "2", "--n-to", "64", "--geometric"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 7u);  // 2 4 8 16 32 64
  for (std::size_t i = 1; i < l.size(); ++i) {
    const auto c = split(l[i]);
    EXPECT_LE(std::stod(c[1]), 1e-12);
    EXPECT_LE(std::stod(c[2]), 1e-12);
    EXPECT_EQ(c[3], "");
    EXPECT_EQ(c[4], "");
  }
}

TEST(CliSweep, ExpAnValueDecays) {
  const auto r = run({"sweep", "--expr", "exp(x)", "--n-from", "10", "--n-to", "10000", "--geometric"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  std::vector<std::pair<double, double>> an;
  for (std::size_t i = 1; i < l.size(); ++i) {
    const auto c = split(l[i]);
    an.emplace_back(std::stod(c[0]), std::stod(c[4]));
  }
  ASSERT_EQ(an.back().first, 10000.0);
  for (std::size_t i = 1; i < an.size(); ++i) EXPECT_LT(an[i].second, an[i - 1].second) << an[i].first;
  // at least a factor 1.2 per decade between the endpoints
  const double decades = std::log10(an.back().first / an.front().first);
  EXPECT_GE(an.front().second / an.back().second, std::pow(1.2, decades));
}

TEST(CliSweep, JsonRowsAndBadRange) {
  const auto r = run({"sweep", "--builtin", "x2", "--n-from", "5", "--n-to", "6", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(run({"sweep", "--builtin", "x2", "--n-from", "6", "--n-to", "5"}).code, 2);
  EXPECT_EQ(run({"sweep", "--builtin", "x2", "--n-from", "1", "--n-to", "5"}).code, 2);
}

TEST(CliThresholds, ExpCorollaryEntry) {
  const auto r = run({"thresholds", "--expr", "exp(x)", "--n-max", "50"});
  const auto j = json::parse(r.out);
  bool found = false;
  for (const auto& t : j["thresholds"]) {
    if (t["formula_id"] == "cor1") {
      found = true;
      EXPECT_EQ(t["n_value"], 7567);
    }
  }
  EXPECT_TRUE(found) << r.out;
  EXPECT_TRUE(r.code == 0 || r.code == 3);
}

TEST(CliThresholds, QuadraticN1IsTwo) {
  const auto r = run({"thresholds", "--expr", "x^2", "--mu0", "0.99", "--lambda0", "0.9", "--n-max", "60"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  std::map<std::string, std::int64_t> got;
  for (const auto& t : j["thresholds"]) got[t["formula_id"].get<std::string>()] = t["n_value"].get<std::int64_t>();
  EXPECT_EQ(got.at("n1"), 2);
  EXPECT_EQ(got.at("n0"), 2);
  EXPECT_EQ(got.at("n2.c4"), 1);
  EXPECT_EQ(got.at("n2.w3phi"), 1);
  EXPECT_EQ(got.at("cor1"), 1);
}

TEST(CliThresholds, SinSkipsCorollary) {
  const auto r = run({"thresholds", "--expr", "sin(x)", "--n-max", "40"});
  EXPECT_EQ(r.code, 3);
  const auto j = json::parse(r.out);
  std::vector<std::string> ids;
  for (const auto& t : j["thresholds"]) ids.push_back(t["formula_id"]);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), "cor1"), 0);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), "n2.c4"), 1);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), "n2.w3phi"), 1);
  EXPECT_NE(r.err.find("cor1"), std::string::npos);
}

TEST(CliExamples, ContentsAndDiscrepancyFlags) {
  const auto r = run({"examples"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["constants"]["max_x_phi2"].get<double>(), 4.0 / 27.0);
  EXPECT_EQ(j["constants"]["lambda0_sin"].get<double>(), 32.0 / (27.0 * std::pow(M_PI, 3)));
  EXPECT_EQ(j["constants"]["quarter_sin_half"].get<double>(), std::sin(0.5) / 4);
  std::map<std::string, std::int64_t> got;
  for (const auto& t : j["thresholds"]) got[t["formula_id"].get<std::string>()] = t["n_value"].get<std::int64_t>();
  EXPECT_EQ(got.at("example1.exp.corollary-formula"), 7567);
  EXPECT_EQ(got.at("example2.cos.paper-printed"), 1896);
  EXPECT_EQ(got.at("example2.cos.corollary-formula"), 3508);
  EXPECT_TRUE(got.count("example3.sin.n2-printed"));
  EXPECT_TRUE(got.count("example3.sin.n2-rederived"));
  for (const auto& rep : j["reports"]) EXPECT_EQ(rep["status"], "hold") << rep.dump();
  EXPECT_NE(j["notes"].dump().find("1896"), std::string::npos);

  // the constants appear to 12 significant digits
  const auto h = run({"examples", "--format", "human"});
  EXPECT_EQ(h.code, 0);
  for (double v : {4.0 / 27.0, std::sin(0.5), 32.0 / (27.0 * std::pow(M_PI, 3))}) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    EXPECT_NE(r.out.find(buf), std::string::npos) << buf;
  }
  EXPECT_NE(h.out.find("1896"), std::string::npos);
  EXPECT_NE(h.out.find("3508"), std::string::npos);
}

TEST(CliDeterminism, ByteIdenticalJson) {
  const std::vector<std::string> args = {"verify", "--builtin", "atan", "--n", "7,30", "--claims", "eq1.5-upper,eq2.9"};
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliEnvironment, GridPointsOverride) {
  const std::vector<std::string> args = {"verify", "--builtin", "x2", "--n", "10", "--claims", "eq1.5-upper"};
  {
    ScopedEnv env("BB_GRID_POINTS", "33");
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["config"]["grid_points"], 33);
    auto explicit_grid = args;
    explicit_grid.insert(explicit_grid.end(), {"--grid", "65"});
    EXPECT_EQ(json::parse(run(explicit_grid).out)["config"]["grid_points"], 65);
  }
  {
    ScopedEnv env("BB_GRID_POINTS", "20");
    EXPECT_EQ(run(args).code, 2);
  }
  {
    ScopedEnv env("BB_GRID_POINTS", "abc");
    EXPECT_EQ(run(args).code, 2);
  }
  EXPECT_EQ(json::parse(run(args).out)["config"]["grid_points"], 4097);
}

TEST(CliConfig, Validation) {
  bb::cli::RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.grid_points = 18;
  EXPECT_THROW(c.validate(), std::exception);
  c.grid_points = 15;
  EXPECT_THROW(c.validate(), std::exception);
  c.grid_points = 17;
  c.slack = 0.5;
  EXPECT_THROW(c.validate(), std::exception);
  c.slack = 0.0;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.check_config().grid.grid_points, 17);
}
