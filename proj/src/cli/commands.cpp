#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bb/bernstein.hpp"
#include "bb/cli.hpp"
#include "bb/error.hpp"
#include "report_json.hpp"

namespace bb::cli {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

const std::vector<std::string> kClaims = {"eq1.5-upper", "eq1.5-lower", "eq2.4", "eq2.8", "eq2.9", "eq2.7", "cor1"};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}
std::string human(double v) { return fmt("%.6g", v); }
std::string full(double v) { return std::isfinite(v) ? fmt("%.17g", v) : ""; }
std::string cell(const std::optional<double>& v) { return v ? full(*v) : ""; }

struct FunctionArgs {
  std::string expr;
  std::string builtin;
};

struct Shared {
  RunConfig cfg;
  std::string format = "json";
  FunctionArgs fn;
};

void add_function_options(CLI::App* sub, FunctionArgs& fn) {
  sub->add_option("--expr", fn.expr, "Function of x, e.g. \"exp(x)\"");
  sub->add_option("--builtin", fn.builtin, "Named corpus function (x, affine, x2, x3, exp, sin, cos, atan, runge)");
}

void add_run_options(CLI::App* sub, Shared& s) {
  sub->add_option("--grid", s.cfg.grid_points, "Points of the 1-D sup scans (odd, >= 17)");
  sub->add_option("--refine", s.cfg.refine_rounds, "Golden-section refinement rounds");
  sub->add_option("--slack", s.cfg.slack, "Relative slack applied in the claim's favour");
  sub->add_option("--n-max", s.cfg.n_max, "Horizon of threshold searches");
  sub->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "csv", "human"}));
}

void finish_config(Shared& s) {
  s.cfg.format = s.format == "csv" ? Format::csv : s.format == "human" ? Format::human : Format::json;
  try {
    s.cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

FunctionSpec resolve(const FunctionArgs& a) {
  if (a.expr.empty() == a.builtin.empty()) throw UsageError("exactly one of --expr or --builtin is required");
  if (!a.builtin.empty()) {
    if (auto f = find_builtin(a.builtin)) return *f;
    throw UsageError("unknown builtin '" + a.builtin + "'");
  }
  return FunctionSpec::from_text(a.expr, a.expr);
}

void require_n(std::int64_t n, std::int64_t min) {
  if (n < min || n > 2'000'000'000) throw UsageError("n must be in [" + std::to_string(min) + ", 2e9], got " + std::to_string(n));
}

Json envelope(Json function, const RunConfig& cfg) {
  return {{"function", std::move(function)}, {"config", to_json(cfg)}, {"reports", Json::array()},
          {"thresholds", Json::array()}};
}

// ---- eval ----

int cmd_eval(const Shared& s, std::int64_t n, const std::vector<double>& xs, std::ostream& out) {
  const auto f = resolve(s.fn);
  require_n(n, 1);
  if (xs.empty()) throw UsageError("at least one --x point is required");
  for (double x : xs) {
    if (!(x >= 0.0 && x <= 1.0)) throw UsageError("points must lie in [0,1], got " + full(x));
  }
  const BernsteinOperator op(f, static_cast<int>(n));
  struct Row {
    double x, fx, bx;
  };
  std::vector<Row> rows;
  for (double x : xs) rows.push_back({x, f.value(x), op(x)});

  switch (s.cfg.format) {
    case Format::json: {
      Json j = {{"function", to_json(f)}, {"n", n}, {"rows", Json::array()}};
      for (const auto& r : rows) {
        j["rows"].push_back({{"x", r.x}, {"f", number(r.fx)}, {"bn", number(r.bx)}, {"diff", number(r.bx - r.fx)}});
      }
      out << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      out << "x,f,bn,diff\n";
      for (const auto& r : rows) out << full(r.x) << ',' << full(r.fx) << ',' << full(r.bx) << ',' << full(r.bx - r.fx) << '\n';
      break;
    case Format::human:
      out << "f = " << f.expression() << ", n = " << n << '\n';
      out << "x             f(x)          B_n f(x)      B_n f - f\n";
      for (const auto& r : rows) {
        out << fmt("%-14.6g", r.x) << fmt("%-14.6g", r.fx) << fmt("%-14.6g", r.bx) << human(r.bx - r.fx) << '\n';
      }
      break;
  }
  return kAllHold;
}

// ---- verify ----

int cmd_verify(const Shared& s, std::vector<std::string> claims, const std::vector<std::int64_t>& ns, double mu0,
               double lambda0, std::ostream& out, std::ostream& err) {
  const auto f = resolve(s.fn);
  if (claims.empty()) claims = kClaims;
  if (ns.empty()) throw UsageError("at least one --n is required");
  for (auto n : ns) require_n(n, 1);
  if (!(mu0 > 0.0 && mu0 < 1.0) || !(lambda0 > 0.0 && lambda0 < 1.0)) throw UsageError("mu0 and lambda0 must be in (0,1)");

  Analysis a(f, s.cfg.check_config());
  Json doc = envelope(to_json(f), s.cfg);
  bool failed = false;
  bool violated = false;
  std::vector<std::string> lines;
  for (auto n : ns) {
    for (const auto& claim : claims) {
      try {
        BoundReport r;
        if (claim == "eq1.5-upper") r = sandwich_check(a, n, mu0).upper;
        else if (claim == "eq1.5-lower") r = sandwich_check(a, n, mu0).lower;
        else if (claim == "eq2.4") r = eq24_check(a, n);
        else if (claim == "eq2.8") r = theorem3_check(a, n);
        else if (claim == "eq2.9") r = theorem4_check(a, n);
        else if (claim == "eq2.7") r = theoremE_check(a, n);
        else r = corollary1_check(a, n);
        if (r.prerequisite_met && !r.holds) failed = true;
        doc["reports"].push_back(to_json(r));
        lines.push_back(claim + std::string(13 - std::min<std::size_t>(12, claim.size()), ' ') +
                        fmt("%-9.0f", static_cast<double>(n)) + fmt("%-14.6g", r.left) + fmt("%-14.6g", r.right) +
                        status_of(r));
      } catch (const HypothesisError& e) {
        violated = true;
        doc["reports"].push_back(hypothesis_entry(claim, n, e.what()));
        lines.push_back(claim + std::string(13 - std::min<std::size_t>(12, claim.size()), ' ') +
                        fmt("%-9.0f", static_cast<double>(n)) + "hypothesis-violation: " + e.what());
        err << claim << " n=" << n << ": " << e.what() << '\n';
      } catch (const DegenerateInputError& e) {
        violated = true;
        doc["reports"].push_back(hypothesis_entry(claim, n, e.what()));
        lines.push_back(claim + " n=" + std::to_string(n) + ": " + e.what());
        err << claim << " n=" << n << ": " << e.what() << '\n';
      }
    }
  }

  switch (s.cfg.format) {
    case Format::json:
      out << doc.dump(2) << '\n';
      break;
    case Format::csv:
      out << "claim_id,n,kind,left,right,constant,status\n";
      for (const auto& r : doc["reports"]) {
        out << r["claim_id"].get<std::string>() << ',' << r["n"].get<std::int64_t>() << ',';
        if (r.contains("kind")) {
          out << r["kind"].get<std::string>() << ',' << full(r["left"].is_null() ? NAN : r["left"].get<double>()) << ','
              << full(r["right"].is_null() ? NAN : r["right"].get<double>()) << ','
              << full(r["constant"].get<double>()) << ',';
        } else {
          out << ",,,,";
        }
        out << r["status"].get<std::string>() << '\n';
      }
      break;
    case Format::human:
      out << "f = " << f.expression() << '\n';
      out << "claim        n        left          right         status\n";
      for (const auto& l : lines) out << l << '\n';
      break;
  }
  if (failed) return kClaimFailed;
  return violated ? kHypothesisOnly : kAllHold;
}

// ---- sweep ----

struct SweepRow {
  std::int64_t n;
  double err_norm, dt_modulus;
  std::optional<double> ratio, an, residual, thm4, thmE;
};

int cmd_sweep(const Shared& s, std::int64_t from, std::int64_t to, std::int64_t step, bool geometric,
              std::ostream& out) {
  const auto f = resolve(s.fn);
  if (from < 2 || from > to) throw UsageError("sweep needs 2 <= n-from <= n-to");
  require_n(to, 2);
  if (step < 1) throw UsageError("n-step must be >= 1");
  std::vector<std::int64_t> ns;
  for (std::int64_t n = from; n <= to; n = geometric ? 2 * n : n + step) ns.push_back(n);
  if (geometric && ns.back() != to) ns.push_back(to);

  Analysis a(f, s.cfg.check_config());
  std::vector<SweepRow> rows;
  for (auto n : ns) {
    SweepRow r{n, a.error_norm(n).value, a.dt_modulus(n).value, {}, {}, {}, {}, {}};
    if (!a.affine() && r.dt_modulus > 0.0) r.ratio = r.err_norm / r.dt_modulus;
    if (f.max_order() >= 2) {
      r.residual = a.residual_norm(n).value;
      const auto& m = a.f2_moduli(n);
      const double nn = static_cast<double>(n);
      r.thm4 = 5.0 / (8.0 * nn) * m.first.value + 13.0 / (64.0 * nn) * m.second.value;
      if (!a.affine()) {
        try {
          r.an = an_value(a, n);
        } catch (const DegenerateInputError&) {
        }
      }
    }
    if (f.max_order() >= 3 && n >= 12) r.thmE = std::pow(static_cast<double>(n), -1.5) * a.weighted(3, 3).value;
    rows.push_back(r);
  }

  switch (s.cfg.format) {
    case Format::csv:
      out << "n,err_norm,dt_modulus,ratio,an_value,vor_residual_norm,thm4_bound,thmE_bound\n";
      for (const auto& r : rows) {
        out << r.n << ',' << full(r.err_norm) << ',' << full(r.dt_modulus) << ',' << cell(r.ratio) << ','
            << cell(r.an) << ',' << cell(r.residual) << ',' << cell(r.thm4) << ',' << cell(r.thmE) << '\n';
      }
      break;
    case Format::json: {
      Json doc = envelope(to_json(f), s.cfg);
      auto opt = [](const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); };
      Json table = Json::array();
      for (const auto& r : rows) {
        table.push_back({{"n", r.n},
                         {"err_norm", number(r.err_norm)},
                         {"dt_modulus", number(r.dt_modulus)},
                         {"ratio", opt(r.ratio)},
                         {"an_value", opt(r.an)},
                         {"vor_residual_norm", opt(r.residual)},
                         {"thm4_bound", opt(r.thm4)},
                         {"thmE_bound", opt(r.thmE)}});
      }
      doc["rows"] = std::move(table);
      out << doc.dump(2) << '\n';
      break;
    }
    case Format::human: {
      auto h = [](const std::optional<double>& v) { return v ? human(*v) : std::string("-"); };
      out << "f = " << f.expression() << '\n';
      char line[256];
      std::snprintf(line, sizeof line, "%-8s %-12s %-12s %-12s %-12s %-12s %-12s %-12s\n", "n", "err_norm", "dt_modulus",
                    "ratio", "an_value", "residual", "thm4_bound", "thmE_bound");
      out << line;
      for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-8" PRId64 " %-12s %-12s %-12s %-12s %-12s %-12s %-12s\n", r.n,
                      human(r.err_norm).c_str(), human(r.dt_modulus).c_str(), h(r.ratio).c_str(), h(r.an).c_str(),
                      h(r.residual).c_str(), h(r.thm4).c_str(), h(r.thmE).c_str());
        out << line;
      }
      break;
    }
  }
  return kAllHold;
}

// ---- thresholds ----

void print_thresholds_human(const std::vector<ThresholdResult>& ts, std::ostream& out) {
  for (const auto& t : ts) {
    out << t.formula_id << ": n = " << t.n_value << '\n';
    for (const auto& [name, v] : t.inputs) out << "    " << name << " = " << human(v) << '\n';
    if (!t.note.empty()) out << "    (" << t.note << ")\n";
  }
}

int cmd_thresholds(const Shared& s, double mu0, double lambda0, std::ostream& out, std::ostream& err) {
  const auto f = resolve(s.fn);
  if (!(mu0 > 0.0 && mu0 < 1.0) || !(lambda0 > 0.0 && lambda0 < 1.0)) throw UsageError("mu0 and lambda0 must be in (0,1)");
  Analysis a(f, s.cfg.check_config());
  std::vector<ThresholdResult> ts;
  bool skipped = false;
  auto attempt = [&](const char* id, auto&& compute) {
    try {
      ts.push_back(compute());
    } catch (const HypothesisError& e) {
      skipped = true;
      err << id << ": " << e.what() << '\n';
    } catch (const DegenerateInputError& e) {
      skipped = true;
      err << id << ": " << e.what() << '\n';
    } catch (const NotFoundError& e) {
      skipped = true;
      err << id << ": " << e.what() << '\n';
    }
  };
  attempt("cor1", [&] {
    auto t = corollary1_threshold(corollary1_inputs(a));
    if (t.note.empty()) t.note = "M = sup|f'''| and m = inf|f''| estimated on the grid";
    return t;
  });
  if (f.max_order() >= 4) attempt("n2.c4", [&] { return remark3_n2(a, lambda0, mu0, N2Variant::c4); });
  if (f.max_order() >= 3) attempt("n2.w3phi", [&] { return remark3_n2(a, lambda0, mu0, N2Variant::w3phi); });
  attempt("n0", [&] { return find_n0(a, lambda0, s.cfg.n_max); });
  attempt("n1", [&] { return find_n1(a, mu0, lambda0, s.cfg.n_max); });

  if (s.cfg.format == Format::human) {
    out << "f = " << f.expression() << '\n';
    print_thresholds_human(ts, out);
  } else {
    Json doc = envelope(to_json(f), s.cfg);
    for (const auto& t : ts) doc["thresholds"].push_back(to_json(t));
    out << doc.dump(2) << '\n';
  }
  return skipped ? kHypothesisOnly : kAllHold;
}

// ---- examples ----

int cmd_examples(const Shared& s, std::ostream& out) {
  const auto c = example_constants();
  const auto thresholds = example_thresholds();
  const auto cfg = s.cfg.check_config();
  std::vector<BoundReport> reports;

  Analysis exp_a(*find_builtin("exp"), cfg);
  for (std::int64_t n : {7567, 10000}) reports.push_back(corollary1_check(exp_a, n, std::numbers::e, 1.0));
  Analysis cos_a(*find_builtin("cos"), cfg);
  reports.push_back(corollary1_check(cos_a, 3508, 1.0, c.cos1));
  Analysis sin_a(*find_builtin("sin"), cfg);
  for (std::int64_t n : {2, 10, 100, 500}) {
    // omega^2_phi(sin, 1/sqrt(n)) >= lambda0 / n, the modulus lower bound for sin.
    const auto& w = sin_a.dt_modulus(n);
    BoundReport r;
    r.claim_id = "sin-modulus-lower";
    r.n = n;
    r.kind = ClaimKind::lower;
    r.left = w.value;
    r.right = c.lambda0_sin / static_cast<double>(n);
    r.constant = c.lambda0_sin;
    r.slack = cfg.slack;
    r.abs_floor = cfg.abs_floor;
    r.holds = claim_holds(r.kind, r.left, r.right, r.slack, r.abs_floor);
    r.provenance = {Estimate::of("dt_modulus", w, cfg.grid.modulus_refine_rounds)};
    reports.push_back(r);
  }
  for (std::int64_t n : {100, 1000}) reports.push_back(sandwich_check(sin_a, n, c.mu0_sin).lower);

  const std::vector<std::string> notes = {
      "example2 (cos): the printed threshold [1024/cos(1)]+1 = 1896 differs from the corollary formula "
      "[1024 M^2/m^2]+1 = 3508 with M = 1, m = cos(1); both are reported, labelled paper-printed and "
      "corollary-formula.",
      "example3 (sin): the printed constant 212 and the value 32*4*(5/8+13/64) = 106 implied by the preceding "
      "inequality differ by a factor 2; n2 is reported for both.",
      "example3 (sin): n2 is far beyond feasible Bernstein degrees; the sandwich is spot-checked at n = 100, 1000."};

  bool failed = false;
  for (const auto& r : reports) failed = failed || !r.holds;

  if (s.cfg.format == Format::human) {
    out << "constants\n";
    out << "    max x*phi^2(x) = 4/27    " << human(c.xphi2_max) << " (grid " << human(c.xphi2_max_numeric) << ")\n";
    out << "    sin(1/2)/4               " << human(c.quarter_sin_half) << '\n';
    out << "    lambda0 = 32/(27 pi^3)   " << human(c.lambda0_sin) << '\n';
    out << "    1024 e^2                 " << human(c.e_threshold) << '\n';
    out << "    cos(1)                   " << human(c.cos1) << '\n';
    out << "thresholds\n";
    print_thresholds_human(thresholds, out);
    out << "checks\n";
    for (const auto& r : reports) {
      out << "    " << r.claim_id << " n=" << r.n << "  " << human(r.left) << (r.kind == ClaimKind::upper ? " <= " : " >= ")
          << human(r.right) << "  " << status_of(r) << '\n';
    }
    out << "notes\n";
    for (const auto& n : notes) out << "    " << n << '\n';
  } else {
    Json fns = Json::array();
    for (const auto* a : {&exp_a, &cos_a, &sin_a}) fns.push_back(to_json(a->function()));
    Json doc = envelope(std::move(fns), s.cfg);
    for (const auto& r : reports) doc["reports"].push_back(to_json(r));
    for (const auto& t : thresholds) doc["thresholds"].push_back(to_json(t));
    doc["constants"] = {{"max_x_phi2", c.xphi2_max},
                        {"max_x_phi2_grid", c.xphi2_max_numeric},
                        {"quarter_sin_half", c.quarter_sin_half},
                        {"lambda0_sin", c.lambda0_sin},
                        {"mu0_sin", c.mu0_sin},
                        {"1024e2", c.e_threshold},
                        {"cos1", c.cos1}};
    doc["notes"] = notes;
    out << doc.dump(2) << '\n';
  }
  return failed ? kClaimFailed : kAllHold;
}

}  // namespace

void RunConfig::validate() const {
  if (grid_points < 17 || grid_points % 2 == 0) throw Error("grid points must be odd and >= 17");
  if (refine_rounds < 0) throw Error("refine rounds must be >= 0");
  if (!(slack >= 0.0 && slack < 0.5)) throw Error("slack must be in [0, 0.5)");
  if (n_max < 2) throw Error("n-max must be >= 2");
}

CheckConfig RunConfig::check_config() const {
  CheckConfig c;
  c.grid.grid_points = grid_points;
  c.grid.refine_rounds = refine_rounds;
  c.slack = slack;
  c.n_max = n_max;
  return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Shared s;
  if (const char* env = std::getenv("BB_GRID_POINTS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 17 || v > 100'000'000 || v % 2 == 0) {
      err << "BB_GRID_POINTS must be an odd integer >= 17, got '" << env << "'\n";
      return kUsage;
    }
    s.cfg.grid_points = static_cast<int>(v);
  }

  CLI::App app{"Bernstein operator error bounds and moduli of smoothness"};
  app.require_subcommand(1);

  std::int64_t eval_n = 0;
  std::vector<double> eval_x;
  auto* eval = app.add_subcommand("eval", "Evaluate f and B_n f at points");
  add_function_options(eval, s.fn);
  add_run_options(eval, s);
  eval->add_option("--n", eval_n, "Bernstein degree")->required();
  eval->add_option("--x", eval_x, "Points in [0,1]")->delimiter(',')->required();

  std::vector<std::string> claims;
  std::vector<std::int64_t> verify_n;
  double mu0 = 0.5;
  double lambda0 = 0.5;
  auto* verify = app.add_subcommand("verify", "Check inequalities at given n");
  add_function_options(verify, s.fn);
  add_run_options(verify, s);
  verify->add_option("--claims", claims, "Claim ids (default: all)")->delimiter(',')->check(CLI::IsMember(kClaims));
  verify->add_option("--n", verify_n, "Degrees")->delimiter(',')->required();
  verify->add_option("--mu0", mu0, "mu0 in (0,1)");
  verify->add_option("--lambda0", lambda0, "lambda0 in (0,1)");

  std::int64_t n_from = 0;
  std::int64_t n_to = 0;
  std::int64_t n_step = 1;
  bool geometric = false;
  auto* sweep = app.add_subcommand("sweep", "Tabulate norms, moduli and bounds over a range of n");
  add_function_options(sweep, s.fn);
  add_run_options(sweep, s);
  sweep->add_option("--n-from", n_from, "First degree")->required();
  sweep->add_option("--n-to", n_to, "Last degree (inclusive)")->required();
  sweep->add_option("--n-step", n_step, "Linear step");
  sweep->add_flag("--geometric", geometric, "Double n at each step");

  auto* thresholds = app.add_subcommand("thresholds", "Threshold indices n0, n1, n2 and the corollary threshold");
  add_function_options(thresholds, s.fn);
  add_run_options(thresholds, s);
  thresholds->add_option("--mu0", mu0, "mu0 in (0,1)");
  thresholds->add_option("--lambda0", lambda0, "lambda0 in (0,1)");

  auto* examples = app.add_subcommand("examples", "Reproduce the worked examples");
  add_run_options(examples, s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kAllHold;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (sweep->parsed() && s.format == "json" && sweep->count("--format") == 0) s.format = "csv";
    finish_config(s);
    if (eval->parsed()) return cmd_eval(s, eval_n, eval_x, out);
    if (verify->parsed()) return cmd_verify(s, claims, verify_n, mu0, lambda0, out, err);
    if (sweep->parsed()) return cmd_sweep(s, n_from, n_to, n_step, geometric, out);
    if (thresholds->parsed()) return cmd_thresholds(s, mu0, lambda0, out, err);
    return cmd_examples(s, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const HypothesisError& e) {
    err << e.what() << '\n';
    return kHypothesisOnly;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"bb"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace bb::cli
