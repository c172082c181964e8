#include "report_json.hpp"

#include <cmath>

#include "bb/simd/dispatch.hpp"

namespace bb::cli {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const FunctionSpec& f) {
  return {{"name", f.name()}, {"expression", f.expression()}, {"max_order", f.max_order()},
          {"affine", f.is_affine()}};
}

Json to_json(const RunConfig& cfg) {
  const auto c = cfg.check_config();
  return {{"grid_points", c.grid.grid_points},
          {"refine_rounds", c.grid.refine_rounds},
          {"modulus_h_points", c.grid.modulus_h_points},
          {"modulus_x_points", c.grid.modulus_x_points},
          {"modulus_refine_rounds", c.grid.modulus_refine_rounds},
          {"classical_h_points", c.grid.classical_h_points},
          {"classical_x_points", c.grid.classical_x_points},
          {"slack", c.slack},
          {"abs_floor", c.abs_floor},
          {"n_max", c.n_max},
          {"simd", std::string(simd::isa_name(simd::active_isa()))}};
}

Json to_json(const Estimate& e) {
  return {{"quantity", e.quantity}, {"kind", e.kind},     {"value", number(e.value)}, {"x", e.x},
          {"h", e.h},               {"grid_x", e.grid_x}, {"grid_h", e.grid_h},       {"rounds", e.rounds}};
}

std::string status_of(const BoundReport& r) {
  if (!r.prerequisite_met) return "report-only";
  return r.holds ? "hold" : "fail";
}

Json to_json(const BoundReport& r) {
  Json prov = Json::array();
  for (const auto& e : r.provenance) prov.push_back(to_json(e));
  return {{"claim_id", r.claim_id},
          {"n", r.n},
          {"kind", r.kind == ClaimKind::upper ? "upper" : "lower"},
          {"left", number(r.left)},
          {"right", number(r.right)},
          {"constant", number(r.constant)},
          {"holds", r.holds},
          {"status", status_of(r)},
          {"slack", r.slack},
          {"abs_floor", r.abs_floor},
          {"prerequisite_met", r.prerequisite_met},
          {"note", r.note},
          {"provenance", std::move(prov)}};
}

Json to_json(const ThresholdResult& t) {
  Json inputs = Json::object();
  for (const auto& [name, v] : t.inputs) inputs[name] = number(v);
  return {{"formula_id", t.formula_id}, {"n_value", t.n_value}, {"inputs", std::move(inputs)}, {"note", t.note}};
}

Json hypothesis_entry(const std::string& claim_id, std::int64_t n, const std::string& why) {
  return {{"claim_id", claim_id}, {"n", n}, {"status", "hypothesis-violation"}, {"holds", nullptr}, {"note", why}};
}

}  // namespace bb::cli
