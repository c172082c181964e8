#pragma once

#include <string>

#include "bb/cli.hpp"
#include "json.hpp"

namespace bb::cli {

using Json = nlohmann::ordered_json;

Json to_json(const FunctionSpec& f);
Json to_json(const RunConfig& cfg);
Json to_json(const Estimate& e);
Json to_json(const BoundReport& r);
Json to_json(const ThresholdResult& t);

/// Entry for a claim whose hypotheses fail at this n.
Json hypothesis_entry(const std::string& claim_id, std::int64_t n, const std::string& why);

/// "hold", "fail" or "report-only".
std::string status_of(const BoundReport& r);

/// Non-finite values become null.
Json number(double v);

}  // namespace bb::cli
