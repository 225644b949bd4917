#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flawsim/flawsim.hpp"

namespace flawsim::cli {

using nlohmann::json;

/// Finite numbers as-is, infinities and NaN as null.
json number(double v);
json flaw_set(const FlawSet& s, const std::vector<std::string>& names);

json analysis_json(const Analysis& a, const std::vector<std::string>& names);
std::string analysis_text(const Analysis& a, const std::vector<std::string>& names);

json bounds_json(const Bounds& b);
json certificate_json(const Analysis& a, const Certificate& c, const std::vector<std::string>& names);
std::string certificate_text(const Analysis& a, const Certificate& c, const std::vector<std::string>& names);

json tail_json(const TailReport& r);

json stratum_json(const StratumCheck& c);

json audit_json(const AuditGrid& grid, const AuditReport& r);

/// printf-style "%.*g" without locale surprises.
std::string fmt(double v, int precision = 6);

}  // namespace flawsim::cli
