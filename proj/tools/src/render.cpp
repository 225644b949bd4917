#include "render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace flawsim::cli {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json flaw_set(const FlawSet& s, const std::vector<std::string>& names) {
  json arr = json::array();
  s.for_each([&](FlawId f) { arr.push_back(names.at(f)); });
  return arr;
}

std::string fmt(double v, int precision) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

json analysis_json(const Analysis& a, const std::vector<std::string>& names) {
  json profiles = json::array();
  for (const auto& p : a.profiles) {
    profiles.push_back({
        {"flaw", names.at(p.flaw)},
        {"addressed", p.addressed},
        {"potential", number(p.potential)},
        {"b_pr", p.b_pr},
        {"b_ns", p.b_ns},
        {"congestion_pr", p.congestion_pr},
        {"congestion_ns", p.congestion_ns},
        {"unreached_pr", p.unreached_pr},
        {"unreached_ns", p.unreached_ns},
        {"gamma_pr", flaw_set(p.gamma_pr, names)},
        {"gamma_ns", flaw_set(p.gamma_ns, names)},
        {"delta", p.delta},
        {"q", p.q},
        {"amenability", number(p.amenability)},
    });
  }
  auto edges = [&](const CausalityGraph& g) {
    json arr = json::array();
    for (FlawId i = 0; i < g.flaw_count(); ++i) {
      g.out[i].for_each([&](FlawId j) { arr.push_back({names.at(i), names.at(j)}); });
    }
    return arr;
  };
  return {
      {"states", a.state_count},
      {"flaws", a.flaw_count},
      {"p", a.p},
      {"b_ns", a.b_ns},
      {"b_pr_max", a.b_pr_max},
      {"delta_max", a.delta_max},
      {"arc_bound", a.arc_bound > 0 ? json(a.arc_bound) : json(nullptr)},
      {"causality_pr", edges(a.pr)},
      {"causality_ns", edges(a.ns)},
      {"profiles", std::move(profiles)},
  };
}

std::string analysis_text(const Analysis& a, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "states " << a.state_count << "  flaws " << a.flaw_count << "  p " << fmt(a.p) << "  B "
     << (a.arc_bound > 0 ? std::to_string(a.arc_bound) : std::string("undefined")) << "  b_ns " << fmt(a.b_ns)
     << "  delta " << a.delta_max << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %10s %8s %8s %6s %10s %12s  %s\n", "flaw", "potential", "b_pr", "b_ns",
                "delta", "q", "amenability", "gamma_pr");
  os << line;
  for (const auto& p : a.profiles) {
    std::snprintf(line, sizeof line, "%-12s %10s %8s %8s %6zu %10s %12s  ", names.at(p.flaw).c_str(),
                  fmt(p.potential).c_str(), fmt(p.b_pr).c_str(), fmt(p.b_ns).c_str(), p.delta, fmt(p.q).c_str(),
                  fmt(p.amenability).c_str());
    os << line << p.gamma_pr.to_string(&names);
    if (p.unreached_pr) os << "  (unreached)";
    os << '\n';
  }
  return os.str();
}

json bounds_json(const Bounds& b) {
  json steps = json::array();
  for (const auto& s : b.per_s) {
    steps.push_back({{"s", s.s}, {"E", s.distance}, {"steps", s.steps}, {"R", s.ratio}});
  }
  return {
      {"lambda", b.lambda}, {"B", b.arc_bound}, {"Xi", b.xi},       {"Delta", b.delta},
      {"M0", b.m0},         {"x0", b.x0},       {"per_s", std::move(steps)},
  };
}

json certificate_json(const Analysis& a, const Certificate& c, const std::vector<std::string>& names) {
  json sums = json::array();
  for (const auto& s : c.theorem1.sums) {
    sums.push_back({{"flaw", names.at(s.flaw)}, {"sum", s.sum}, {"ok", s.ok}});
  }
  json doc = {
      {"certified", c.theorem1.certified},
      {"p", a.p},
      {"threshold", c.theorem1.threshold},
      {"slack", number(c.theorem1.slack)},
      {"sums", std::move(sums)},
      {"lambda_pad", c.lambda_pad},
      {"lambda_star", nullptr},
      {"lambda_slack", nullptr},
      {"bounds", nullptr},
      {"bounds_at_request", nullptr},
  };
  if (c.lambda_star) {
    doc["lambda_star"] = c.lambda_star->lambda;
    doc["lambda_slack"] = number(c.lambda_star->slack);
  }
  if (c.bounds) doc["bounds"] = bounds_json(*c.bounds);
  if (c.bounds_at_request) doc["bounds_at_request"] = bounds_json(*c.bounds_at_request);
  return doc;
}

std::string certificate_text(const Analysis& a, const Certificate& c, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << (c.theorem1.certified ? "CERTIFIED" : "NOT CERTIFIED") << "  threshold " << fmt(c.theorem1.threshold)
     << "  slack " << fmt(c.theorem1.slack) << "  p " << fmt(a.p) << '\n';
  for (const auto& s : c.theorem1.sums) {
    os << "  " << names.at(s.flaw) << "  sum " << fmt(s.sum) << (s.ok ? "  ok" : "  FAIL") << '\n';
  }
  if (c.lambda_star) os << "lambda* " << fmt(c.lambda_star->lambda, 9) << '\n';
  if (c.bounds) {
    const auto& b = *c.bounds;
    os << "lambda " << fmt(b.lambda, 9) << "  B " << b.arc_bound << "  Xi " << fmt(b.xi) << "  Delta " << b.delta
       << "  M0 " << fmt(b.m0) << "  x0 " << fmt(b.x0) << '\n';
    for (const auto& s : b.per_s) {
      os << "  s " << fmt(s.s) << "  E " << fmt(s.distance) << "  steps " << fmt(s.steps) << "  R " << fmt(s.ratio)
         << '\n';
    }
  }
  return os.str();
}

json tail_json(const TailReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({
        {"s", row.s},
        {"horizon", row.horizon},
        {"empirical", row.empirical},
        {"bound", row.bound},
        {"inconclusive", row.inconclusive},
        {"pass", row.pass},
    });
  }
  return {{"guaranteed", r.guaranteed}, {"pass", r.pass()}, {"rows", std::move(rows)}};
}

json stratum_json(const StratumCheck& c) {
  json doc = {
      {"x", c.x},
      {"feasible", c.feasible},
      {"leaves", c.leaves},
      {"mass", c.mass},
      {"bad_mass", c.bad},
      {"H_P", c.h_p},
      {"mass_ok", c.mass_ok},
      {"sandwich_ok", c.sandwich_ok},
      {"lower_ok", c.lower_ok},
      {"upper_ok", nullptr},
      {"x0_ok", nullptr},
      {"ok", c.feasible && c.ok()},
  };
  if (!c.note.empty()) doc["note"] = c.note;
  if (c.upper_ok) doc["upper_ok"] = *c.upper_ok;
  if (c.x0_ok) doc["x0_ok"] = *c.x0_ok;
  return doc;
}

json audit_json(const AuditGrid& grid, const AuditReport& r) {
  return {
      {"grid",
       {{"delta", {grid.delta_min, grid.delta_max}},
        {"b_ns", {grid.b_ns_min, grid.b_ns_max}},
        {"p_pct", {grid.p_min_pct, grid.p_max_pct}}}},
      {"points", r.points},
      {"entropy_chain_failures", r.entropy_chain_failures},
      {"q_bound_failures", r.q_bound_failures},
      {"witnesses", r.witnesses},
      {"ok", r.ok()},
  };
}

}  // namespace flawsim::cli
