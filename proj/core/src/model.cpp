#include "flawsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>

#include "flawsim/error.hpp"

namespace flawsim {
namespace {

std::string state_label(StateId s) { return "state " + std::to_string(s); }

// Sorts and checks one row; problems are appended with `where` as context.
std::optional<Distribution> check_row(std::vector<Arc> arcs, std::uint64_t n, double tol, const std::string& where,
                                      std::vector<std::string>& problems) {
  const std::size_t before = problems.size();
  for (const auto& a : arcs) {
    if (a.target >= n) problems.push_back("target out of range in " + where);
  }
  if (problems.size() != before) return std::nullopt;
  try {
    return Distribution::from_arcs(std::move(arcs), tol);
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) problems.push_back(v + " (" + where + ")");
  }
  return std::nullopt;
}

}  // namespace

Instance validate_instance(const RawInstance& raw, double tolerance) {
  std::vector<std::string> problems;
  Instance inst;
  const std::uint64_t n = raw.state_count;
  if (n == 0) throw ValidationError({"state space must be nonempty"});
  if (!raw.widths.empty()) {
    std::uint64_t prod = 1;
    bool overflow = false;
    for (auto w : raw.widths) {
      if (w == 0 || prod > std::numeric_limits<std::uint64_t>::max() / w) {
        overflow = true;
        break;
      }
      prod *= w;
    }
    if (overflow || prod != n) problems.push_back("variable widths do not multiply to the state count");
  }

  const std::size_t m = raw.flaws.size();
  std::unordered_map<std::string, FlawId> by_name;
  inst.names_.reserve(m);
  inst.members_.resize(m);
  for (FlawId f = 0; f < m; ++f) {
    const auto& rf = raw.flaws[f];
    const std::string name = rf.name.empty() ? "f" + std::to_string(f + 1) : rf.name;
    if (!by_name.emplace(name, f).second) problems.push_back("duplicate flaw name " + name);
    inst.names_.push_back(name);
    auto mem = rf.members;
    std::sort(mem.begin(), mem.end());
    mem.erase(std::unique(mem.begin(), mem.end()), mem.end());
    if (!mem.empty() && mem.back() >= n) problems.push_back("flaw " + name + " has a member outside the state set");
    if (mem.empty()) inst.warnings_.push_back("flaw " + name + " is empty");
    inst.members_[f] = std::move(mem);
  }

  if (raw.priority.empty()) {
    inst.priority_ = Priority::identity(m);
  } else {
    std::vector<FlawId> order;
    bool ok = raw.priority.size() == m;
    for (const auto& name : raw.priority) {
      auto it = by_name.find(name);
      if (it == by_name.end()) {
        ok = false;
        break;
      }
      order.push_back(it->second);
    }
    if (ok) {
      try {
        inst.priority_ = Priority(std::move(order));
      } catch (const ValidationError&) {
        ok = false;
      }
    }
    if (!ok) problems.push_back("priority is not a permutation");
  }

  const bool bad_p = !(raw.p >= 0.0 && raw.p <= 1.0);
  inst.p_ = raw.p;

  if (!problems.empty()) {
    if (bad_p) problems.push_back("p must lie in [0, 1]");
    throw ValidationError(std::move(problems));
  }

  inst.present_.assign(n, FlawSet(m));
  for (FlawId f = 0; f < m; ++f) {
    for (StateId s : inst.members_[f]) inst.present_[s].insert(f);
  }
  inst.addressed_.resize(n);
  for (StateId s = 0; s < n; ++s) inst.addressed_[s] = inst.priority_.highest(inst.present_[s]);

  for (const auto& [src, _] : raw.principal) {
    if (src >= n) problems.push_back("principal row for " + state_label(src) + " is outside the state set");
  }
  for (const auto& [src, _] : raw.noise) {
    if (src >= n) problems.push_back("noise row for " + state_label(src) + " is outside the state set");
  }

  inst.principal_.resize(n);
  inst.noise_.resize(n);
  for (StateId s = 0; s < n; ++s) {
    const bool flawless = !inst.addressed_[s].has_value();
    auto it = raw.principal.find(s);
    if (it == raw.principal.end()) {
      if (flawless) {
        inst.principal_[s] = Distribution::point_mass(s);
      } else {
        problems.push_back("missing principal row for flawed " + state_label(s));
      }
    } else if (flawless) {
      const auto& row = it->second;
      if (row.size() != 1 || row[0].target != s || std::abs(row[0].prob - 1.0) > tolerance) {
        problems.push_back("flawless state must self-loop with probability 1 (" + state_label(s) + ")");
      } else {
        inst.principal_[s] = Distribution::point_mass(s);
      }
    } else if (auto d = check_row(it->second, n, tolerance, "principal row of " + state_label(s), problems)) {
      inst.principal_[s] = std::move(*d);
    }

    auto jt = raw.noise.find(s);
    if (jt == raw.noise.end()) {
      inst.noise_[s] = Distribution::point_mass(s);
    } else if (auto d = check_row(jt->second, n, tolerance, "noise row of " + state_label(s), problems)) {
      inst.noise_[s] = std::move(*d);
    }
  }

  if (const auto* s0 = std::get_if<StateId>(&raw.initial)) {
    if (*s0 >= n) problems.push_back("initial state outside the state set");
    inst.initial_ = *s0;
  } else {
    const auto& d = std::get<Distribution>(raw.initial);
    std::vector<Arc> arcs(d.arcs().begin(), d.arcs().end());
    if (auto checked = check_row(std::move(arcs), n, tolerance, "initial distribution", problems)) {
      inst.initial_ = std::move(*checked);
    }
  }

  inst.widths_ = raw.widths;
  if (bad_p) problems.push_back("p must lie in [0, 1]");
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return inst;
}

RawInstance Instance::to_raw() const {
  RawInstance raw;
  raw.state_count = state_count();
  raw.widths = widths_;
  for (FlawId f = 0; f < names_.size(); ++f) raw.flaws.push_back({names_[f], members_[f]});
  for (FlawId f : priority_.order()) raw.priority.push_back(names_[f]);
  for (StateId s = 0; s < state_count(); ++s) {
    const auto pa = principal_[s].arcs();
    raw.principal[s] = {pa.begin(), pa.end()};
    const auto na = noise_[s].arcs();
    raw.noise[s] = {na.begin(), na.end()};
  }
  raw.p = p_;
  raw.initial = initial_;
  return raw;
}

ImplicitInstance::ImplicitInstance(ImplicitSpec spec) : spec_(std::move(spec)) {
  std::uint64_t prod = 1;
  for (auto w : spec_.widths) {
    if (w == 0 || prod > std::numeric_limits<std::uint64_t>::max() / w) {
      throw ValidationError({"variable widths overflow the state encoding"});
    }
    prod *= w;
  }
  state_count_ = prod;
  if (spec_.priority.size() != spec_.flaw_names.size()) throw ValidationError({"priority is not a permutation"});
  if (!(spec_.p >= 0.0 && spec_.p <= 1.0)) throw ValidationError({"p must lie in [0, 1]"});
  if (!spec_.present || !spec_.principal || !spec_.noise) throw ValidationError({"implicit instance lacks callbacks"});
}

FlawSet ImplicitInstance::present_flaws(StateId s) const { return spec_.present(s); }

bool ImplicitInstance::is_flawed(StateId s) const { return !spec_.present(s).empty(); }

std::optional<FlawId> ImplicitInstance::addressed_flaw(StateId s) const {
  return spec_.priority.highest(spec_.present(s));
}

std::span<const Arc> ImplicitInstance::principal_row(StateId s, std::vector<Arc>& scratch) const {
  scratch.clear();
  if (is_flawed(s)) {
    spec_.principal(s, scratch);
  } else {
    scratch.push_back({s, 1.0});
  }
  return scratch;
}

std::span<const Arc> ImplicitInstance::noise_row(StateId s, std::vector<Arc>& scratch) const {
  scratch.clear();
  spec_.noise(s, scratch);
  return scratch;
}

const Instance& require_explicit(const ChainModel& model) {
  if (const auto* inst = model.as_explicit()) return *inst;
  throw ModelError("analysis requires explicit instance");
}

FlawSet present_flaws(const ChainModel& model, StateId s) { return model.present_flaws(s); }

std::optional<FlawId> addressed_flaw(const ChainModel& model, StateId s) { return model.addressed_flaw(s); }

Distribution mixed_row(const ChainModel& model, StateId s) {
  std::vector<Arc> a;
  std::vector<Arc> b;
  const auto pr = model.principal_row(s, a);
  const auto ns = model.noise_row(s, b);
  return Distribution::from_sorted_unchecked(mix_rows(pr, ns, model.p()));
}

int arc_bound_b(const ChainModel& model) {
  const Instance& inst = require_explicit(model);
  double smallest = 0.5;
  for (StateId s = 0; s < inst.state_count(); ++s) {
    if (!inst.is_flawed(s)) continue;
    const Distribution row = mixed_row(inst, s);
    for (const auto& a : row.arcs()) {
      if (a.prob >= 1.0) {
        throw ModelError("B undefined: flawed " + state_label(s) + " has an arc with probability 1");
      }
      smallest = std::min({smallest, a.prob, 1.0 - a.prob});
    }
  }
  int b = 1;
  while (!(std::ldexp(1.0, -b) < smallest)) {
    if (++b > 1074) throw ModelError("B undefined: arc probability underflows");
  }
  return b;
}

}  // namespace flawsim
