#include "flawsim/instances.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "flawsim/error.hpp"
#include "flawsim/rng.hpp"

namespace flawsim {
namespace {

constexpr std::uint64_t kUniformNoiseLimit = 4096;

// Mixed-radix digit helpers; variable 0 is least significant.
struct Radix {
  std::vector<std::uint32_t> widths;
  std::vector<std::uint64_t> place;

  explicit Radix(std::vector<std::uint32_t> w) : widths(std::move(w)), place(widths.size()) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < widths.size(); ++i) {
      place[i] = p;
      p *= widths[i];
    }
  }
  std::uint32_t digit(StateId s, std::size_t v) const {
    return static_cast<std::uint32_t>((s / place[v]) % widths[v]);
  }
  StateId with(StateId s, std::size_t v, std::uint32_t value) const {
    return s - static_cast<StateId>(digit(s, v)) * place[v] + static_cast<StateId>(value) * place[v];
  }
};

// Uniform row over every joint value of `vars` (all other digits fixed).
void resample_row(const Radix& r, StateId s, const std::vector<std::size_t>& vars, std::vector<Arc>& out) {
  std::vector<StateId> targets{s};
  for (std::size_t v : vars) {
    std::vector<StateId> next;
    next.reserve(targets.size() * r.widths[v]);
    for (StateId t : targets) {
      for (std::uint32_t c = 0; c < r.widths[v]; ++c) next.push_back(r.with(t, v, c));
    }
    targets = std::move(next);
  }
  std::sort(targets.begin(), targets.end());
  const double w = 1.0 / static_cast<double>(targets.size());
  for (StateId t : targets) out.push_back({t, w});
}

std::optional<std::uint64_t> checked_power(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
    r *= base;
  }
  return r;
}

bool use_explicit(std::optional<std::uint64_t> states, std::uint64_t cap, Flavor flavor) {
  if (flavor == Flavor::implicit_only) return false;
  const bool fits = states && *states <= cap;
  if (flavor == Flavor::explicit_only && !fits) throw ModelError("state space exceeds the explicit cap");
  return fits;
}

// Shared by coloring and ksat: a variable-assignment model with one flaw per
// constraint, addressed constraints resampling their variables.
struct ResamplingModel {
  Radix radix;
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> vars;   // per flaw
  std::function<bool(StateId, FlawId)> violated;

  FlawSet present(StateId s) const {
    FlawSet u(names.size());
    for (FlawId f = 0; f < names.size(); ++f) {
      if (violated(s, f)) u.insert(f);
    }
    return u;
  }
};

GeneratedModel build_resampling(std::shared_ptr<const ResamplingModel> rm, std::uint64_t states, bool explicit_flavor,
                                const nlohmann::json& descriptor) {
  const std::size_t m = rm->names.size();
  if (explicit_flavor) {
    RawInstance raw;
    raw.state_count = states;
    raw.widths = rm->radix.widths;
    raw.flaws.resize(m);
    for (FlawId f = 0; f < m; ++f) raw.flaws[f].name = rm->names[f];
    const Priority prio = Priority::identity(m);
    for (StateId s = 0; s < states; ++s) {
      const FlawSet u = rm->present(s);
      u.for_each([&](FlawId f) { raw.flaws[f].members.push_back(s); });
      if (auto top = prio.highest(u)) {
        std::vector<Arc> row;
        resample_row(rm->radix, s, rm->vars[*top], row);
        raw.principal[s] = std::move(row);
      }
    }
    return validate_instance(raw);
  }
  ImplicitSpec spec;
  spec.widths = rm->radix.widths;
  spec.flaw_names = rm->names;
  spec.priority = Priority::identity(m);
  spec.present = [rm](StateId s) { return rm->present(s); };
  spec.principal = [rm, prio = spec.priority](StateId s, std::vector<Arc>& out) {
    if (auto top = prio.highest(rm->present(s))) resample_row(rm->radix, s, rm->vars[*top], out);
  };
  spec.noise = [](StateId s, std::vector<Arc>& out) { out.push_back({s, 1.0}); };
  spec.descriptor = descriptor.dump();
  return ImplicitInstance(std::move(spec));
}

// Candidate successors for the greedy adversary, sorted and unique.
std::vector<StateId> greedy_candidates(const ChainModel& model, StateId s, NoiseModel::Candidates which,
                                       const std::vector<std::uint32_t>& widths) {
  std::vector<StateId> c{s};
  if (which == NoiseModel::Candidates::principal_support) {
    std::vector<Arc> scratch;
    for (const auto& a : model.principal_row(s, scratch)) c.push_back(a.target);
  } else {
    if (widths.empty()) throw ModelError("single-variable noise needs variable widths");
    const Radix r(widths);
    for (std::size_t v = 0; v < widths.size(); ++v) {
      for (std::uint32_t val = 0; val < widths[v]; ++val) c.push_back(r.with(s, v, val));
    }
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

StateId greedy_target(const ChainModel& model, StateId s, NoiseModel::Candidates which,
                      const std::vector<std::uint32_t>& widths) {
  StateId best = s;
  std::size_t best_count = 0;
  bool first = true;
  for (StateId t : greedy_candidates(model, s, which, widths)) {
    const std::size_t k = model.present_flaws(t).count();
    if (first || k > best_count) {
      best = t;
      best_count = k;
      first = false;
    }
  }
  return best;
}

nlohmann::json noise_descriptor(const NoiseModel& nm) {
  nlohmann::json j{{"model", to_string(nm.kind)}};
  if (nm.kind == NoiseModel::Kind::point) j["target"] = nm.target;
  if (nm.kind == NoiseModel::Kind::greedy_adversarial) {
    j["candidates"] = nm.candidates == NoiseModel::Candidates::principal_support ? "principal_support"
                                                                                 : "single_variable";
  }
  return j;
}

}  // namespace

const char* to_string(NoiseModel::Kind k) {
  switch (k) {
    case NoiseModel::Kind::selfloop: return "selfloop";
    case NoiseModel::Kind::uniform: return "uniform";
    case NoiseModel::Kind::point: return "point";
    case NoiseModel::Kind::greedy_adversarial: return "greedy_adversarial";
    case NoiseModel::Kind::custom: return "custom";
  }
  return "unknown";
}

const ChainModel& as_model(const GeneratedModel& g) {
  return std::visit([](const auto& m) -> const ChainModel& { return m; }, g);
}

Instance gen_star(std::size_t k) {
  if (k < 2) throw ValidationError({"star needs k >= 2: a single target would carry probability 1"});
  RawInstance raw;
  raw.state_count = k + 1;
  raw.flaws.push_back({"f1", {0}});
  std::vector<Arc> row;
  for (StateId t = 1; t <= k; ++t) row.push_back({t, 1.0 / static_cast<double>(k)});
  raw.principal[0] = std::move(row);
  raw.initial = StateId{0};
  return validate_instance(raw);
}

GeneratedModel gen_coloring(std::uint32_t vertices, const std::vector<Edge>& edges, std::uint32_t q,
                            std::uint64_t cap, Flavor flavor, std::vector<std::string>* warnings) {
  if (vertices == 0 || q == 0) throw ValidationError({"coloring needs at least one vertex and one colour"});
  for (const auto& e : edges) {
    if (e.u >= vertices || e.v >= vertices) throw ValidationError({"edge endpoint outside the vertex set"});
    if (e.u == e.v) throw ValidationError({"self-loop edges cannot be properly coloured"});
  }
  if (q == 1 && !edges.empty() && warnings != nullptr) {
    warnings->push_back("q = 1 with at least one edge: no flawless state exists");
  }
  auto rm = std::make_shared<ResamplingModel>(ResamplingModel{Radix(std::vector<std::uint32_t>(vertices, q)), {}, {}, {}});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    rm->names.push_back("e" + std::to_string(i + 1));
    rm->vars.push_back({edges[i].u, edges[i].v});
  }
  rm->violated = [r = rm.get()](StateId s, FlawId f) {
    return r->radix.digit(s, r->vars[f][0]) == r->radix.digit(s, r->vars[f][1]);
  };
  nlohmann::json desc{{"kind", "coloring"}, {"vertices", vertices}, {"q", q}, {"edges", nlohmann::json::array()}};
  for (const auto& e : edges) desc["edges"].push_back({e.u, e.v});
  const auto states = checked_power(q, vertices);
  return build_resampling(rm, states.value_or(0), use_explicit(states, cap, flavor), desc);
}

GeneratedModel gen_ksat(std::uint32_t n, const std::vector<std::vector<int>>& clauses, std::uint64_t cap,
                        Flavor flavor) {
  if (n == 0 || n > 63) throw ValidationError({"ksat needs 1..63 variables"});
  auto rm = std::make_shared<ResamplingModel>(ResamplingModel{Radix(std::vector<std::uint32_t>(n, 2)), {}, {}, {}});
  std::vector<std::vector<int>> lits;
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    if (clauses[c].empty()) throw ValidationError({"empty clause is never satisfiable"});
    std::vector<std::size_t> vars;
    for (int l : clauses[c]) {
      const auto v = static_cast<std::uint32_t>(l < 0 ? -l : l);
      if (l == 0 || v > n) throw ValidationError({"literal outside 1..n"});
      vars.push_back(v - 1);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    rm->names.push_back("c" + std::to_string(c + 1));
    rm->vars.push_back(std::move(vars));
    lits.push_back(clauses[c]);
  }
  rm->violated = [lits](StateId s, FlawId f) {
    for (int l : lits[f]) {
      const auto v = static_cast<unsigned>((l < 0 ? -l : l) - 1);
      const bool value = ((s >> v) & 1U) != 0;
      if (value == (l > 0)) return false;
    }
    return true;
  };
  nlohmann::json desc{{"kind", "ksat"}, {"variables", n}, {"clauses", clauses}};
  const auto states = checked_power(2, n);
  return build_resampling(rm, states.value_or(0), use_explicit(states, cap, flavor), desc);
}

Instance attach_noise(const Instance& base, const NoiseModel& nm, double p) {
  RawInstance raw = base.to_raw();
  raw.p = p;
  raw.noise.clear();
  const std::uint64_t n = base.state_count();
  switch (nm.kind) {
    case NoiseModel::Kind::selfloop:
      break;
    case NoiseModel::Kind::uniform: {
      if (n > kUniformNoiseLimit) throw ModelError("uniform noise limited to 4096 states");
      std::vector<Arc> row;
      for (StateId t = 0; t < n; ++t) row.push_back({t, 1.0 / static_cast<double>(n)});
      for (StateId s = 0; s < n; ++s) raw.noise[s] = row;
      break;
    }
    case NoiseModel::Kind::point:
      if (nm.target >= n) throw ValidationError({"noise target outside the state set"});
      for (StateId s = 0; s < n; ++s) raw.noise[s] = {{nm.target, 1.0}};
      break;
    case NoiseModel::Kind::greedy_adversarial:
      for (StateId s = 0; s < n; ++s) raw.noise[s] = {{greedy_target(base, s, nm.candidates, base.widths()), 1.0}};
      break;
    case NoiseModel::Kind::custom:
      raw.noise = nm.rows;
      break;
  }
  return validate_instance(raw);
}

GeneratedModel attach_noise(const GeneratedModel& base, const NoiseModel& nm, double p) {
  if (const auto* inst = std::get_if<Instance>(&base)) return attach_noise(*inst, nm, p);
  const auto& imp = std::get<ImplicitInstance>(base);
  ImplicitSpec spec = imp.spec();
  spec.p = p;
  auto keep = std::make_shared<const ImplicitInstance>(imp);
  switch (nm.kind) {
    case NoiseModel::Kind::selfloop:
      spec.noise = [](StateId s, std::vector<Arc>& out) { out.push_back({s, 1.0}); };
      break;
    case NoiseModel::Kind::point:
      if (nm.target >= imp.state_count()) throw ValidationError({"noise target outside the state set"});
      spec.noise = [t = nm.target](StateId, std::vector<Arc>& out) { out.push_back({t, 1.0}); };
      break;
    case NoiseModel::Kind::greedy_adversarial:
      spec.noise = [keep, c = nm.candidates](StateId s, std::vector<Arc>& out) {
        out.push_back({greedy_target(*keep, s, c, keep->widths()), 1.0});
      };
      break;
    case NoiseModel::Kind::uniform:
    case NoiseModel::Kind::custom:
      throw ModelError(std::string(to_string(nm.kind)) + " noise needs an explicit instance");
  }
  auto desc = nlohmann::json::parse(imp.descriptor());
  desc["noise_model"] = noise_descriptor(nm);
  desc["p"] = p;
  spec.descriptor = desc.dump();
  return ImplicitInstance(std::move(spec));
}

Instance gen_random(const RandomSpec& spec, std::uint64_t seed) {
  if (spec.states == 0) throw ValidationError({"random instance needs at least one state"});
  if (spec.min_support == 0 || spec.min_support > spec.max_support) {
    throw ValidationError({"support bounds must satisfy 1 <= min <= max"});
  }
  RandomStream rng(seed);
  const std::uint64_t n = spec.states;
  RawInstance raw;
  raw.state_count = n;
  raw.p = spec.p;
  raw.flaws.resize(spec.flaws);
  std::vector<std::vector<bool>> member(n, std::vector<bool>(spec.flaws, false));
  for (StateId s = 0; s < n; ++s) {
    for (std::size_t f = 0; f < spec.flaws; ++f) member[s][f] = rng.uniform() < spec.density;
  }
  auto flawed = [&](StateId s) { return std::find(member[s].begin(), member[s].end(), true) != member[s].end(); };
  std::uint64_t flawless = 0;
  for (StateId s = 0; s < n; ++s) flawless += flawed(s) ? 0 : 1;
  while (flawless < std::min(spec.min_flawless, n)) {
    const StateId s = rng.below(n);
    if (flawed(s)) {
      std::fill(member[s].begin(), member[s].end(), false);
      ++flawless;
    }
  }
  for (std::size_t f = 0; f < spec.flaws; ++f) {
    raw.flaws[f].name = "f" + std::to_string(f + 1);
    for (StateId s = 0; s < n; ++s) {
      if (member[s][f]) raw.flaws[f].members.push_back(s);
    }
  }

  auto support_size = [&] {
    const std::size_t hi = std::min<std::size_t>(spec.max_support, n);
    const std::size_t lo = std::min(spec.min_support, hi);
    return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
  };
  auto distinct_targets = [&](std::size_t k) {
    std::set<StateId> picked;
    while (picked.size() < k) picked.insert(rng.below(n));
    return std::vector<StateId>(picked.begin(), picked.end());
  };
  auto weighted = [&](const std::vector<StateId>& targets) {
    std::vector<double> w(targets.size());
    double total = 0.0;
    for (auto& x : w) total += (x = 0.5 + rng.uniform());
    std::vector<Arc> row;
    for (std::size_t i = 0; i < targets.size(); ++i) row.push_back({targets[i], w[i] / total});
    return row;
  };

  std::vector<StateId> pool(n);
  std::iota(pool.begin(), pool.end(), StateId{0});
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
  std::size_t pool_pos = 0;

  for (StateId s = 0; s < n; ++s) {
    if (!flawed(s)) continue;
    const std::size_t k = support_size();
    if (spec.uniform_disjoint) {
      if (pool_pos + k > pool.size()) throw ModelError("not enough states for disjoint supports");
      std::vector<StateId> targets(pool.begin() + static_cast<std::ptrdiff_t>(pool_pos),
                                   pool.begin() + static_cast<std::ptrdiff_t>(pool_pos + k));
      pool_pos += k;
      const auto d = Distribution::uniform(std::move(targets));
      raw.principal[s] = {d.arcs().begin(), d.arcs().end()};
    } else {
      raw.principal[s] = weighted(distinct_targets(k));
    }
  }
  if (spec.noise_support > 0) {
    for (StateId s = 0; s < n; ++s) {
      const std::size_t k = 1 + static_cast<std::size_t>(rng.below(std::min<std::uint64_t>(spec.noise_support, n)));
      raw.noise[s] = weighted(distinct_targets(k));
    }
  }
  StateId start = 0;
  for (StateId s = 0; s < n; ++s) {
    if (flawed(s)) {
      start = s;
      break;
    }
  }
  raw.initial = start;
  return validate_instance(raw);
}

}  // namespace flawsim
