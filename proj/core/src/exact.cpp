#include "flawsim/exact.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "flawsim/error.hpp"

namespace flawsim {
namespace {

struct Expander {
  const Instance& inst;
  double x;
  const TreeOptions& options;
  std::vector<Leaf>& leaves;
  std::vector<StateId> path;
  std::size_t stored = 0;

  // `red` is the length of the leading flawed run of `path`; `all_bad`
  // says whether that run covers the whole path.
  void expand(StateId s, double prob, double log2_prob, std::size_t red, bool all_bad) {
    path.push_back(s);
    const bool flawed = inst.is_flawed(s);
    if (all_bad && flawed) {
      red = path.size();
    } else {
      all_bad = false;
    }
    if (log2_prob <= -x) {
      emit(prob, log2_prob, red, all_bad, LeafKind::stratum);
    } else if (!flawed && !options.expand_flawless) {
      emit(prob, log2_prob, red, false, LeafKind::absorbed);
    } else {
      const Distribution row = mixed_row(inst, s);
      for (const auto& a : row.arcs()) {
        if (a.prob >= 1.0) {
          throw ModelError("probability-1 arc at state " + std::to_string(s) + " prevents stratification");
        }
      }
      for (const auto& a : row.arcs()) expand(a.target, prob * a.prob, log2_prob + std::log2(a.prob), red, all_bad);
    }
    path.pop_back();
  }

  void emit(double prob, double log2_prob, std::size_t red, bool bad, LeafKind kind) {
    if (leaves.size() >= options.cap) {
      throw ModelError("tree leaf cap of " + std::to_string(options.cap) + " exceeded (frontier reached " +
                       std::to_string(leaves.size()) + " leaves)");
    }
    stored += path.size();
    if (stored > options.path_budget) {
      throw ModelError("tree path budget of " + std::to_string(options.path_budget) + " states exceeded after " +
                       std::to_string(leaves.size()) + " leaves");
    }
    leaves.push_back({path, prob, log2_prob, red, bad, kind});
  }
};

}  // namespace

TruncatedTree truncated_tree(const ChainModel& model, double x, const TreeOptions& options) {
  const Instance& inst = require_explicit(model);
  StateId root = 0;
  if (options.root) {
    root = *options.root;
  } else if (const auto* s = std::get_if<StateId>(&inst.initial())) {
    root = *s;
  } else {
    throw ModelError("exact enumeration needs a fixed root state");
  }
  if (root >= inst.state_count()) throw ModelError("root state outside the state set");

  TruncatedTree tree;
  tree.x = x;
  try {
    tree.arc_bound = arc_bound_b(inst);
  } catch (const ModelError&) {
    tree.arc_bound = 0;
  }
  Expander ex{inst, x, options, tree.leaves, {}, 0};
  ex.expand(root, 1.0, 0.0, 0, true);
  return tree;
}

double bad_mass(const TruncatedTree& tree) {
  double m = 0.0;
  for (const auto& l : tree.leaves) {
    if (l.bad) m += l.prob;
  }
  return m;
}

double prefix_entropy(const TruncatedTree& tree) {
  std::map<std::vector<StateId>, double> groups;
  for (const auto& l : tree.leaves) {
    const auto red = static_cast<std::ptrdiff_t>(l.red_length);
    groups[std::vector<StateId>(l.path.begin(), l.path.begin() + red)] += l.prob;
  }
  double h = 0.0;
  for (const auto& [_, mass] : groups) {
    if (mass > 0.0) h -= mass * std::log2(mass);
  }
  return std::max(h, 0.0);
}

bool StratumCheck::ok() const {
  return feasible && mass_ok && sandwich_ok && lower_ok && upper_ok.value_or(true) && x0_ok.value_or(true);
}

bool StratificationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const StratumCheck& c) { return !c.feasible || c.ok(); });
}

StratificationReport verify_stratification(const ChainModel& model, const std::optional<Bounds>& bounds,
                                           const std::vector<double>& xs, const TreeOptions& options,
                                           double tolerance) {
  StratificationReport rep;
  auto check_at = [&](double x, bool at_x0) {
    StratumCheck c;
    c.x = x;
    TruncatedTree tree;
    try {
      tree = truncated_tree(model, x, options);
    } catch (const ModelError& e) {
      c.feasible = false;
      c.note = e.what();
      rep.checks.push_back(c);
      return;
    }
    c.leaves = tree.leaves.size();
    for (const auto& l : tree.leaves) c.mass += l.prob;
    c.bad = bad_mass(tree);
    c.h_p = prefix_entropy(tree);
    c.mass_ok = std::abs(c.mass - 1.0) <= tolerance;
    c.sandwich_ok = tree.arc_bound > 0;
    const double b = static_cast<double>(tree.arc_bound);
    for (const auto& l : tree.leaves) {
      if (l.kind != LeafKind::stratum) continue;
      if (!(l.log2_prob <= -x && l.log2_prob > -x - b - tolerance)) c.sandwich_ok = false;
    }
    c.lower_ok = c.h_p >= x * c.bad - tolerance;
    if (bounds) {
      c.upper_ok = c.h_p <= bounds->lambda * x + bounds->m0 + tolerance;
      if (at_x0) c.x0_ok = c.bad <= (1.0 + bounds->lambda) / 2.0 + tolerance;
    }
    rep.checks.push_back(c);
  };
  for (double x : xs) check_at(x, false);
  if (bounds) check_at(bounds->x0, true);
  return rep;
}

}  // namespace flawsim
