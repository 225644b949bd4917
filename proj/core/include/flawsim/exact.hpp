#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flawsim/certifier.hpp"
#include "flawsim/model.hpp"

namespace flawsim {

enum class LeafKind {
  stratum,   // first vertex with probability <= 2^-x
  absorbed,  // flawless vertex above the stratum; its subtree shares one red prefix
};

struct Leaf {
  std::vector<StateId> path;
  double prob = 1.0;
  double log2_prob = 0.0;
  /// Length of the maximal all-flawed prefix of `path`.
  std::size_t red_length = 0;
  bool bad = false;  // every state on the path is flawed
  LeafKind kind = LeafKind::stratum;
};

struct TreeOptions {
  std::size_t cap = 10'000'000;
  /// Limit on the total number of states stored across all leaf paths.
  std::size_t path_budget = 200'000'000;
  /// Keep expanding through flawless vertices. Needs every arc out of a
  /// reachable flawless state to have probability < 1.
  bool expand_flawless = false;
  /// Root override; required when the instance starts from a distribution.
  std::optional<StateId> root;
};

/// Process tree truncated at probability 2^-x, leaves in lexicographic path order.
struct TruncatedTree {
  double x = 0.0;
  int arc_bound = 0;
  std::vector<Leaf> leaves;
};

/// Depth-first expansion from the root. Throws ModelError when the leaf
/// count would exceed the cap.
TruncatedTree truncated_tree(const ChainModel& model, double x, const TreeOptions& options = {});

/// Pr[Sigma in B(x)].
double bad_mass(const TruncatedTree& tree);

/// H[P] with P grouped by the exact state sequence of the maximal red prefix.
double prefix_entropy(const TruncatedTree& tree);

struct StratumCheck {
  double x = 0.0;
  bool feasible = true;
  std::string note;
  std::size_t leaves = 0;
  double mass = 0.0;
  double bad = 0.0;
  double h_p = 0.0;
  bool mass_ok = false;
  bool sandwich_ok = false;  // stratum leaves in (2^(-x-B), 2^-x]
  bool lower_ok = false;     // H[P] >= x Pr[B(x)]
  std::optional<bool> upper_ok;  // H[P] <= lambda x + M0, when certified
  std::optional<bool> x0_ok;     // Pr[B(x0)] <= (1+lambda)/2, at x = x0

  bool ok() const;
};

struct StratificationReport {
  std::vector<StratumCheck> checks;
  bool ok() const;
};

/// Runs the checks at every grid point, plus at x0 when `bounds` is given
/// and the tree fits. Infeasible points are skipped with a note.
StratificationReport verify_stratification(const ChainModel& model, const std::optional<Bounds>& bounds,
                                           const std::vector<double>& xs, const TreeOptions& options = {},
                                           double tolerance = 1e-9);

}  // namespace flawsim
