#pragma once

#include <span>
#include <vector>

#include "flawsim/types.hpp"

namespace flawsim {

struct Arc {
  StateId target = 0;
  double prob = 0.0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// A finite probability distribution over states with strictly positive
/// weights, stored sorted by target (the canonical order the sampler uses).
class Distribution {
 public:
  Distribution() = default;

  /// Sorts by target. Throws ValidationError on duplicate targets,
  /// non-positive weights, or a sum outside 1 +- tolerance.
  static Distribution from_arcs(std::vector<Arc> arcs, double tolerance = kRowSumTolerance);

  /// No checks; caller guarantees the invariants (sorted, unique, positive).
  static Distribution from_sorted_unchecked(std::vector<Arc> arcs);

  static Distribution point_mass(StateId target);
  static Distribution uniform(std::vector<StateId> targets);

  std::span<const Arc> arcs() const noexcept { return arcs_; }
  std::size_t size() const noexcept { return arcs_.size(); }
  bool empty() const noexcept { return arcs_.empty(); }

  /// Probability of `target`, 0 when outside the support.
  double prob(StateId target) const noexcept;
  double total() const noexcept;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<Arc> arcs_;
};

/// Shannon entropy (bits) of a row.
double shannon_entropy(std::span<const Arc> row);
inline double shannon_entropy(const Distribution& d) { return shannon_entropy(d.arcs()); }

/// (1-p)*principal + p*noise over the union of supports, sorted by target.
/// Weights that vanish (p == 0 or p == 1) are dropped.
std::vector<Arc> mix_rows(std::span<const Arc> principal, std::span<const Arc> noise, double p);

/// Inverse-CDF draw: index of the first arc whose running sum exceeds u.
/// Falls back to the last arc when rounding leaves u above the total.
std::size_t sample_index(std::span<const Arc> row, double u);

}  // namespace flawsim
