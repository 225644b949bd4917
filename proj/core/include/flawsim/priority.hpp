#pragma once

#include <optional>
#include <vector>

#include "flawsim/flaw_set.hpp"

namespace flawsim {

/// Fixed flaw ordering. Position 0 is the highest priority.
class Priority {
 public:
  Priority() = default;
  /// `order[k]` is the flaw at position k. Throws ValidationError unless
  /// `order` is a permutation of 0..m-1.
  explicit Priority(std::vector<FlawId> order);

  static Priority identity(std::size_t m);

  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<FlawId>& order() const noexcept { return order_; }
  std::size_t rank(FlawId f) const { return rank_.at(f); }

  /// Highest-priority member of `flaws`, none when empty.
  std::optional<FlawId> highest(const FlawSet& flaws) const;

 private:
  std::vector<FlawId> order_;
  std::vector<std::size_t> rank_;
};

}  // namespace flawsim
