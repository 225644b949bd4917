#include "flawsim/priority.hpp"

#include "flawsim/error.hpp"

namespace flawsim {

Priority::Priority(std::vector<FlawId> order) : order_(std::move(order)), rank_(order_.size(), order_.size()) {
  for (std::size_t pos = 0; pos < order_.size(); ++pos) {
    const FlawId f = order_[pos];
    if (f >= order_.size() || rank_[f] != order_.size()) {
      throw ValidationError({"priority is not a permutation"});
    }
    rank_[f] = pos;
  }
}

Priority Priority::identity(std::size_t m) {
  std::vector<FlawId> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  return Priority(std::move(order));
}

std::optional<FlawId> Priority::highest(const FlawSet& flaws) const {
  if (flaws.empty()) return std::nullopt;
  for (FlawId f : order_) {
    if (flaws.contains(f)) return f;
  }
  return std::nullopt;
}

}  // namespace flawsim
