#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "flawsim/types.hpp"

namespace flawsim {

/// Fixed-universe bitset over flaw indices 0..m-1.
class FlawSet {
 public:
  FlawSet() = default;
  explicit FlawSet(std::size_t universe);
  FlawSet(std::size_t universe, std::initializer_list<FlawId> members);

  static FlawSet from_indices(std::size_t universe, const std::vector<FlawId>& members);

  std::size_t universe() const noexcept { return universe_; }

  void insert(FlawId f);
  void erase(FlawId f);
  bool contains(FlawId f) const noexcept;
  std::size_t count() const noexcept;
  bool empty() const noexcept;
  void clear() noexcept;

  bool is_subset_of(const FlawSet& other) const noexcept;
  bool intersects(const FlawSet& other) const noexcept;

  FlawSet& operator|=(const FlawSet& other);
  FlawSet& operator&=(const FlawSet& other);
  /// Set difference in place.
  FlawSet& operator-=(const FlawSet& other);

  friend FlawSet operator|(FlawSet a, const FlawSet& b) { return a |= b; }
  friend FlawSet operator&(FlawSet a, const FlawSet& b) { return a &= b; }
  friend FlawSet operator-(FlawSet a, const FlawSet& b) { return a -= b; }

  friend bool operator==(const FlawSet&, const FlawSet&) = default;
  bool operator<(const FlawSet& other) const noexcept;

  /// Ascending member indices.
  std::vector<FlawId> members() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = __builtin_ctzll(bits);
        fn(static_cast<FlawId>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  /// "{f1,f3}" style rendering using 1-based indices when no names are given.
  std::string to_string(const std::vector<std::string>* names = nullptr) const;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace flawsim
