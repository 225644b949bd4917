#pragma once

#include <cstdint>

namespace flawsim {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// SplitMix64 stream. Deterministic across platforms; every simulation
/// draw goes through this type.
class RandomStream {
 public:
  explicit constexpr RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Seed of child `index` of `master`. Depends only on the pair, so trials
/// can run in any order.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0xD1B54A32D192ED03ULL));
}

constexpr RandomStream derive_stream(std::uint64_t master, std::uint64_t index) noexcept {
  return RandomStream(trial_seed(master, index));
}

}  // namespace flawsim
