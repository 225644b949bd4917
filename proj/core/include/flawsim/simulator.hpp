#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flawsim/certifier.hpp"
#include "flawsim/model.hpp"
#include "flawsim/rng.hpp"

namespace flawsim {

struct StepResult {
  StateId next = 0;
  bool noise = false;
};

/// One transition: a uniform for the mixture coin (noise iff u < p), then a
/// uniform through the inverse CDF of the chosen row.
StepResult step(const ChainModel& model, StateId state, RandomStream& rng);

enum class Terminal { flawless_hit, budget_exhausted };

const char* to_string(Terminal t);

/// states[i] is sigma_{i+1}; noise[i] flags the step leaving states[i].
struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<StateId> states;
  std::vector<std::uint8_t> noise;
  Terminal terminal = Terminal::budget_exhausted;
  /// Steps in the maximal bad prefix: sigma_1..sigma_Z are flawed.
  std::size_t z = 0;

  std::size_t steps() const noexcept { return noise.size(); }
};

struct RunOptions {
  std::uint64_t max_steps = 1000;
  /// Keep stepping after the first flawless state (exploratory only).
  bool continue_after_hit = false;
};

/// Starts at the fixed initial state (or one draw from theta) and stops at
/// the first flawless state or when the budget runs out.
Trajectory run(const ChainModel& model, std::uint64_t seed, const RunOptions& options);

struct HittingStats {
  std::uint64_t trials = 0;
  std::uint64_t budget = 0;
  std::uint64_t master_seed = 0;
  /// Per trial: steps until the first flawless state, none if censored.
  std::vector<std::optional<std::uint64_t>> hit_step;

  /// Fraction of trials not flawless after t steps.
  double tail(std::uint64_t t) const;
  std::uint64_t censored() const;
};

/// Trial i runs on derive_stream(master_seed, i). Results are identical for
/// any thread count.
HittingStats monte_carlo(const ChainModel& model, std::uint64_t trials, std::uint64_t master_seed,
                         std::uint64_t budget, unsigned threads = 1);

struct TailRow {
  double s = 0.0;
  std::uint64_t horizon = 0;  // ceil(steps(s))
  double empirical = 0.0;
  double bound = 0.0;  // exp(-s) + 3 sigma
  bool inconclusive = false;
  bool pass = false;
};

struct TailReport {
  bool guaranteed = false;  // false: uncertified instance, no verdict
  std::vector<TailRow> rows;
  bool pass() const;
};

TailReport tail_check(const HittingStats& stats, const std::optional<Bounds>& bounds,
                      const std::vector<double>& s_values);

}  // namespace flawsim
