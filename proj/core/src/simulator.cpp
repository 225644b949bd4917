#include "flawsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "flawsim/error.hpp"

namespace flawsim {
namespace {

StepResult step_with(const ChainModel& model, StateId state, RandomStream& rng, std::vector<Arc>& scratch) {
  const bool noise = rng.uniform() < model.p();
  const auto row = noise ? model.noise_row(state, scratch) : model.principal_row(state, scratch);
  if (row.empty()) throw ModelError("empty transition row at state " + std::to_string(state));
  const double u = rng.uniform();
  return {row[sample_index(row, u)].target, noise};
}

StateId draw_initial(const ChainModel& model, RandomStream& rng) {
  if (const auto* s = std::get_if<StateId>(&model.initial())) return *s;
  const auto& theta = std::get<Distribution>(model.initial());
  return theta.arcs()[sample_index(theta.arcs(), rng.uniform())].target;
}

// Hitting time only, without recording the path. Must consume the stream
// exactly like run().
std::optional<std::uint64_t> hit_time(const ChainModel& model, std::uint64_t seed, std::uint64_t budget,
                                      std::vector<Arc>& scratch) {
  RandomStream rng(seed);
  StateId s = draw_initial(model, rng);
  for (std::uint64_t t = 0;; ++t) {
    if (!model.is_flawed(s)) return t;
    if (t == budget) return std::nullopt;
    s = step_with(model, s, rng, scratch).next;
  }
}

}  // namespace

StepResult step(const ChainModel& model, StateId state, RandomStream& rng) {
  std::vector<Arc> scratch;
  return step_with(model, state, rng, scratch);
}

const char* to_string(Terminal t) { return t == Terminal::flawless_hit ? "flawless_hit" : "budget_exhausted"; }

Trajectory run(const ChainModel& model, std::uint64_t seed, const RunOptions& options) {
  if (options.max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  Trajectory tr;
  tr.seed = seed;
  RandomStream rng(seed);
  std::vector<Arc> scratch;
  StateId s = draw_initial(model, rng);
  tr.states.push_back(s);
  std::optional<std::size_t> first_hit;
  while (true) {
    if (!first_hit && !model.is_flawed(s)) {
      first_hit = tr.states.size() - 1;
      if (!options.continue_after_hit) break;
    }
    if (tr.noise.size() == options.max_steps) break;
    const StepResult r = step_with(model, s, rng, scratch);
    tr.noise.push_back(r.noise ? 1 : 0);
    s = r.next;
    tr.states.push_back(s);
  }
  tr.terminal = first_hit ? Terminal::flawless_hit : Terminal::budget_exhausted;
  tr.z = first_hit ? *first_hit : tr.steps();
  return tr;
}

double HittingStats::tail(std::uint64_t t) const {
  if (trials == 0) return 0.0;
  std::uint64_t alive = 0;
  for (const auto& h : hit_step) {
    if (!h || *h > t) ++alive;
  }
  return static_cast<double>(alive) / static_cast<double>(trials);
}

std::uint64_t HittingStats::censored() const {
  return static_cast<std::uint64_t>(std::count(hit_step.begin(), hit_step.end(), std::nullopt));
}

HittingStats monte_carlo(const ChainModel& model, std::uint64_t trials, std::uint64_t master_seed,
                         std::uint64_t budget, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  HittingStats st;
  st.trials = trials;
  st.budget = budget;
  st.master_seed = master_seed;
  st.hit_step.resize(trials);
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(trials, 256))));

  auto work = [&](unsigned worker) {
    std::vector<Arc> scratch;
    for (std::uint64_t i = worker; i < trials; i += threads) {
      st.hit_step[i] = hit_time(model, trial_seed(master_seed, i), budget, scratch);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  return st;
}

bool TailReport::pass() const {
  if (!guaranteed) return false;
  return std::all_of(rows.begin(), rows.end(), [](const TailRow& r) { return r.pass; });
}

TailReport tail_check(const HittingStats& stats, const std::optional<Bounds>& bounds,
                      const std::vector<double>& s_values) {
  TailReport rep;
  rep.guaranteed = bounds.has_value();
  for (double s : s_values) {
    TailRow row;
    row.s = s;
    const double target = std::exp(-s);
    const double sigma = std::sqrt(target * (1.0 - target) / static_cast<double>(stats.trials));
    row.bound = target + 3.0 * sigma;
    if (bounds) {
      const double steps = bounds->at(s).steps;
      row.horizon = static_cast<std::uint64_t>(std::ceil(steps));
      row.inconclusive = row.horizon > stats.budget;
      if (!row.inconclusive) {
        row.empirical = stats.tail(row.horizon);
        row.pass = row.empirical <= row.bound;
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace flawsim
