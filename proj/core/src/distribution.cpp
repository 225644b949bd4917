#include "flawsim/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flawsim/error.hpp"

namespace flawsim {

Distribution Distribution::from_arcs(std::vector<Arc> arcs, double tolerance) {
  std::vector<std::string> problems;
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.target < b.target; });
  double sum = 0.0;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (!(arcs[i].prob > 0.0)) {
      problems.push_back("probability must be positive (target " + std::to_string(arcs[i].target) + ")");
    }
    if (i > 0 && arcs[i].target == arcs[i - 1].target) {
      problems.push_back("duplicate target " + std::to_string(arcs[i].target));
    }
    sum += arcs[i].prob;
  }
  if (arcs.empty() || std::abs(sum - 1.0) > tolerance) problems.push_back("row sum out of tolerance");
  if (!problems.empty()) throw ValidationError(std::move(problems));
  Distribution d;
  d.arcs_ = std::move(arcs);
  return d;
}

Distribution Distribution::from_sorted_unchecked(std::vector<Arc> arcs) {
  Distribution d;
  d.arcs_ = std::move(arcs);
  return d;
}

Distribution Distribution::point_mass(StateId target) { return from_sorted_unchecked({{target, 1.0}}); }

Distribution Distribution::uniform(std::vector<StateId> targets) {
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  std::vector<Arc> arcs;
  arcs.reserve(targets.size());
  const double w = 1.0 / static_cast<double>(targets.size());
  for (StateId t : targets) arcs.push_back({t, w});
  return from_sorted_unchecked(std::move(arcs));
}

double Distribution::prob(StateId target) const noexcept {
  auto it = std::lower_bound(arcs_.begin(), arcs_.end(), target,
                             [](const Arc& a, StateId t) { return a.target < t; });
  return (it != arcs_.end() && it->target == target) ? it->prob : 0.0;
}

double Distribution::total() const noexcept {
  double s = 0.0;
  for (const auto& a : arcs_) s += a.prob;
  return s;
}

double shannon_entropy(std::span<const Arc> row) {
  double h = 0.0;
  for (const auto& a : row) {
    if (a.prob > 0.0) h -= a.prob * std::log2(a.prob);
  }
  return h;
}

std::vector<Arc> mix_rows(std::span<const Arc> principal, std::span<const Arc> noise, double p) {
  std::vector<Arc> out;
  if (p <= 0.0) return {principal.begin(), principal.end()};
  if (p >= 1.0) return {noise.begin(), noise.end()};
  out.reserve(principal.size() + noise.size());
  const double keep = 1.0 - p;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < principal.size() || j < noise.size()) {
    if (j == noise.size() || (i < principal.size() && principal[i].target < noise[j].target)) {
      out.push_back({principal[i].target, keep * principal[i].prob});
      ++i;
    } else if (i == principal.size() || noise[j].target < principal[i].target) {
      out.push_back({noise[j].target, p * noise[j].prob});
      ++j;
    } else {
      out.push_back({principal[i].target, keep * principal[i].prob + p * noise[j].prob});
      ++i;
      ++j;
    }
  }
  return out;
}

std::size_t sample_index(std::span<const Arc> row, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    acc += row[i].prob;
    if (u < acc) return i;
  }
  return row.size() - 1;
}

}  // namespace flawsim
