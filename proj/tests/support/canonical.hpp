#pragma once

#include <vector>

#include "flawsim/flawsim.hpp"

namespace fixtures {

inline flawsim::Instance star9() { return flawsim::gen_star(8); }

/// STAR9 with point noise at the hub applied to every state.
inline flawsim::Instance star9_noisy(double p = 0.2) {
  return flawsim::attach_noise(star9(), flawsim::NoiseModel::point(0), p);
}

inline flawsim::Instance triangle3() {
  return std::get<flawsim::Instance>(
      flawsim::gen_coloring(3, {{0, 1}, {1, 2}, {2, 0}}, 3, flawsim::kDefaultExplicitCap, flawsim::Flavor::explicit_only));
}

inline flawsim::Instance path2() {
  return std::get<flawsim::Instance>(
      flawsim::gen_coloring(3, {{0, 1}, {1, 2}}, 2, flawsim::kDefaultExplicitCap, flawsim::Flavor::explicit_only));
}

/// Mixed-radix encoding of a colouring, vertex 0 least significant.
inline flawsim::StateId coloring_state(const std::vector<std::uint32_t>& colors, std::uint32_t q) {
  flawsim::StateId s = 0;
  for (std::size_t i = colors.size(); i-- > 0;) s = s * q + colors[i];
  return s;
}

}  // namespace fixtures
