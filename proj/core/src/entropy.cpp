#include "flawsim/entropy.hpp"

#include <cmath>

namespace flawsim {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double q : probabilities) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

}  // namespace flawsim
