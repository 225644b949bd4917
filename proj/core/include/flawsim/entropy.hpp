#pragma once

#include <span>

namespace flawsim {

/// h(p) = -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

/// -sum q log2 q over the given probabilities; zero entries contribute nothing.
double entropy_bits(std::span<const double> probabilities);

}  // namespace flawsim
