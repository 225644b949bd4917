#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "flawsim/flawsim.hpp"

/// Brute-force reference computations over dense matrices. Only the raw
/// kernel rows, memberships and priority are read from the instance.
namespace oracle {

struct Dense {
  std::size_t n = 0;
  std::size_t m = 0;
  double p = 0.0;
  std::vector<std::vector<bool>> member;  // member[s][f]
  std::vector<int> pi;                    // addressed flaw, -1 if flawless
  std::vector<std::vector<double>> pr;
  std::vector<std::vector<double>> ns;
  std::vector<std::vector<double>> mix;

  bool flawed(std::size_t s) const { return pi[s] >= 0; }
};

Dense densify(const flawsim::Instance& inst);

double entropy(const std::vector<double>& row);

/// adj[i][j] for the principal (noise = false) or noise kernel.
std::vector<std::vector<bool>> causality(const Dense& d, bool noise);

std::set<std::size_t> gamma(const std::vector<std::vector<bool>>& adj, std::size_t i);

/// Min entropy of mixed rows over states addressing i; +inf if none.
double potential(const Dense& d, std::size_t i);

/// Formal congestion: max over tau of |{sigma in f_i : K(sigma, tau) > 0}|.
std::size_t congestion(const Dense& d, std::size_t i, bool noise);

/// Probability that the walk from `root` stays in flawed states up to and
/// including the first vertex of probability <= 2^-x. Forward iteration over
/// (state, accumulated log-probability) pairs.
double bad_mass_forward(const Dense& d, std::size_t root, double x);

/// (Q^k 1)[root] where Q is the mixed matrix restricted to flawed states.
double stay_flawed(const Dense& d, std::size_t root, std::size_t k);

/// H[P] recomputed from a leaf list, red prefixes recomputed from the dense
/// memberships.
double prefix_entropy(const Dense& d, const std::vector<flawsim::Leaf>& leaves);

}  // namespace oracle
