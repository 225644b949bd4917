#pragma once

#include <limits>
#include <string>
#include <vector>

#include "flawsim/flaw_set.hpp"
#include "flawsim/model.hpp"

namespace flawsim {

enum class Kernel { principal, noise };

const char* to_string(Kernel k);

struct LabeledArc {
  StateId source = 0;
  StateId target = 0;
  FlawId label = 0;

  friend bool operator==(const LabeledArc&, const LabeledArc&) = default;
};

/// Arcs of the chosen kernel leaving flawed states, labeled by the addressed
/// flaw of the source. The noise kernel contributes no arcs when p == 0.
std::vector<LabeledArc> labeled_arcs(const ChainModel& model, Kernel which);

/// Flaw-level digraph: i -> j iff some labeled arc sigma -i-> tau has
/// tau in f_j and sigma not in f_j.
struct CausalityGraph {
  Kernel which = Kernel::principal;
  std::vector<FlawSet> out;  // out[i] = successors of i

  std::size_t flaw_count() const noexcept { return out.size(); }
  bool has_edge(FlawId i, FlawId j) const { return out.at(i).contains(j); }
  std::size_t edge_count() const;
};

CausalityGraph causality_graph(const ChainModel& model, Kernel which);

/// Gamma(f) = {f} union successors of f.
FlawSet neighborhood(const CausalityGraph& graph, FlawId flaw);

/// DOT rendering, one node per flaw.
std::string to_dot(const CausalityGraph& graph, const std::vector<std::string>& names);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Minimum mixed-row entropy over states addressing `flaw`; +inf if none.
double potential(const ChainModel& model, FlawId flaw);

/// Which states count as sources when measuring congestion.
enum class CongestionRule {
  members,    // every sigma in f_i (the formal definition)
  addressed,  // only sigma with pi(sigma) = f_i (arcs labeled i)
};

struct Congestion {
  std::size_t count = 0;
  /// log2(count); 0 with `unreached` set when count == 0.
  double bits = 0.0;
  bool unreached = false;
};

Congestion congestion(const ChainModel& model, FlawId flaw, Kernel which,
                      CongestionRule rule = CongestionRule::members);

/// q(p) = p (delta (b_ns + 5/2 + h(p)) - 2 - h(p)).
double q_of_p(std::size_t delta, double b_ns, double p);

struct FlawProfile {
  FlawId flaw = 0;
  double potential = kInfinity;
  double b_pr = 0.0;
  double b_ns = 0.0;  // this flaw's own b_ns^{f_i}
  std::size_t congestion_pr = 0;
  std::size_t congestion_ns = 0;
  bool unreached_pr = false;
  bool unreached_ns = false;
  FlawSet gamma_pr;
  FlawSet gamma_ns;
  std::size_t delta = 1;  // |gamma_ns|
  double q = 0.0;         // uses the global b_ns
  double amenability = kInfinity;
  /// False when no state addresses this flaw (potential is +inf).
  bool addressed = false;
};

struct Analysis {
  std::vector<FlawProfile> profiles;
  CausalityGraph pr;
  CausalityGraph ns;
  double p = 0.0;
  double b_ns = 0.0;         // max over flaws of b_ns^{f_i}
  double b_pr_max = 0.0;     // max over flaws of b_pr^{f_i}
  std::size_t delta_max = 1; // max over flaws of delta
  std::uint64_t state_count = 0;
  std::size_t flaw_count = 0;
  /// Arc bound B; 0 when undefined (a probability-1 arc out of a flawed state).
  int arc_bound = 0;
};

Analysis flaw_profiles(const ChainModel& model, CongestionRule rule = CongestionRule::members);

}  // namespace flawsim
