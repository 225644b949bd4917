#include "flawsim/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flawsim/entropy.hpp"
#include "flawsim/error.hpp"

namespace flawsim {
namespace {

std::span<const Arc> kernel_row(const Instance& inst, StateId s, Kernel which) {
  return which == Kernel::principal ? inst.principal(s).arcs() : inst.noise(s).arcs();
}

// D_ns carries no probability mass when p == 0.
bool kernel_active(const Instance& inst, Kernel which) { return which == Kernel::principal || inst.p() > 0.0; }

}  // namespace

const char* to_string(Kernel k) { return k == Kernel::principal ? "principal" : "noise"; }

std::vector<LabeledArc> labeled_arcs(const ChainModel& model, Kernel which) {
  const Instance& inst = require_explicit(model);
  std::vector<LabeledArc> arcs;
  if (!kernel_active(inst, which)) return arcs;
  for (StateId s = 0; s < inst.state_count(); ++s) {
    const auto label = inst.addressed_flaw(s);
    if (!label) continue;
    for (const auto& a : kernel_row(inst, s, which)) arcs.push_back({s, a.target, *label});
  }
  return arcs;
}

std::size_t CausalityGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& o : out) n += o.count();
  return n;
}

CausalityGraph causality_graph(const ChainModel& model, Kernel which) {
  const Instance& inst = require_explicit(model);
  const std::size_t m = inst.flaw_count();
  CausalityGraph g{which, std::vector<FlawSet>(m, FlawSet(m))};
  if (!kernel_active(inst, which)) return g;
  for (StateId s = 0; s < inst.state_count(); ++s) {
    const auto label = inst.addressed_flaw(s);
    if (!label) continue;
    const FlawSet& here = inst.present(s);
    for (const auto& a : kernel_row(inst, s, which)) g.out[*label] |= inst.present(a.target) - here;
  }
  return g;
}

FlawSet neighborhood(const CausalityGraph& graph, FlawId flaw) {
  FlawSet n = graph.out.at(flaw);
  n.insert(flaw);
  return n;
}

std::string to_dot(const CausalityGraph& graph, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "digraph causality_" << to_string(graph.which) << " {\n";
  for (FlawId i = 0; i < graph.flaw_count(); ++i) os << "  \"" << names.at(i) << "\";\n";
  for (FlawId i = 0; i < graph.flaw_count(); ++i) {
    graph.out[i].for_each([&](FlawId j) { os << "  \"" << names.at(i) << "\" -> \"" << names.at(j) << "\";\n"; });
  }
  os << "}\n";
  return os.str();
}

double potential(const ChainModel& model, FlawId flaw) {
  const Instance& inst = require_explicit(model);
  double best = kInfinity;
  for (StateId s = 0; s < inst.state_count(); ++s) {
    if (inst.addressed_flaw(s) != flaw) continue;
    best = std::min(best, shannon_entropy(mixed_row(inst, s)));
  }
  return best;
}

Congestion congestion(const ChainModel& model, FlawId flaw, Kernel which, CongestionRule rule) {
  const Instance& inst = require_explicit(model);
  Congestion c;
  if (kernel_active(inst, which)) {
    std::vector<std::size_t> incoming(inst.state_count(), 0);
    auto count_from = [&](StateId s) {
      for (const auto& a : kernel_row(inst, s, which)) c.count = std::max(c.count, ++incoming[a.target]);
    };
    if (rule == CongestionRule::members) {
      for (StateId s : inst.members(flaw)) count_from(s);
    } else {
      for (StateId s = 0; s < inst.state_count(); ++s) {
        if (inst.addressed_flaw(s) == flaw) count_from(s);
      }
    }
  }
  if (c.count == 0) {
    c.unreached = true;
    c.bits = 0.0;
  } else {
    c.bits = std::log2(static_cast<double>(c.count));
  }
  return c;
}

double q_of_p(std::size_t delta, double b_ns, double p) {
  const double h = binary_entropy(p);
  return p * (static_cast<double>(delta) * (b_ns + 2.5 + h) - 2.0 - h);
}

Analysis flaw_profiles(const ChainModel& model, CongestionRule rule) {
  const Instance& inst = require_explicit(model);
  const std::size_t m = inst.flaw_count();
  Analysis a;
  a.p = inst.p();
  a.state_count = inst.state_count();
  a.flaw_count = m;
  a.pr = causality_graph(inst, Kernel::principal);
  a.ns = causality_graph(inst, Kernel::noise);
  try {
    a.arc_bound = arc_bound_b(inst);
  } catch (const ModelError&) {
    a.arc_bound = 0;
  }

  std::vector<double> pot(m, kInfinity);
  for (StateId s = 0; s < inst.state_count(); ++s) {
    const auto f = inst.addressed_flaw(s);
    if (!f) continue;
    pot[*f] = std::min(pot[*f], shannon_entropy(mixed_row(inst, s)));
  }

  a.profiles.resize(m);
  for (FlawId f = 0; f < m; ++f) {
    FlawProfile& pr = a.profiles[f];
    pr.flaw = f;
    pr.potential = pot[f];
    pr.addressed = std::isfinite(pot[f]);
    const Congestion cp = congestion(inst, f, Kernel::principal, rule);
    const Congestion cn = congestion(inst, f, Kernel::noise, rule);
    pr.b_pr = cp.bits;
    pr.congestion_pr = cp.count;
    pr.unreached_pr = cp.unreached;
    pr.b_ns = cn.bits;
    pr.congestion_ns = cn.count;
    pr.unreached_ns = cn.unreached;
    pr.gamma_pr = neighborhood(a.pr, f);
    pr.gamma_ns = neighborhood(a.ns, f);
    pr.delta = pr.gamma_ns.count();
    a.b_ns = std::max(a.b_ns, pr.b_ns);
    a.b_pr_max = std::max(a.b_pr_max, pr.b_pr);
    a.delta_max = std::max(a.delta_max, pr.delta);
  }
  for (auto& pr : a.profiles) {
    pr.q = q_of_p(pr.delta, a.b_ns, a.p);
    pr.amenability = pr.potential - pr.b_pr;
  }
  return a;
}

}  // namespace flawsim
