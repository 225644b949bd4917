#include <gtest/gtest.h>

#include <cmath>

#include "canonical.hpp"
#include "flawsim/flawsim.hpp"
#include "oracle.hpp"

using namespace flawsim;

TEST(LabeledArcs, Star9Principal) {
  const auto arcs = labeled_arcs(fixtures::star9(), Kernel::principal);
  ASSERT_EQ(arcs.size(), 8u);
  for (StateId t = 1; t <= 8; ++t) EXPECT_EQ(arcs[t - 1], (LabeledArc{0, t, 0}));
}

TEST(LabeledArcs, Star9NoisyNoiseSkipsFlawlessSources) {
  const auto arcs = labeled_arcs(fixtures::star9_noisy(), Kernel::noise);
  ASSERT_EQ(arcs.size(), 1u);
  EXPECT_EQ(arcs[0], (LabeledArc{0, 0, 0}));
}

TEST(LabeledArcs, TriangleNineArcsPerFlawedColoring) {
  const Instance tri = fixtures::triangle3();
  const auto arcs = labeled_arcs(tri, Kernel::principal);
  std::size_t flawed = 0;
  for (StateId s = 0; s < tri.state_count(); ++s) flawed += tri.is_flawed(s) ? 1 : 0;
  EXPECT_EQ(flawed, 21u);  // 27 colourings minus 6 proper ones
  EXPECT_EQ(arcs.size(), 9 * flawed);
  for (const auto& a : arcs) EXPECT_EQ(a.label, *tri.addressed_flaw(a.source));
}

TEST(LabeledArcs, ImplicitInstanceIsRejected) {
  const auto big = gen_coloring(3, {{0, 1}}, 3, kDefaultExplicitCap, Flavor::implicit_only);
  try {
    labeled_arcs(as_model(big), Kernel::principal);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_STREQ(e.what(), "analysis requires explicit instance");
  }
}

TEST(Causality, Star9HasNoEdges) { EXPECT_EQ(causality_graph(fixtures::star9(), Kernel::principal).edge_count(), 0u); }

TEST(Causality, TriangleIsComplete) {
  const auto g = causality_graph(fixtures::triangle3(), Kernel::principal);
  for (FlawId i = 0; i < 3; ++i) {
    for (FlawId j = 0; j < 3; ++j) {
      if (i != j) EXPECT_TRUE(g.has_edge(i, j)) << i << "->" << j;
    }
  }
}

TEST(Causality, PresentFlawCannotCauseItself) {
  // Both flawed states keep f1 present; no edge may appear.
  RawInstance raw;
  raw.state_count = 3;
  raw.flaws = {{"f1", {0, 1}}};
  raw.principal[0] = {{1, 0.5}, {2, 0.5}};
  raw.principal[1] = {{0, 0.5}, {2, 0.5}};
  const Instance inst = validate_instance(raw);
  EXPECT_EQ(causality_graph(inst, Kernel::principal).edge_count(), 0u);
}

TEST(Neighborhood, Examples) {
  EXPECT_EQ(neighborhood(causality_graph(fixtures::star9(), Kernel::principal), 0), FlawSet(1, {0}));
  EXPECT_EQ(neighborhood(causality_graph(fixtures::triangle3(), Kernel::principal), 1), FlawSet(3, {0, 1, 2}));
  CausalityGraph empty{Kernel::principal, std::vector<FlawSet>(4, FlawSet(4))};
  EXPECT_EQ(neighborhood(empty, 2), FlawSet(4, {2}));
}

TEST(Potential, Examples) {
  EXPECT_NEAR(potential(fixtures::star9(), 0), 3.0, 1e-12);
  EXPECT_NEAR(potential(fixtures::star9_noisy(0.2), 0), 3.121928, 1e-6);
}

TEST(Potential, NeverAddressedIsInfinite) {
  // f2 = {0} is always shadowed by the higher-priority f1.
  RawInstance raw = gen_star(4).to_raw();
  raw.flaws.push_back({"f2", {0}});
  raw.priority = {"f1", "f2"};
  const Instance inst = validate_instance(raw);
  EXPECT_TRUE(std::isinf(potential(inst, 1)));
  const Analysis a = flaw_profiles(inst);
  EXPECT_FALSE(a.profiles[1].addressed);
}

TEST(Congestion, Examples) {
  const Congestion c = congestion(fixtures::star9(), 0, Kernel::principal);
  EXPECT_EQ(c.count, 1u);
  EXPECT_EQ(c.bits, 0.0);

  RawInstance raw;
  raw.state_count = 4;
  raw.flaws = {{"f1", {0, 1}}};
  raw.principal[0] = {{2, 0.5}, {3, 0.5}};
  raw.principal[1] = {{2, 0.5}, {3, 0.5}};
  const Congestion two = congestion(validate_instance(raw), 0, Kernel::principal);
  EXPECT_EQ(two.count, 2u);
  EXPECT_NEAR(two.bits, 1.0, 1e-15);

  const Congestion ns = congestion(fixtures::star9_noisy(), 0, Kernel::noise);
  EXPECT_EQ(ns.count, 1u);
  EXPECT_EQ(ns.bits, 0.0);
}

TEST(Congestion, ZeroCountIsFlagged) {
  const Congestion c = congestion(fixtures::star9(), 0, Kernel::noise);
  EXPECT_EQ(c.count, 0u);
  EXPECT_EQ(c.bits, 0.0);
  EXPECT_TRUE(c.unreached);
}

TEST(Congestion, ProseRuleNeverExceedsFormalRule) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomSpec spec;
    spec.states = 24;
    spec.flaws = 4;
    spec.density = 0.4;
    spec.p = 0.2;
    const Instance inst = gen_random(spec, seed);
    for (FlawId f = 0; f < inst.flaw_count(); ++f) {
      for (Kernel k : {Kernel::principal, Kernel::noise}) {
        EXPECT_LE(congestion(inst, f, k, CongestionRule::addressed).count,
                  congestion(inst, f, k, CongestionRule::members).count);
      }
    }
  }
}

TEST(QOfP, Examples) {
  EXPECT_EQ(q_of_p(3, 2.0, 0.0), 0.0);
  EXPECT_NEAR(q_of_p(1, 0.0, 0.5), 0.25, 1e-15);
  EXPECT_LE(q_of_p(1, 0.0, 0.5), 0.5 * 1 * 4.0);
}

TEST(Profiles, Star9) {
  const Analysis a = flaw_profiles(fixtures::star9());
  const FlawProfile& f = a.profiles.at(0);
  EXPECT_NEAR(f.potential, 3.0, 1e-12);
  EXPECT_EQ(f.b_pr, 0.0);
  EXPECT_EQ(f.delta, 1u);
  EXPECT_EQ(f.q, 0.0);
  EXPECT_NEAR(f.amenability, 3.0, 1e-12);
}

TEST(Profiles, TriangleNeighborhoodsAreEverything) {
  const Analysis a = flaw_profiles(fixtures::triangle3());
  for (const auto& f : a.profiles) EXPECT_EQ(f.gamma_pr, FlawSet(3, {0, 1, 2}));
}

TEST(Profiles, Star9Noisy) {
  const Analysis a = flaw_profiles(fixtures::star9_noisy(0.2));
  EXPECT_NEAR(a.profiles[0].amenability, 3.121928, 1e-6);
  EXPECT_NEAR(a.profiles[0].q, 0.1, 1e-12);
}

TEST(Profiles, NoiselessNoiseNeighborhoodIsSelf) {
  const Analysis a = flaw_profiles(fixtures::triangle3());
  for (const auto& f : a.profiles) {
    EXPECT_EQ(f.gamma_ns, FlawSet(3, {f.flaw}));
    EXPECT_EQ(f.delta, 1u);
    EXPECT_EQ(f.q, 0.0);
  }
}

namespace {

std::vector<Instance> sample_instances() {
  std::vector<Instance> out{fixtures::star9(), fixtures::star9_noisy(0.2), fixtures::triangle3(), fixtures::path2()};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomSpec spec;
    spec.states = 8 + seed * 3;
    spec.flaws = 1 + seed % 6;
    spec.density = 0.15 + 0.05 * static_cast<double>(seed % 5);
    spec.p = (seed % 3 == 0) ? 0.0 : 0.1 * static_cast<double>(seed % 4);
    spec.max_support = 2 + seed % 4;
    out.push_back(gen_random(spec, 1000 + seed));
  }
  return out;
}

}  // namespace

TEST(Profiles, MatchBruteForceOracle) {
  for (const Instance& inst : sample_instances()) {
    const oracle::Dense d = oracle::densify(inst);
    const Analysis a = flaw_profiles(inst);
    const auto adj_pr = oracle::causality(d, false);
    const auto adj_ns = oracle::causality(d, true);
    for (FlawId i = 0; i < d.m; ++i) {
      for (FlawId j = 0; j < d.m; ++j) {
        EXPECT_EQ(a.pr.has_edge(i, j), adj_pr[i][j]);
        EXPECT_EQ(a.ns.has_edge(i, j), adj_ns[i][j]);
      }
      const auto& prof = a.profiles[i];
      const auto gp = oracle::gamma(adj_pr, i);
      const auto gn = oracle::gamma(adj_ns, i);
      EXPECT_EQ(prof.gamma_pr.members(), std::vector<FlawId>(gp.begin(), gp.end()));
      EXPECT_EQ(prof.gamma_ns.members(), std::vector<FlawId>(gn.begin(), gn.end()));
      const double pot = oracle::potential(d, i);
      if (std::isinf(pot)) {
        EXPECT_TRUE(std::isinf(prof.potential));
      } else {
        EXPECT_NEAR(prof.potential, pot, 1e-9);
      }
      EXPECT_EQ(prof.congestion_pr, oracle::congestion(d, i, false));
      EXPECT_EQ(prof.congestion_ns, oracle::congestion(d, i, true));
    }
  }
}

TEST(Profiles, PotentialBoundedByPrincipalEntropy) {
  for (const Instance& inst : sample_instances()) {
    const Analysis a = flaw_profiles(inst);
    for (FlawId f = 0; f < inst.flaw_count(); ++f) {
      double min_pr = kInfinity;
      for (StateId s = 0; s < inst.state_count(); ++s) {
        if (inst.addressed_flaw(s) == f) min_pr = std::min(min_pr, shannon_entropy(inst.principal(s)));
      }
      if (std::isinf(min_pr)) continue;
      EXPECT_GE(a.profiles[f].potential + 1e-12, (1.0 - inst.p()) * min_pr);
    }
  }
}

TEST(Profiles, SelfInclusionAndQBound) {
  for (const Instance& inst : sample_instances()) {
    const Analysis a = flaw_profiles(inst);
    for (const auto& f : a.profiles) {
      EXPECT_TRUE(f.gamma_pr.contains(f.flaw));
      EXPECT_TRUE(f.gamma_ns.contains(f.flaw));
      EXPECT_GE(f.delta, 1u);
      EXPECT_LE(f.q, a.p * static_cast<double>(f.delta) * (a.b_ns + 4.0) + 1e-12);
    }
  }
}

TEST(Profiles, AddingNoiseArcNeverShrinks) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    RandomSpec spec;
    spec.states = 20;
    spec.flaws = 3;
    spec.density = 0.3;
    spec.p = 0.25;
    const Instance base = gen_random(spec, 77 + seed);
    RawInstance raw = base.to_raw();
    // Add one arc to the noise row of the first flawed state.
    StateId src = 0;
    while (src < base.state_count() && !base.is_flawed(src)) ++src;
    if (src == base.state_count()) continue;
    StateId extra = 0;
    while (base.noise(src).prob(extra) > 0.0) ++extra;
    std::vector<Arc> row;
    for (const auto& a : base.noise(src).arcs()) row.push_back({a.target, a.prob * 0.5});
    row.push_back({extra, 0.5});
    raw.noise[src] = row;
    const Instance more = validate_instance(raw);
    const Analysis a0 = flaw_profiles(base);
    const Analysis a1 = flaw_profiles(more);
    for (FlawId f = 0; f < base.flaw_count(); ++f) {
      EXPECT_TRUE(a0.profiles[f].gamma_ns.is_subset_of(a1.profiles[f].gamma_ns));
      EXPECT_LE(a0.profiles[f].congestion_ns, a1.profiles[f].congestion_ns);
    }
  }
}

TEST(Dot, RendersEdges) {
  const Instance tri = fixtures::triangle3();
  const std::string dot = to_dot(causality_graph(tri, Kernel::principal), tri.flaw_names());
  EXPECT_NE(dot.find("digraph causality_principal"), std::string::npos);
  EXPECT_NE(dot.find("\"e1\" -> \"e2\""), std::string::npos);
}
