#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "canonical.hpp"
#include "flawsim/flawsim.hpp"

using namespace flawsim;

namespace {

RawInstance star_raw(std::size_t k) { return gen_star(k).to_raw(); }

::testing::AssertionResult rejects_with(const RawInstance& raw, const std::string& fragment) {
  try {
    validate_instance(raw);
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) {
      if (v.find(fragment) != std::string::npos) return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << "violations lack '" << fragment << "': " << e.what();
  }
  return ::testing::AssertionFailure() << "instance was accepted";
}

}  // namespace

TEST(Validate, Star9IsValid) {
  const Instance inst = validate_instance(star_raw(8));
  EXPECT_EQ(inst.state_count(), 9u);
  EXPECT_EQ(inst.flaw_count(), 1u);
  EXPECT_TRUE(inst.warnings().empty());
}

TEST(Validate, FlawlessStateMustSelfLoop) {
  RawInstance raw = star_raw(8);
  raw.principal[3] = {{3, 0.5}, {4, 0.5}};
  EXPECT_TRUE(rejects_with(raw, "flawless state must self-loop with probability 1"));
}

TEST(Validate, RowSumOutOfTolerance) {
  RawInstance raw = star_raw(2);
  raw.principal[0] = {{1, 0.49}, {2, 0.49}};
  EXPECT_TRUE(rejects_with(raw, "row sum out of tolerance"));
}

TEST(Validate, PriorityMustBePermutation) {
  RawInstance raw = star_raw(2);
  raw.priority = {"f1", "f1"};
  EXPECT_TRUE(rejects_with(raw, "priority is not a permutation"));
}

TEST(Validate, NonPositiveProbability) {
  RawInstance raw = star_raw(2);
  raw.principal[0] = {{1, 1.0}, {2, 0.0}};
  EXPECT_TRUE(rejects_with(raw, "probability must be positive"));
}

TEST(Validate, CollectsEveryViolation) {
  RawInstance raw = star_raw(2);
  raw.principal[0] = {{1, 0.3}};
  raw.principal[1] = {{2, 1.0}};
  raw.p = 1.5;
  try {
    validate_instance(raw);
    FAIL() << "accepted";
  } catch (const ValidationError& e) {
    EXPECT_GE(e.violations().size(), 3u);
  }
}

TEST(Validate, EmptyFlawWarns) {
  RawInstance raw = star_raw(2);
  raw.flaws.push_back({"ghost", {}});
  raw.priority.push_back("ghost");
  const Instance inst = validate_instance(raw);
  ASSERT_EQ(inst.warnings().size(), 1u);
  EXPECT_NE(inst.warnings()[0].find("empty"), std::string::npos);
}

TEST(Validate, RowsAreSortedByTarget) {
  RawInstance raw = star_raw(3);
  raw.principal[0] = {{3, 0.2}, {1, 0.5}, {2, 0.3}};
  const Instance inst = validate_instance(raw);
  const auto row = inst.principal(0).arcs();
  ASSERT_EQ(row.size(), 3u);
  EXPECT_TRUE(std::is_sorted(row.begin(), row.end(), [](const Arc& a, const Arc& b) { return a.target < b.target; }));
}

TEST(Validate, RawRoundTrip) {
  const Instance a = fixtures::star9_noisy();
  const Instance b = validate_instance(a.to_raw());
  for (StateId s = 0; s < a.state_count(); ++s) {
    EXPECT_EQ(a.principal(s), b.principal(s));
    EXPECT_EQ(a.noise(s), b.noise(s));
  }
}

TEST(PresentFlaws, Star9) {
  const Instance inst = fixtures::star9();
  EXPECT_EQ(present_flaws(inst, 0), FlawSet(1, {0}));
  EXPECT_TRUE(present_flaws(inst, 3).empty());
}

TEST(PresentFlaws, TriangleAllRed) {
  const Instance inst = fixtures::triangle3();
  EXPECT_EQ(present_flaws(inst, fixtures::coloring_state({0, 0, 0}, 3)), FlawSet(3, {0, 1, 2}));
}

TEST(AddressedFlaw, Examples) {
  const Instance tri = fixtures::triangle3();
  EXPECT_EQ(addressed_flaw(tri, fixtures::coloring_state({0, 0, 0}, 3)), FlawId{0});
  // Only e3 = (2,0) is monochromatic.
  EXPECT_EQ(addressed_flaw(tri, fixtures::coloring_state({1, 2, 1}, 3)), FlawId{2});
  EXPECT_EQ(addressed_flaw(fixtures::star9(), 5), std::nullopt);
}

TEST(AddressedFlaw, RespectsPriorityOrder) {
  RawInstance raw = fixtures::triangle3().to_raw();
  raw.priority = {"e3", "e2", "e1"};
  const Instance inst = validate_instance(raw);
  EXPECT_EQ(addressed_flaw(inst, fixtures::coloring_state({0, 0, 0}, 3)), FlawId{2});
}

TEST(AddressedFlaw, IsPresentWheneverFlawed) {
  const Instance tri = fixtures::triangle3();
  for (StateId s = 0; s < tri.state_count(); ++s) {
    const auto f = addressed_flaw(tri, s);
    EXPECT_EQ(f.has_value(), !present_flaws(tri, s).empty());
    if (f) EXPECT_TRUE(present_flaws(tri, s).contains(*f));
  }
}

TEST(MixedRow, ZeroNoiseIsPrincipal) {
  const Instance inst = fixtures::star9();
  EXPECT_EQ(mixed_row(inst, 0), inst.principal(0));
}

TEST(MixedRow, Star9Noisy) {
  const Distribution row = mixed_row(fixtures::star9_noisy(0.2), 0);
  ASSERT_EQ(row.size(), 9u);
  EXPECT_NEAR(row.prob(0), 0.2, 1e-12);
  for (StateId t = 1; t <= 8; ++t) EXPECT_NEAR(row.prob(t), 0.1, 1e-12);
}

TEST(MixedRow, CoincidingSupports) {
  const auto mixed = mix_rows(std::vector<Arc>{{4, 1.0}}, std::vector<Arc>{{4, 1.0}}, 0.5);
  ASSERT_EQ(mixed.size(), 1u);
  EXPECT_EQ(mixed[0].target, 4u);
  EXPECT_NEAR(mixed[0].prob, 1.0, 1e-15);
}

TEST(MixedRow, SupportIsUnionOfSupports) {
  const Instance inst = fixtures::star9_noisy(0.3);
  for (StateId s = 0; s < inst.state_count(); ++s) {
    std::vector<StateId> expected;
    for (const auto& a : inst.principal(s).arcs()) expected.push_back(a.target);
    for (const auto& a : inst.noise(s).arcs()) expected.push_back(a.target);
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    std::vector<StateId> got;
    const Distribution row = mixed_row(inst, s);
    for (const auto& a : row.arcs()) got.push_back(a.target);
    EXPECT_EQ(got, expected) << "state " << s;
  }
}

TEST(Entropy, BinaryExamples) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
  EXPECT_NEAR(binary_entropy(0.2), 0.721928, 1e-6);
}

TEST(Entropy, BinaryIsConcaveOnGrid) {
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double a = i / 100.0;
      const double b = j / 100.0;
      EXPECT_GE(binary_entropy((a + b) / 2.0) + 1e-12, (binary_entropy(a) + binary_entropy(b)) / 2.0);
    }
  }
}

TEST(Entropy, ShannonExamples) {
  EXPECT_NEAR(shannon_entropy(Distribution::uniform({0, 1, 2, 3, 4, 5, 6, 7})), 3.0, 1e-12);
  EXPECT_EQ(shannon_entropy(Distribution::point_mass(3)), 0.0);
  std::vector<Arc> row{{0, 0.2}};
  for (StateId t = 1; t <= 8; ++t) row.push_back({t, 0.1});
  EXPECT_NEAR(shannon_entropy(Distribution::from_arcs(row)), 3.121928, 1e-6);
}

TEST(ArcBound, Star9) { EXPECT_EQ(arc_bound_b(fixtures::star9()), 4); }

TEST(ArcBound, HalfArcsNeedTwo) { EXPECT_EQ(arc_bound_b(gen_star(2)), 2); }

TEST(ArcBound, ProbabilityOneArcIsUndefined) {
  RawInstance raw = star_raw(2);
  raw.principal[0] = {{1, 1.0}};
  const Instance inst = validate_instance(raw);
  EXPECT_THROW(arc_bound_b(inst), ModelError);
}

TEST(ArcBound, FlawlessArcsAreExempt) {
  // Flawless leaves self-loop with probability 1 yet B stays finite.
  EXPECT_EQ(arc_bound_b(fixtures::path2()), 3);
}

TEST(Priority, RejectsNonPermutation) {
  EXPECT_THROW(Priority({0, 2}), ValidationError);
  EXPECT_THROW(Priority({1, 1}), ValidationError);
  const Priority p({2, 0, 1});
  EXPECT_EQ(p.rank(2), 0u);
  EXPECT_EQ(p.highest(FlawSet(3, {0, 1})), FlawId{0});
  EXPECT_EQ(p.highest(FlawSet(3)), std::nullopt);
}

TEST(FlawSetOps, Algebra) {
  const FlawSet a(70, {1, 65});
  const FlawSet b(70, {65, 3});
  EXPECT_EQ((a | b).members(), (std::vector<FlawId>{1, 3, 65}));
  EXPECT_EQ((a & b).members(), (std::vector<FlawId>{65}));
  EXPECT_EQ((a - b).members(), (std::vector<FlawId>{1}));
  EXPECT_TRUE((a & b).is_subset_of(a));
  EXPECT_EQ(a.to_string(), "{f2,f66}");
}

TEST(Distribution, SamplerInvertsCdf) {
  const std::vector<Arc> row{{0, 0.25}, {5, 0.5}, {9, 0.25}};
  EXPECT_EQ(sample_index(row, 0.0), 0u);
  EXPECT_EQ(sample_index(row, 0.2499), 0u);
  EXPECT_EQ(sample_index(row, 0.25), 1u);
  EXPECT_EQ(sample_index(row, 0.7499), 1u);
  EXPECT_EQ(sample_index(row, 0.9999999), 2u);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  RandomStream a(42);
  RandomStream b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
  RandomStream c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(c.below(6), 6u);
  }
}
