#include <gtest/gtest.h>

#include "support.hpp"

using namespace rationing;
using namespace rationing::testing;

TEST(OptimizerTest, BruteForceUnit) {
  auto a = brute_force_optimal(unit_instance(0));
  EXPECT_EQ(a.policy, Policy{1});
  EXPECT_NEAR(a.eta, 5.0, 1e-13);
  auto b = brute_force_optimal(unit_instance(1.4));
  EXPECT_EQ(b.policy, Policy{0});
  EXPECT_NEAR(b.eta, 4.6, 1e-13);
  auto c = brute_force_optimal(unit_instance(10));
  EXPECT_EQ(c.policy, Policy{0});
  EXPECT_NEAR(c.eta, 4.6, 1e-13);
}

TEST(OptimizerTest, BruteForceParallelMatchesSerial) {
  InstanceGen gen(79);
  for (int t = 0; t < 10; ++t) {
    SystemParams p = gen.params(20, 12);
    p.capacity_n = 20;
    p.threshold_k = 12;
    const auto a = brute_force_optimal(p, kEnumerationCap, 1);
    const auto b = brute_force_optimal(p, kEnumerationCap, 8);
    EXPECT_EQ(a.policy, b.policy);
    EXPECT_EQ(a.eta, b.eta);
  }
}

TEST(OptimizerTest, ClassifyRegionUnit) {
  EXPECT_EQ(classify_region(unit_instance(10), Policy{0}).region, Region::HighPenalty);
  EXPECT_EQ(classify_region(unit_instance(1), Policy{0}).region, Region::LowPenalty);
}

TEST(OptimizerTest, MiddleRegionTwoRoots) {
  // search a K=2 instance whose two roots are distinct and positive
  InstanceGen gen(83);
  for (int t = 0; t < 500; ++t) {
    SystemParams p = gen.params(6, 2);
    p.threshold_k = 2;
    p.capacity_n = std::max(p.capacity_n, 2);
    const auto pr = penalty_roots(p, zeros_policy(2));
    const double lo = std::min(pr.roots[0], pr.roots[1]), hi = std::max(pr.roots[0], pr.roots[1]);
    if (!(lo > 0 && hi - lo > 1e-3)) continue;
    p.penalty_p = 0.5 * (lo + hi);
    const auto rc = classify_region(p, zeros_policy(2));
    EXPECT_EQ(rc.region, Region::Middle);
    EXPECT_EQ(rc.n0, 1);
    return;
  }
  FAIL() << "no instance with two positive distinct roots";
}

TEST(OptimizerTest, FixedPolicies) {
  EXPECT_EQ(optimal_high_penalty(example1()), zeros_policy(15));
  EXPECT_EQ(optimal_low_penalty(example1()), ones_policy(15));
}

TEST(OptimizerTest, InverseTransformRestore) {
  // P1 <= P3 <= P4 <= P7 < P <= P2 <= P5 <= P6 <= P8
  const std::vector<double> roots{1, 6, 2, 3, 7, 8, 4, 9};
  const auto tp = transform_plan(roots, 5.0);
  EXPECT_EQ(tp.sort_perm, (std::vector<int>{1, 3, 4, 7, 2, 5, 6, 8}));
  EXPECT_EQ(tp.n0, 4);
  EXPECT_EQ(tp.restored, (Policy{0, 1, 0, 0, 1, 1, 0, 1}));
  // P equal to a tied block goes in front of it
  const auto tie = transform_plan(std::vector<double>{1, 5, 3, 5}, 5.0);
  EXPECT_EQ(tie.restored, (Policy{0, 1, 0, 1}));
}

TEST(OptimizerTest, IdentityPermutationGivesThreshold) {
  const auto tp = transform_plan(std::vector<double>{1, 2, 3, 4, 5}, 3.5);
  EXPECT_EQ(tp.restored, (Policy{0, 0, 0, 1, 1}));
}

TEST(OptimizerTest, SortedRoundTrip) {
  InstanceGen gen(89);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> roots;
    for (int i = 0; i < 9; ++i) roots.push_back(gen.uniform(-5, 5));
    const auto tp = transform_plan(roots, 0.0);
    const Policy d = gen.policy(9);
    EXPECT_EQ(from_sorted(to_sorted(d, tp.sort_perm), tp.sort_perm), d);
  }
}

TEST(OptimizerTest, OracleEquivalenceRandom) {
  InstanceGen gen(97);
  int regions[3] = {0, 0, 0};
  for (int t = 0; t < 300; ++t) {
    SystemParams p = gen.params(20, 10, 30.0);
    const auto rep = global_optimal(p, {OracleMode::Force});
    ++regions[static_cast<int>(rep.region)];
    EXPECT_TRUE(rep.oracle_confirmed) << t;
    EXPECT_NEAR(rep.eta, rep.oracle->eta, 1e-9);
    EXPECT_FALSE(rep.gate_overridden) << t;
    EXPECT_GE(rep.eta, rep.static_eta - 1e-12);
    if (rep.region == Region::HighPenalty) EXPECT_EQ(rep.policy, zeros_policy(p.threshold_k));
    if (rep.region == Region::LowPenalty) EXPECT_EQ(rep.policy, ones_policy(p.threshold_k));
  }
  EXPECT_GT(regions[0], 0);
  EXPECT_GT(regions[1], 0);
  EXPECT_GT(regions[2], 0);
}

TEST(OptimizerTest, ClosedFormOptimalProfits) {
  InstanceGen gen(101);
  for (int t = 0; t < 200; ++t) {
    SystemParams p = gen.params(40, 40);
    const auto hi = closed_form_profit_high(p);
    const auto lo = closed_form_profit_low(p);
    EXPECT_LE(rel_err(hi.eta, average_profit(p, zeros_policy(p.threshold_k))), 1e-9);
    EXPECT_LE(rel_err(lo.eta, average_profit(p, ones_policy(p.threshold_k))), 1e-9);
  }
  const auto u = closed_form_profit_high(unit_instance());
  EXPECT_TRUE(u.degenerate);
  EXPECT_NEAR(u.eta, 4.6, 1e-13);
  SystemParams b = unit_instance();
  b.lambda = 2;
  EXPECT_TRUE(closed_form_profit_low(b).degenerate);
}

TEST(OptimizerTest, MonotoneChainsBothRegions) {
  SystemParams p = example1();
  p.capacity_n = 12;
  p.threshold_k = 6;
  const Policy z = zeros_policy(6), o = ones_policy(6);
  p.penalty_p = penalty_roots(p, z).p_high + 1.0;
  const auto high = exhaustive_monotone_chains(p, z, p.penalty_p);
  EXPECT_EQ(high.chains, 1956u);
  EXPECT_EQ(high.violations, 0u);
  // at lambda = 3 all-ones has a negative root, so the low region is empty; lambda = 10 opens it
  EXPECT_LT(penalty_roots(p, o).p_low, 0.0);
  p.lambda = 10;
  const double pl = penalty_roots(p, o).p_low;
  ASSERT_GT(pl, 0.0);
  p.penalty_p = 0.5 * pl;
  const auto low = exhaustive_monotone_chains(p, o, 0.5 * pl);
  EXPECT_EQ(low.chains, 1956u);
  EXPECT_EQ(low.violations, 0u);
}

TEST(OptimizerTest, MonotoneChainSingle) {
  const auto r = monotone_chain_check(unit_instance(), Policy{0}, {Policy{1}}, 10.0);
  EXPECT_TRUE(r.holds);
  ASSERT_EQ(r.etas.size(), 2u);
  const auto bad = monotone_chain_check(unit_instance(), Policy{0}, {Policy{1}}, 0.0);
  EXPECT_FALSE(bad.holds);
  EXPECT_EQ(bad.first_violation, 1);
}
