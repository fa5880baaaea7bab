#include <gtest/gtest.h>

#include "support.hpp"

using namespace rationing;
using namespace rationing::testing;

TEST(StaticPolicyTest, Build) {
  const SystemParams p = example1();
  EXPECT_EQ(build_static(p, 1).policy, ones_policy(15));
  EXPECT_EQ(build_static(p, 16).policy, zeros_policy(15));
  Policy last = zeros_policy(15);
  last.back() = 1;
  EXPECT_EQ(build_static(p, 15).policy, last);
  EXPECT_THROW(build_static(p, 0), Error);
  EXPECT_THROW(build_static(p, 17), Error);
}

TEST(StaticPolicyTest, ClosedFormMatchesGeneric) {
  InstanceGen gen(103);
  for (int t = 0; t < 200; ++t) {
    SystemParams p = gen.params(40, 40);
    for (int th = 1; th <= p.threshold_k + 1; ++th) {
      const auto cf = static_profit_closed_form(p, th);
      EXPECT_LE(rel_err(cf.eta, average_profit(p, build_static(p, th).policy)), 1e-9) << t << " theta=" << th;
    }
  }
}

TEST(StaticPolicyTest, SweepIsDefinitional) {
  const SystemParams p = example1(0.1);
  const auto sweep = static_sweep(p);
  ASSERT_EQ(sweep.size(), 16u);
  for (int th = 1; th <= 16; ++th)
    EXPECT_EQ(sweep[static_cast<std::size_t>(th - 1)], average_profit(p, build_static(p, th).policy));
  const auto opt = optimal_static_threshold(p);
  EXPECT_EQ(opt.eta, *std::max_element(sweep.begin(), sweep.end()));
}

TEST(StaticPolicyTest, SignConditionsAtComputedOptima) {
  InstanceGen gen(107);
  for (int t = 0; t < 100; ++t) {
    const SystemParams p = gen.params(20, 10);
    const auto rep = static_optimality_check(p);
    EXPECT_TRUE(rep.all_ok) << t;
    int defined = 0;
    for (const auto& c : rep.conditions) defined += c.defined;
    EXPECT_EQ(defined, rep.neighbor_undefined ? 2 : 4);
  }
}

TEST(StaticPolicyTest, StaticNeverBeatsDynamic) {
  InstanceGen gen(109);
  for (int t = 0; t < 100; ++t) {
    const SystemParams p = gen.params(20, 10);
    EXPECT_LE(optimal_static_threshold(p).eta, brute_force_optimal(p).eta + 1e-12);
  }
}
