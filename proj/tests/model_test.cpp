#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace rationing;
using rationing::testing::example1;
using rationing::testing::unit_instance;

TEST(ModelTest, Example1ParamsAccepted) {
  const auto chk = validate_params(example1());
  EXPECT_TRUE(chk.warnings.empty());
}

TEST(ModelTest, RejectsZeroRate) {
  SystemParams p = example1();
  p.lambda = 0;
  try {
    validate_params(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonPositiveRate);
  }
}

TEST(ModelTest, BadThreshold) {
  SystemParams p = example1();
  p.threshold_k = 101;
  EXPECT_THROW(validate_params(p), Error);
  p.threshold_k = 0;
  EXPECT_THROW(validate_params(p), Error);
}

TEST(ModelTest, BoundaryKEqualsN) {
  SystemParams p = unit_instance();
  p.capacity_n = p.threshold_k = 2;
  EXPECT_NO_THROW(validate_params(p));
}

TEST(ModelTest, PriorityViolationIsWarning) {
  SystemParams p = example1();
  p.c_lost1 = p.c_lost2;
  const auto chk = validate_params(p);
  ASSERT_EQ(chk.warnings.size(), 1u);
  EXPECT_EQ(chk.warnings[0], Errc::PriorityViolation);
}

TEST(ModelTest, RewardExample1) {
  const SystemParams p = example1(10);
  const auto rs = reward_structure(p, ones_policy(15));
  EXPECT_DOUBLE_EQ(rs.f_values[0], -33.0);
  EXPECT_DOUBLE_EQ(rs.f_values[1], 54.0);
  EXPECT_DOUBLE_EQ(rs.f_values[100], -13.0);
}

TEST(ModelTest, RewardUnitInstance) {
  const auto rs = reward_structure(unit_instance(), Policy{0});
  EXPECT_DOUBLE_EQ(rs.f_values[0], -10.0);
  EXPECT_DOUBLE_EQ(rs.f_values[1], 8.0);
  EXPECT_DOUBLE_EQ(rs.f_values[2], 27.0);
}

TEST(ModelTest, AffineSplitExact) {
  rationing::testing::InstanceGen gen(11);
  for (int t = 0; t < 200; ++t) {
    auto in = gen.instance(30, 30);
    const auto rs = reward_structure(in.params, in.policy);
    for (std::size_t i = 0; i < rs.f_values.size(); ++i) {
      EXPECT_EQ(rs.f_values[i], rs.b_coeffs[i] - in.params.penalty_p * rs.a_coeffs[i]);
      if (i == 0 || static_cast<int>(i) > in.params.threshold_k) EXPECT_EQ(rs.a_coeffs[i], 0.0);
    }
  }
}

TEST(ModelTest, AllZerosHasNoPenaltyDependence) {
  const auto rs = reward_structure(example1(), zeros_policy(15));
  for (double a : rs.a_coeffs) EXPECT_EQ(a, 0.0);
}

TEST(ModelTest, DifferenceSet) {
  EXPECT_TRUE(difference_set({0, 1, 1}, {0, 1, 1}).empty());
  EXPECT_EQ(difference_set({0, 0, 0}, {0, 1, 1}), (std::vector<int>{2, 3}));
  EXPECT_THROW(difference_set({0}, {0, 1}), Error);

  rationing::testing::InstanceGen gen(5);
  for (int t = 0; t < 100; ++t) {
    const Policy a = gen.policy(12), b = gen.policy(12);
    int ham = 0;
    for (std::size_t i = 0; i < a.size(); ++i) ham += a[i] != b[i];
    EXPECT_EQ(static_cast<int>(difference_set(a, b).size()), ham);
  }
}

TEST(ModelTest, AdjacentChain) {
  EXPECT_TRUE(adjacent_chain({0, 1}, {0, 1}, {}).empty());
  const auto ch = adjacent_chain({0, 0}, {1, 1}, {1, 2});
  ASSERT_EQ(ch.size(), 2u);
  EXPECT_EQ(ch[0], (Policy{1, 0}));
  EXPECT_EQ(ch[1], (Policy{1, 1}));
  EXPECT_THROW(adjacent_chain({0, 0}, {1, 1}, {1}), Error);
  EXPECT_THROW(adjacent_chain({0, 0}, {1, 1}, {1, 1}), Error);
}

TEST(ModelTest, AdjacentChainsReconstructExhaustive) {
  const int k = 6;
  for (const Policy& d : enumerate_policies(k))
    for (const Policy& c : enumerate_policies(k)) {
      std::vector<int> order = difference_set(d, c);
      std::reverse(order.begin(), order.end());
      const auto ch = adjacent_chain(d, c, order);
      Policy prev = d;
      std::vector<int> flipped;
      for (std::size_t j = 0; j < ch.size(); ++j) {
        ASSERT_EQ(difference_set(prev, ch[j]).size(), 1u);
        flipped.push_back(order[j]);
        auto s = difference_set(d, ch[j]);
        auto f = flipped;
        std::sort(f.begin(), f.end());
        ASSERT_EQ(s, f);
        prev = ch[j];
      }
      if (!ch.empty()) ASSERT_EQ(ch.back(), c);
    }
}

TEST(ModelTest, Enumeration) {
  std::vector<Policy> k1(enumerate_policies(1).begin(), enumerate_policies(1).end());
  ASSERT_EQ(k1.size(), 2u);
  EXPECT_EQ(k1[0], Policy{0});
  EXPECT_EQ(k1[1], Policy{1});
  EXPECT_EQ(enumerate_policies(3).size(), 8u);

  std::set<Policy> seen;
  Policy prev;
  for (const Policy& d : enumerate_policies(10)) {
    if (!prev.empty()) EXPECT_LT(prev, d);
    seen.insert(d);
    prev = d;
  }
  EXPECT_EQ(seen.size(), 1024u);
  EXPECT_THROW(enumerate_policies(25), Error);
}

TEST(ModelTest, PartitionsCoverRange) {
  const auto all = enumerate_policies(9);
  std::uint64_t total = 0;
  for (unsigned w = 0; w < 7; ++w) total += all.partition(w, 7).size();
  EXPECT_EQ(total, all.size());
}
