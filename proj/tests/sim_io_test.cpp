#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace rationing;
using namespace rationing::testing;

TEST(SimTest, UnitInstanceWithinThreeSe) {
  const auto est = simulate(unit_instance(), Policy{0}, 1e5, 20, 7);
  EXPECT_LE(std::abs(est.eta_hat - 4.6), 3 * est.std_err);
  EXPECT_GT(est.std_err, 0.0);
}

TEST(SimTest, ZeroRewardIsExact) {
  SystemParams p;
  p.capacity_n = p.threshold_k = 1;
  const auto est = simulate(p, Policy{1}, 100.0, 4, 1);
  EXPECT_EQ(est.eta_hat, 0.0);
  EXPECT_EQ(est.std_err, 0.0);
}

TEST(SimTest, SameSeedSameResult) {
  InstanceGen gen(113);
  auto in = gen.instance(10, 5);
  const auto a = simulate(in.params, in.policy, 2e3, 6, 42, {0.01, 3});
  const auto b = simulate(in.params, in.policy, 2e3, 6, 42, {0.01, 1});
  EXPECT_EQ(a.per_replication, b.per_replication);
  EXPECT_EQ(a.eta_hat, b.eta_hat);
}

TEST(SimTest, Validation) {
  EXPECT_THROW(simulate(unit_instance(), Policy{0}, 10.0, 1, 1), Error);
  EXPECT_THROW(simulate(unit_instance(), Policy{0}, 0.0, 5, 1), Error);
}

TEST(SimTest, OccupancyMatchesPi) {
  InstanceGen gen(127);
  int inside = 0, total = 0;
  for (int t = 0; t < 5; ++t) {
    auto in = gen.instance(8, 4);
    const auto est = simulate(in.params, in.policy, 2e4, 20, 1000 + t);
    const auto st = stationary_distribution(in.params, in.policy);
    for (std::size_t i = 0; i < st.pi.size(); ++i, ++total)
      inside += std::abs(est.occupancy[i] - st.pi[i]) <= 3 * est.occupancy_se[i] + 1e-12;
  }
  EXPECT_GE(inside, total * 95 / 100);
}

TEST(IoTest, ParamsRoundTrip) {
  InstanceGen gen(131);
  const SystemParams p = gen.params(30, 30);
  const json j = p;
  EXPECT_EQ(j.get<SystemParams>(), p);
  EXPECT_EQ(json::parse(j.dump()).get<SystemParams>(), p);
  EXPECT_TRUE(j.contains("capacity_n"));
  EXPECT_TRUE(j.contains("price_r"));
}

TEST(IoTest, PolicyJson) {
  EXPECT_EQ(policy_from_json(json::parse("[0,1,1]")), (Policy{0, 1, 1}));
  EXPECT_THROW(policy_from_json(json::parse("[0,2]")), Error);
}

TEST(IoTest, CsvRoundTripNumbers) {
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"a", "b"});
  w.row(0.1, 3);
  EXPECT_EQ(os.str(), "a,b\n0.1,3\n");
  const double x = 1.0 / 3;
  EXPECT_EQ(std::stod(fmt_double(x)), x);
}

TEST(IoTest, FixturesMatchBakedExamples) {
  const json e1 = read_json_file(std::string(RATIONING_FIXTURE_DIR) + "/example1.json");
  EXPECT_EQ(e1.at("params").get<SystemParams>(), example1(10));
  const json e2 = read_json_file(std::string(RATIONING_FIXTURE_DIR) + "/example2.json");
  EXPECT_EQ(e2.at("params").get<SystemParams>(), example1(10));
  const json t2 = read_json_file(std::string(RATIONING_FIXTURE_DIR) + "/table2.json");
  EXPECT_EQ(t2.at("rows").size(), 3u);
  for (const auto& r : t2.at("rows")) EXPECT_EQ(r.at("values").size(), 11u);
}
