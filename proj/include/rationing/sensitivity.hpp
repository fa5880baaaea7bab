#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "rationing/poisson.hpp"

namespace rationing {

// G(i) + b = intercept[i-1] - P * slope[i-1] for i = 1..N, exact in P because f and eta are affine in P.
struct AffineFactors {
  std::vector<double> intercept;
  std::vector<double> slope;

  double at(int i, double penalty) const {
    const auto j = static_cast<std::size_t>(i - 1);
    return intercept[j] - penalty * slope[j];
  }
};

inline AffineFactors affine_factors(const SystemParams& p, const Policy& d) {
  const auto st = stationary_distribution(p, d);
  const auto rs = reward_structure(p, d);
  const double dc = dot(st.pi, rs.b_coeffs);
  const double fc = dot(st.pi, rs.a_coeffs);
  const auto gb = detail::flux_factors(p.lambda, st.pi, rs.b_coeffs, dc);
  const auto ga = detail::flux_factors(p.lambda, st.pi, rs.a_coeffs, fc);
  AffineFactors out;
  for (std::size_t j = 0; j < gb.g_diff.size(); ++j) {
    out.intercept.push_back(gb.g_diff[j] + p.price_r + p.c_lost2);
    out.slope.push_back(ga.g_diff[j] + 1.0);
  }
  return out;
}

struct PenaltyProfile {
  std::vector<double> roots;  // roots[i-1] solves G(i) + b = 0
  std::vector<double> intercept;
  std::vector<double> slope;
  std::vector<bool> degenerate;
  double p_high = 0.0;
  double p_low = 0.0;
  std::vector<int> sort_perm;  // 1-based, ascending roots, ties by index
};

inline constexpr double kDegenerateSlope = 1e-12;

inline PenaltyProfile penalty_roots(const SystemParams& p, const Policy& d) {
  const AffineFactors af = affine_factors(p, d);
  const int k = p.threshold_k;
  PenaltyProfile pr;
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= k; ++i) {
    const double a = af.intercept[static_cast<std::size_t>(i - 1)];
    const double s = af.slope[static_cast<std::size_t>(i - 1)];
    pr.intercept.push_back(a);
    pr.slope.push_back(s);
    if (std::abs(s) <= kDegenerateSlope) {
      pr.degenerate.push_back(true);
      pr.roots.push_back(a >= 0.0 ? inf : -inf);
    } else {
      pr.degenerate.push_back(false);
      pr.roots.push_back(a / s);
    }
  }
  pr.p_high = std::max(0.0, *std::max_element(pr.roots.begin(), pr.roots.end()));
  pr.p_low = *std::min_element(pr.roots.begin(), pr.roots.end());
  pr.sort_perm.resize(static_cast<std::size_t>(k));
  std::iota(pr.sort_perm.begin(), pr.sort_perm.end(), 1);
  std::stable_sort(pr.sort_perm.begin(), pr.sort_perm.end(), [&](int x, int y) {
    return pr.roots[static_cast<std::size_t>(x - 1)] < pr.roots[static_cast<std::size_t>(y - 1)];
  });
  return pr;
}

enum class Sign { Negative = -1, Zero = 0, Positive = 1 };

inline const char* to_string(Sign s) {
  return s == Sign::Negative ? "negative" : s == Sign::Zero ? "zero" : "positive";
}

inline Sign sign_of(double intercept, double slope, double penalty) {
  const double v = intercept - penalty * slope;
  const double scale = std::max({1.0, std::abs(intercept), std::abs(penalty * slope)});
  if (std::abs(v) <= 1e-9 * scale) return Sign::Zero;
  return v > 0.0 ? Sign::Positive : Sign::Negative;
}

// Labels of G(i) + b at the given penalty, i = 1..K.
inline std::vector<Sign> classify_sign(const SystemParams& p, const Policy& d, double penalty) {
  const AffineFactors af = affine_factors(p, d);
  std::vector<Sign> out;
  for (int i = 1; i <= p.threshold_k; ++i)
    out.push_back(sign_of(af.intercept[static_cast<std::size_t>(i - 1)], af.slope[static_cast<std::size_t>(i - 1)],
                          penalty));
  return out;
}

// pi'[(B' - B) g + (f' - f)] with g the potential of d.
inline double difference_general(const SystemParams& p, const Policy& d, const Policy& dp) {
  check_policy(p, dp);
  const PoissonSolution sol = solve_poisson(p, d);
  const auto stp = stationary_distribution(p, dp);
  const auto f = reward_structure(p, d).f_values;
  const auto fp = reward_structure(p, dp).f_values;
  double s = stp.pi[0] * (fp[0] - f[0]);
  for (int i = 1; i <= p.capacity_n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    const double dv = down_rate(p, dp, i) - down_rate(p, d, i);
    s += stp.pi[j] * (dv * (sol.g[j - 1] - sol.g[j]) + fp[j] - f[j]);
  }
  return s;
}

inline double difference_one_position(const SystemParams& p, const Policy& d, const Policy& dp, int i) {
  check_policy(p, d);
  check_policy(p, dp);
  const auto s = difference_set(d, dp);
  if (s.size() != 1 || s[0] != i) throw Error(Errc::NotSingleFlip, "policies must differ exactly at the given position");
  const auto stp = stationary_distribution(p, dp);
  const double eta = average_profit(p, d);
  const auto rf = realization_factors_recurrence(p, d, eta);
  const auto j = static_cast<std::size_t>(i);
  return p.mu2 * stp.pi[j] * (dp[j - 1] - d[j - 1]) * (rf(i) + rf.b);
}

struct PositionEvidence {
  int position;
  double value;  // G^(c)(i) + b
  bool ok;
};

struct ClassPropertyReport {
  bool high_region = false;  // P >= P_H(d)
  bool low_region = false;   // P_L(d) > 0 and 0 <= P <= P_L(d)
  bool holds = true;
  std::vector<PositionEvidence> evidence;
  double ratio_max_error = 0.0;  // along the ascending adjacent chain d -> c
};

inline ClassPropertyReport class_property_check(const SystemParams& p, const Policy& d, const Policy& c,
                                                double penalty) {
  const SystemParams q = with_penalty(p, penalty);
  ClassPropertyReport rep;
  const auto s = difference_set(d, c);
  if (s.empty()) return rep;
  const PenaltyProfile prof = penalty_roots(q, d);
  rep.high_region = penalty >= prof.p_high;
  rep.low_region = prof.p_low > 0.0 && penalty >= 0.0 && penalty <= prof.p_low;

  const AffineFactors afc = affine_factors(q, c);
  for (int i : s) {
    const double v = afc.at(i, penalty);
    const double slack = 1e-9 * std::max({1.0, std::abs(afc.intercept[static_cast<std::size_t>(i - 1)]),
                                          std::abs(penalty * afc.slope[static_cast<std::size_t>(i - 1)])});
    bool ok = true;
    if (rep.high_region) ok = v <= slack;
    if (rep.low_region) ok = ok && v >= -slack;
    rep.evidence.push_back({i, v, ok});
    rep.holds = rep.holds && ok;
  }

  const auto chain = adjacent_chain(d, c, s);
  Policy prev = d;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const int j = s[k];
    const double before = affine_factors(q, prev).at(j, penalty);
    const double after = affine_factors(q, chain[k]).at(j, penalty);
    const double ratio = stationary_distribution(q, chain[k]).pi[static_cast<std::size_t>(j)] /
                         stationary_distribution(q, prev).pi[static_cast<std::size_t>(j)];
    const double err = std::abs(after - ratio * before) / std::max({1.0, std::abs(after), std::abs(before)});
    rep.ratio_max_error = std::max(rep.ratio_max_error, err);
    prev = chain[k];
  }
  return rep;
}

// Max of P_H and min of P_L over the whole policy set (derived report; the optimizer uses per-policy values).
struct SetWideCriticalValues {
  double p_high;
  double p_low;
};

inline SetWideCriticalValues set_wide_critical_values(const SystemParams& p) {
  SetWideCriticalValues out{0.0, std::numeric_limits<double>::infinity()};
  for (const Policy& d : enumerate_policies(p.threshold_k)) {
    const auto pr = penalty_roots(p, d);
    out.p_high = std::max(out.p_high, pr.p_high);
    out.p_low = std::min(out.p_low, pr.p_low);
  }
  return out;
}

}  // namespace rationing
