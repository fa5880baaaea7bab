#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rationing/sensitivity.hpp"

namespace rationing {

struct StaticPolicy {
  int theta;
  Policy policy;
};

// d_i = 0 for i < theta, 1 for theta <= i <= K; theta = 1 is all-ones, theta = K+1 all-zeros.
inline StaticPolicy build_static(const SystemParams& p, int theta) {
  const int k = p.threshold_k;
  if (theta < 1 || theta > k + 1)
    throw Error(Errc::ThetaOutOfRange, "theta=" + std::to_string(theta) + " outside 1..K+1");
  StaticPolicy s{theta, Policy(static_cast<std::size_t>(k), 1)};
  for (int i = 1; i < theta; ++i) s.policy[static_cast<std::size_t>(i - 1)] = 0;
  return s;
}

struct ClosedFormValue {
  double eta;
  bool degenerate;  // a geometric ratio was within 1e-9 of 1; eta came from the generic route
};

namespace detail {

// sum_{j<n} x^j and sum_{j<n} j x^j
inline double geo0(double x, int n) { return (1.0 - std::pow(x, n)) / (1.0 - x); }
inline double geo1(double x, int n) {
  return (x - n * std::pow(x, n) + (n - 1) * std::pow(x, n + 1)) / ((1.0 - x) * (1.0 - x));
}

}  // namespace detail

// Static threshold profit from geometric sums in alpha = lambda/mu1 and beta = lambda/(mu1+mu2).
//   weights: alpha^i on 1..theta-1, alpha^{theta-1} beta^{i-theta+1} on theta..N
//   rates:   gamma1 at 0, gamma2 - C1 i below theta, gamma4 - C1 i on theta..K, gamma3 - C1 i above K,
//            with C4 replacing C3 at state N.
inline ClosedFormValue static_profit_closed_form(const SystemParams& p, int theta) {
  const StaticPolicy sp = build_static(p, theta);
  const int n = p.capacity_n;
  const int k = p.threshold_k;
  const double alpha = p.lambda / p.mu1;
  const double beta = p.lambda / (p.mu1 + p.mu2);
  if ((theta >= 2 && std::abs(alpha - 1.0) < 1e-9) || std::abs(beta - 1.0) < 1e-9)
    return {average_profit(p, sp.policy), true};

  const double g1 = p.c_lost1 * p.mu1 + p.c_lost2 * p.mu2 + p.c_buy * p.lambda;
  const double g2 = p.price_r * p.mu1 - p.c_lost2 * p.mu2 - p.c_buy * p.lambda;
  const double g3 = p.price_r * (p.mu1 + p.mu2) - p.c_buy * p.lambda;
  const double g4 = g3 - p.penalty_p * p.mu2;

  double num = -g1;
  double den = 1.0;
  // sum_{i=a}^{b} w x^{i-a} (gamma - C1 i)
  auto segment = [&](double w, double x, int a, int b, double gamma) {
    if (b < a) return;
    const int len = b - a + 1;
    const double s0 = detail::geo0(x, len);
    const double s1 = detail::geo1(x, len);
    den += w * s0;
    num += w * (gamma * s0 - p.c_hold * (a * s0 + s1));
  };
  segment(alpha, alpha, 1, theta - 1, g2);
  const double w = std::pow(alpha, theta - 1) * beta;
  segment(w, beta, theta, k, g4);
  segment(w * std::pow(beta, k + 1 - theta), beta, k + 1, n, g3);
  num += w * std::pow(beta, n - theta) * (p.c_buy - p.c_opp) * p.lambda;
  return {num / den, false};
}

inline ClosedFormValue closed_form_profit_high(const SystemParams& p) {
  return static_profit_closed_form(p, p.threshold_k + 1);
}

inline ClosedFormValue closed_form_profit_low(const SystemParams& p) { return static_profit_closed_form(p, 1); }

struct StaticOptimum {
  int theta;
  double eta;
};

inline std::vector<double> static_sweep(const SystemParams& p) {
  std::vector<double> out;
  for (int t = 1; t <= p.threshold_k + 1; ++t) out.push_back(average_profit(p, build_static(p, t).policy));
  return out;
}

inline StaticOptimum optimal_static_threshold(const SystemParams& p) {
  const auto sweep = static_sweep(p);
  StaticOptimum best{1, sweep[0]};
  for (std::size_t j = 1; j < sweep.size(); ++j)
    if (sweep[j] > best.eta) best = {static_cast<int>(j) + 1, sweep[j]};
  return best;
}

struct StaticSignCondition {
  int policy_theta;  // static policy whose realization factor is used
  int position;
  bool want_nonpositive;
  bool defined;
  double value;
  bool ok;
};

struct StaticOptimalityReport {
  int theta_star;
  double eta;
  bool neighbor_undefined;
  bool all_ok;
  std::vector<StaticSignCondition> conditions;
};

// Sign conditions around the best threshold: flipping theta*-1 on, or theta* off, cannot help.
inline StaticOptimalityReport static_optimality_check(const SystemParams& p, double slack = 1e-9) {
  const StaticOptimum opt = optimal_static_threshold(p);
  const int t = opt.theta;
  const int k = p.threshold_k;
  StaticOptimalityReport rep{t, opt.eta, t == 1 || t == k + 1, true, {}};
  const StaticSignCondition table[] = {
      {t - 1, t - 1, true, t >= 2, 0.0, true},
      {t, t - 1, true, t >= 2, 0.0, true},
      {t, t, false, t <= k, 0.0, true},
      {t + 1, t, false, t <= k, 0.0, true},
  };
  for (StaticSignCondition c : table) {
    if (c.defined) {
      const AffineFactors af = affine_factors(p, build_static(p, c.policy_theta).policy);
      c.value = af.at(c.position, p.penalty_p);
      const double tol = slack * std::max({1.0, std::abs(af.intercept[static_cast<std::size_t>(c.position - 1)]),
                                           std::abs(p.penalty_p * af.slope[static_cast<std::size_t>(c.position - 1)])});
      c.ok = c.want_nonpositive ? c.value <= tol : c.value >= -tol;
      rep.all_ok = rep.all_ok && c.ok;
    }
    rep.conditions.push_back(c);
  }
  return rep;
}

}  // namespace rationing
