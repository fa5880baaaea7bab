#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "rationing/rationing.hpp"

namespace rationing::testing {

// lambda = mu1 = mu2 = 1, N = 2, K = 1, base costs.
inline SystemParams unit_instance(double penalty = 0.0) {
  SystemParams p;
  p.lambda = p.mu1 = p.mu2 = 1.0;
  p.capacity_n = 2;
  p.threshold_k = 1;
  p.c_hold = 1;
  p.c_lost1 = 4;
  p.c_lost2 = 1;
  p.c_buy = 5;
  p.c_opp = 1;
  p.price_r = 15;
  p.penalty_p = penalty;
  return p;
}

inline SystemParams example1(double penalty = 10.0) {
  SystemParams p = unit_instance(penalty);
  p.lambda = 3;
  p.mu1 = 4;
  p.mu2 = 2;
  p.capacity_n = 100;
  p.threshold_k = 15;
  return p;
}

struct Instance {
  SystemParams params;
  Policy policy;
};

class InstanceGen {
 public:
  explicit InstanceGen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }

  SystemParams params(int max_n, int max_k, double penalty_hi = 20.0) {
    SystemParams p;
    p.capacity_n = integer(1, max_n);
    p.threshold_k = integer(1, std::min(max_k, p.capacity_n));
    p.lambda = uniform(0.5, 5);
    p.mu1 = uniform(0.5, 5);
    p.mu2 = uniform(0.5, 5);
    p.c_hold = uniform(0, 10);
    p.c_lost1 = uniform(0, 10);
    p.c_lost2 = uniform(0, 10);
    p.c_buy = uniform(0, 10);
    p.c_opp = uniform(0, 10);
    p.price_r = uniform(0, 10);
    p.penalty_p = uniform(0, penalty_hi);
    return p;
  }

  Policy policy(int k) {
    Policy d(static_cast<std::size_t>(k));
    for (int& x : d) x = integer(0, 1);
    return d;
  }

  Instance instance(int max_n, int max_k) {
    Instance in{params(max_n, max_k), {}};
    in.policy = policy(in.params.threshold_k);
    return in;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline Eigen::MatrixXd dense_generator(const SystemParams& p, const Policy& d) {
  const int m = p.capacity_n + 1;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    if (i + 1 < m) b(i, i + 1) = p.lambda;
    if (i > 0) b(i, i - 1) = p.mu1 + (i <= p.threshold_k ? d[static_cast<std::size_t>(i - 1)] : 1) * p.mu2;
    b(i, i) = -b.row(i).sum();
  }
  return b;
}

// Solve pi B = 0, pi e = 1 by replacing one balance equation with the normalization.
inline std::vector<double> dense_stationary(const SystemParams& p, const Policy& d) {
  const Eigen::MatrixXd b = dense_generator(p, d);
  const int m = static_cast<int>(b.rows());
  Eigen::MatrixXd a = b.transpose();
  a.row(m - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(m - 1) = 1.0;
  Eigen::VectorXd x = a.fullPivLu().solve(rhs);
  return {x.data(), x.data() + m};
}

// Direct summation, no shared code with the library beyond the reward definition by hand.
inline double direct_eta(const SystemParams& p, const Policy& d) {
  const auto pi = dense_stationary(p, d);
  double s = 0.0;
  const int n = p.capacity_n, k = p.threshold_k;
  for (int i = 0; i <= n; ++i) {
    double f;
    if (i == 0) {
      f = -p.c_lost1 * p.mu1 - p.c_lost2 * p.mu2 - p.c_buy * p.lambda;
    } else {
      const int di = i <= k ? d[static_cast<std::size_t>(i - 1)] : 1;
      f = p.price_r * (p.mu1 + p.mu2 * di) - p.c_hold * i;
      if (i <= k) f -= p.c_lost2 * p.mu2 * (1 - di) + p.penalty_p * p.mu2 * di;
      f -= (i < n ? p.c_buy : p.c_opp) * p.lambda;
    }
    s += pi[static_cast<std::size_t>(i)] * f;
  }
  return s;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace rationing::testing
