#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rationing/model.hpp"

namespace rationing {

namespace detail {
template <class Real>
bool finite(const Real& x) {
  using std::isfinite;
  return isfinite(x);
}
}  // namespace detail

// Tridiagonal generator: lower[j] is B(j+1, j), upper[j] is B(j, j+1).
struct Generator {
  std::vector<double> lower;  // v(d_1) .. v(d_N)
  std::vector<double> diag;   // size N+1
  std::vector<double> upper;  // lambda, size N
};

inline Generator build_generator(const SystemParams& p, const Policy& d) {
  check_policy(p, d);
  const int n = p.capacity_n;
  Generator gen;
  gen.lower.resize(static_cast<std::size_t>(n));
  gen.upper.assign(static_cast<std::size_t>(n), p.lambda);
  gen.diag.assign(static_cast<std::size_t>(n + 1), 0.0);
  for (int i = 1; i <= n; ++i) gen.lower[static_cast<std::size_t>(i - 1)] = down_rate(p, d, i);
  for (int i = 0; i <= n; ++i) {
    double out = 0.0;
    if (i < n) out += p.lambda;
    if (i > 0) out += gen.lower[static_cast<std::size_t>(i - 1)];
    gen.diag[static_cast<std::size_t>(i)] = -out;
  }
  return gen;
}

// y = B x
inline std::vector<double> apply_generator(const Generator& gen, const std::vector<double>& x) {
  const std::size_t m = gen.diag.size();
  std::vector<double> y(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double s = gen.diag[i] * x[i];
    if (i + 1 < m) s += gen.upper[i] * x[i + 1];
    if (i > 0) s += gen.lower[i - 1] * x[i - 1];
    y[i] = s;
  }
  return y;
}

// y = x B
inline std::vector<double> apply_generator_left(const Generator& gen, const std::vector<double>& x) {
  const std::size_t m = gen.diag.size();
  std::vector<double> y(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double s = x[j] * gen.diag[j];
    if (j > 0) s += x[j - 1] * gen.upper[j - 1];
    if (j + 1 < m) s += x[j + 1] * gen.lower[j];
    y[j] = s;
  }
  return y;
}

template <class Real = double>
struct StationaryDistribution {
  std::vector<Real> pi;
  std::vector<Real> xi;  // xi_0 = 1
  Real h;
};

template <class Real = double>
StationaryDistribution<Real> stationary_distribution(const SystemParams& p, const Policy& d) {
  check_policy(p, d);
  const int n = p.capacity_n;
  const Real lam(p.lambda);
  StationaryDistribution<Real> s;
  s.xi.resize(static_cast<std::size_t>(n + 1));
  s.xi[0] = Real(1);
  for (int i = 1; i <= n; ++i)
    s.xi[static_cast<std::size_t>(i)] = s.xi[static_cast<std::size_t>(i - 1)] * lam / down_rate<Real>(p, d, i);
  s.h = Real(0);
  for (const Real& x : s.xi) s.h += x;
  s.pi.resize(s.xi.size());
  if (detail::finite(s.h) && s.h > Real(0)) {
    for (std::size_t i = 0; i < s.xi.size(); ++i) s.pi[i] = s.xi[i] / s.h;
    return s;
  }
  // xi / h overflow: normalize in log space; xi and h stay as computed (inf)
  using std::exp;
  using std::log;
  std::vector<Real> lw(s.xi.size());
  lw[0] = Real(0);
  for (int i = 1; i <= n; ++i)
    lw[static_cast<std::size_t>(i)] = lw[static_cast<std::size_t>(i - 1)] + log(lam / down_rate<Real>(p, d, i));
  const Real top = *std::max_element(lw.begin(), lw.end());
  Real z(0);
  for (std::size_t i = 0; i < lw.size(); ++i) z += (s.pi[i] = exp(lw[i] - top));
  for (Real& x : s.pi) x /= z;
  if (!detail::finite(z)) throw Error(Errc::NumericalOverflow, "stationary weights are not finite");
  return s;
}

template <class Real = double>
Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class Real = double>
Real average_profit(const SystemParams& p, const Policy& d) {
  const auto st = stationary_distribution<Real>(p, d);
  const auto rs = reward_structure<Real>(p, d);
  const Real eta = dot(st.pi, rs.f_values);
  if (!detail::finite(eta)) throw Error(Errc::NumericalOverflow, "average profit is not finite");
  return eta;
}

// eta(P) = D - P F
template <class Real = double>
struct ProfitLinearForm {
  Real d_coef;
  Real f_coef;
  Real eta(double penalty) const { return d_coef - Real(penalty) * f_coef; }
};

template <class Real = double>
ProfitLinearForm<Real> profit_linear_form(const SystemParams& p, const Policy& d) {
  const auto st = stationary_distribution<Real>(p, d);
  const auto rs = reward_structure<Real>(p, d);
  return {dot(st.pi, rs.b_coeffs), dot(st.pi, rs.a_coeffs)};
}

}  // namespace rationing
