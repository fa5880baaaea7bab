#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rationing/chain.hpp"
#include "rationing/tridiagonal.hpp"

namespace rationing {

// The potential is held in extended precision: its entries reach 1e6 on moderate instances and the
// residual of a double-rounded g would sit near 1e-9 from storage rounding alone.
using PotentialReal = long double;

struct PoissonSolution {
  std::vector<PotentialReal> g;  // g(0..N)
  double free_im = 0.0;
  double free_xi = 0.0;
  double eta = 0.0;
  double residual = 0.0;  // max |(-B g) - (f - eta e)|
};

inline double poisson_residual(const SystemParams& p, const Policy& d, const std::vector<PotentialReal>& g,
                               double eta) {
  const auto rs = reward_structure(p, d);
  const int n = p.capacity_n;
  PotentialReal r = 0;
  for (int i = 0; i <= n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    PotentialReal bg = 0;
    if (i < n) bg += static_cast<PotentialReal>(p.lambda) * (g[j + 1] - g[j]);
    if (i > 0) bg += static_cast<PotentialReal>(down_rate(p, d, i)) * (g[j - 1] - g[j]);
    const PotentialReal rhs = static_cast<PotentialReal>(rs.f_values[j]) - static_cast<PotentialReal>(eta);
    r = std::max(r, std::abs(-bg - rhs));
  }
  return static_cast<double>(r);
}

namespace detail {

// Rows lo..hi of (-B) g = rhs with g fixed to zero outside [lo, hi].
// from_bottom eliminates upward (UL order), whose pivots equal the down rates when rows sum to zero.
template <class Real = double>
std::vector<Real> solve_rows(const SystemParams& p, const Policy& d, int lo, int hi, const std::vector<Real>& rhs,
                             bool from_bottom = false) {
  const int n = p.capacity_n;
  const std::size_t m = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
  std::vector<Real> a(m), b(m), c(m), r(m);
  for (int i = lo; i <= hi; ++i) {
    const Real up = i < n ? Real(p.lambda) : Real(0);
    const Real dn = i > 0 ? Real(down_rate(p, d, i)) : Real(0);
    const auto j = from_bottom ? static_cast<std::size_t>(hi - i) : static_cast<std::size_t>(i - lo);
    a[j] = from_bottom ? -up : -dn;
    b[j] = up + dn;
    c[j] = from_bottom ? -dn : -up;
    r[j] = rhs[static_cast<std::size_t>(i)];
  }
  auto x = solve_tridiagonal(a, b, c, r);
  if (from_bottom) std::reverse(x.begin(), x.end());
  return x;
}

}  // namespace detail

// General solution g = g_sp + im * (1, v(d_1)(-Bred)^{-1} e_1) + xi_shift * e, with g_sp(0) = 0.
// The im-direction vector is the all-ones vector, so g(0) = im + xi_shift.
// The singular system is pinned at the state of largest stationary mass: both boundary
// equations stay in the solve, which keeps the sweeps stable whichever of lambda and v dominates.
inline PoissonSolution solve_poisson(const SystemParams& p, const Policy& d, double im = 0.0,
                                     double xi_shift = 0.0) {
  const auto st = stationary_distribution(p, d);
  const auto rs = reward_structure(p, d);
  const double eta = dot(st.pi, rs.f_values);
  const int n = p.capacity_n;

  std::vector<PotentialReal> rhs(rs.f_values.size());
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs[i] = static_cast<PotentialReal>(rs.f_values[i]) - static_cast<PotentialReal>(eta);

  const int pin = static_cast<int>(std::max_element(st.pi.begin(), st.pi.end()) - st.pi.begin());
  const auto below = detail::solve_rows(p, d, 0, pin - 1, rhs);
  const auto above = detail::solve_rows(p, d, pin + 1, n, rhs);

  std::vector<PotentialReal> g;
  g.reserve(static_cast<std::size_t>(n + 1));
  g.insert(g.end(), below.begin(), below.end());
  g.push_back(0);
  g.insert(g.end(), above.begin(), above.end());
  const PotentialReal g0 = g[0];
  for (auto& x : g) x = x - g0 + static_cast<PotentialReal>(im) + static_cast<PotentialReal>(xi_shift);

  PoissonSolution sol{std::move(g), im, xi_shift, eta, 0.0};
  sol.residual = poisson_residual(p, d, sol.g, eta);
  if (!std::isfinite(sol.residual)) throw Error(Errc::SingularSystem, "non-finite potential");
  return sol;
}

// (1, v(d_1)(-Bred)^{-1} e_1) with Bred the generator minus row and column 0.
inline std::vector<double> im_direction(const SystemParams& p, const Policy& d) {
  const int n = p.capacity_n;
  std::vector<PotentialReal> e1(static_cast<std::size_t>(n + 1), 0);
  e1[1] = down_rate(p, d, 1);
  const auto x = detail::solve_rows(p, d, 1, n, e1, true);
  std::vector<double> out{1.0};
  for (PotentialReal v : x) out.push_back(static_cast<double>(v));
  return out;
}

// Solves (-B + e pi) g = f densely; the solution satisfies pi g = eta.
inline PoissonSolution solve_poisson_normalized(const SystemParams& p, const Policy& d) {
  const auto st = stationary_distribution(p, d);
  const auto rs = reward_structure(p, d);
  const Generator gen = build_generator(p, d);
  const int m = p.capacity_n + 1;

  using Mat = Eigen::Matrix<PotentialReal, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<PotentialReal, Eigen::Dynamic, 1>;
  Mat a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = st.pi[static_cast<std::size_t>(j)];
  for (int i = 0; i < m; ++i) {
    a(i, i) -= gen.diag[static_cast<std::size_t>(i)];
    if (i + 1 < m) a(i, i + 1) -= gen.upper[static_cast<std::size_t>(i)];
    if (i > 0) a(i, i - 1) -= gen.lower[static_cast<std::size_t>(i - 1)];
  }
  const Vec f = Eigen::Map<const Eigen::VectorXd>(rs.f_values.data(), m).cast<PotentialReal>();
  Eigen::PartialPivLU<Mat> lu(a);
  const Vec x = lu.solve(f);
  if (!x.allFinite()) throw Error(Errc::SingularSystem, "normalized Poisson system is singular");

  PoissonSolution sol;
  sol.g.assign(x.data(), x.data() + m);
  sol.eta = dot(st.pi, rs.f_values);
  sol.free_im = static_cast<double>(sol.g[0]);
  sol.residual = poisson_residual(p, d, sol.g, sol.eta);
  return sol;
}

template <class Real = double>
struct BasicRealizationFactors {
  std::vector<Real> g_diff;  // g_diff[i-1] = G(i), i = 1..N
  Real b;                    // R + C22 - P

  const Real& operator()(int i) const { return g_diff.at(static_cast<std::size_t>(i - 1)); }
};
using RealizationFactors = BasicRealizationFactors<double>;

inline double offset_b(const SystemParams& p) { return p.price_r + p.c_lost2 - p.penalty_p; }

inline RealizationFactors realization_factors_from_potential(const SystemParams& p,
                                                             const PoissonSolution& sol) {
  RealizationFactors rf{{}, offset_b(p)};
  for (std::size_t i = 1; i < sol.g.size(); ++i) rf.g_diff.push_back(static_cast<double>(sol.g[i - 1] - sol.g[i]));
  return rf;
}

namespace detail {

template <class Real>
struct FluxResult {
  std::vector<Real> g_diff;
  Real total;      // sum pi (r - mean); zero when mean is the pi-average of r
  Real abs_total;  // sum |pi (r - mean)|
};

// lambda pi(i-1) G(i) = sum_{j<i} pi(j)(r(j) - mean) = -sum_{j>=i} pi(j)(r(j) - mean).
// Each G(i) takes the side carrying less absolute mass, so neither tail of pi amplifies rounding.
template <class Real>
FluxResult<Real> flux_factors(const Real& lam, const std::vector<Real>& pi, const std::vector<Real>& r,
                              const Real& mean) {
  using std::abs;
  const std::size_t m = pi.size();
  std::vector<Real> t(m), pre(m + 1, Real(0)), pre_abs(m + 1, Real(0));
  for (std::size_t j = 0; j < m; ++j) {
    t[j] = pi[j] * (r[j] - mean);
    pre[j + 1] = pre[j] + t[j];
    pre_abs[j + 1] = pre_abs[j] + abs(t[j]);
  }
  std::vector<Real> suf(m + 1, Real(0)), suf_abs(m + 1, Real(0));
  for (std::size_t j = m; j-- > 0;) {
    suf[j] = suf[j + 1] + t[j];
    suf_abs[j] = suf_abs[j + 1] + abs(t[j]);
  }
  FluxResult<Real> out{std::vector<Real>(m - 1), pre[m], pre_abs[m]};
  for (std::size_t i = 1; i < m; ++i) {
    const Real flux = pre_abs[i] <= suf_abs[i] ? pre[i] : -suf[i];
    out.g_diff[i - 1] = flux / (lam * pi[i - 1]);
  }
  return out;
}

}  // namespace detail

// Solves the overdetermined system lambda G(1) = f(0) - eta, lambda G(i+1) = v(d_i) G(i) + f(i) - eta,
// v(d_N) G(N) = eta - f(N), in the pi-weighted form. The terminal relation becomes
// sum_j pi(j)(f(j) - eta) = 0 and is enforced as a consistency check on eta.
template <class Real = double>
BasicRealizationFactors<Real> realization_factors_recurrence(const SystemParams& p, const Policy& d,
                                                             const Real& eta) {
  using std::abs;
  const auto st = stationary_distribution<Real>(p, d);
  const auto rs = reward_structure<Real>(p, d);
  auto flux = detail::flux_factors<Real>(Real(p.lambda), st.pi, rs.f_values, eta);
  const Real scale = abs(eta) > Real(1) ? abs(eta) : Real(1);
  if (abs(flux.total) > Real(1e-6) * scale)
    throw Error(Errc::InconsistentTermination,
                "terminal relation violated; eta is not the average profit of this policy");
  return {std::move(flux.g_diff), Real(p.price_r) + Real(p.c_lost2) - Real(p.penalty_p)};
}

// G(i) = lambda^{-i}[f(0)-eta] prod_{k=1}^{i-1} v_k + sum_{r=1}^{i-1} lambda^{r-i}[f(r)-eta] prod_{k=r+1}^{i-1} v_k,
// with v_k = v(1) = mu1 + mu2 for k > K. Weights grow like prod(v/lambda); evaluate in a wide Real
// when v exceeds lambda over long stretches.
template <class Real = double>
Real realization_factor_closed_form(const SystemParams& p, const Policy& d, const Real& eta, int i) {
  using std::pow;
  if (i < 1 || i > p.capacity_n)
    throw Error(Errc::IndexOutOfRange, "state index " + std::to_string(i) + " outside 1..N");
  const auto rs = reward_structure<Real>(p, d);
  const int k = p.threshold_k;
  const Real lam(p.lambda);
  const Real v1 = Real(p.mu1) + Real(p.mu2);

  Real total(0);
  if (i <= k) {
    Real prod(1);  // prod_{k=r+1}^{i-1} v(d_k)
    for (int r = i - 1; r >= 0; --r) {
      total += pow(lam, Real(r - i)) * (rs.f_values[static_cast<std::size_t>(r)] - eta) * prod;
      if (r >= 1) prod *= down_rate<Real>(p, d, r);
    }
    return total;
  }
  Real prod(1);  // prod_{k=r+1}^{K} v(d_k)
  for (int r = i - 1; r >= 0; --r) {
    const Real h = rs.f_values[static_cast<std::size_t>(r)] - eta;
    if (r >= k) {
      total += pow(lam, Real(r - i)) * h * pow(v1, Real(i - 1 - r));
    } else {
      total += pow(lam, Real(r - i)) * h * prod * pow(v1, Real(i - 1 - k));
    }
    if (r >= 1 && r <= k) prod *= down_rate<Real>(p, d, r);
  }
  return total;
}

template <class Real = double>
BasicRealizationFactors<Real> realization_factors_closed_form(const SystemParams& p, const Policy& d,
                                                              const Real& eta) {
  BasicRealizationFactors<Real> out{{}, Real(p.price_r) + Real(p.c_lost2) - Real(p.penalty_p)};
  for (int i = 1; i <= p.capacity_n; ++i) out.g_diff.push_back(realization_factor_closed_form<Real>(p, d, eta, i));
  return out;
}

}  // namespace rationing
