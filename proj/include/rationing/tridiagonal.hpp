#pragma once

#include <cmath>
#include <vector>

#include "rationing/error.hpp"

namespace rationing {

// Thomas elimination for A x = d. All vectors have length n; a[0] and c[n-1] are ignored.
// No pivoting: callers pass diagonally dominant systems.
template <class Real = double>
std::vector<Real> solve_tridiagonal(const std::vector<Real>& a, const std::vector<Real>& b, const std::vector<Real>& c,
                                    const std::vector<Real>& d) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || d.size() != n)
    throw Error(Errc::LengthMismatch, "tridiagonal bands must share one length");
  if (n == 0) return {};

  std::vector<Real> cs(n, Real(0)), ds(n, Real(0)), x(n, Real(0));
  Real m = b[0];
  if (m == Real(0) || !std::isfinite(m)) throw Error(Errc::SingularSystem, "zero pivot in row 0");
  cs[0] = c[0] / m;
  ds[0] = d[0] / m;
  for (std::size_t i = 1; i < n; ++i) {
    m = b[i] - a[i] * cs[i - 1];
    if (m == Real(0) || !std::isfinite(m))
      throw Error(Errc::SingularSystem, "degenerate pivot in row " + std::to_string(i));
    cs[i] = c[i] / m;
    ds[i] = (d[i] - a[i] * ds[i - 1]) / m;
  }
  x[n - 1] = ds[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = ds[i] - cs[i] * x[i + 1];
  return x;
}

}  // namespace rationing
