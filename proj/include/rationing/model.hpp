#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "rationing/error.hpp"

namespace rationing {

// Rates are per unit time; monetary fields are per unit (or per unit time for C1, C21, C22).
struct SystemParams {
  double lambda = 1.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  int capacity_n = 1;
  int threshold_k = 1;
  double c_hold = 0.0;
  double c_lost1 = 0.0;
  double c_lost2 = 0.0;
  double c_buy = 0.0;
  double c_opp = 0.0;
  double price_r = 0.0;
  double penalty_p = 0.0;

  bool operator==(const SystemParams&) const = default;
};

// Decisions d_1..d_K. State 0 always rejects class 2, states K+1..N always serve.
using Policy = std::vector<int>;

struct ParamCheck {
  SystemParams params;
  std::vector<Errc> warnings;  // PriorityViolation only
};

inline ParamCheck validate_params(const SystemParams& raw) {
  if (!(raw.lambda > 0.0) || !(raw.mu1 > 0.0) || !(raw.mu2 > 0.0))
    throw Error(Errc::NonPositiveRate, "lambda, mu1 and mu2 must be > 0");
  if (raw.threshold_k < 1 || raw.threshold_k > raw.capacity_n)
    throw Error(Errc::BadThreshold, "need 1 <= K <= N, got K=" + std::to_string(raw.threshold_k) +
                                        " N=" + std::to_string(raw.capacity_n));
  const double costs[] = {raw.c_hold, raw.c_lost1, raw.c_lost2, raw.c_buy,
                          raw.c_opp,  raw.price_r, raw.penalty_p};
  for (double c : costs)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw Error(Errc::InvalidArgument, "costs, price and penalty must be finite and >= 0");
  ParamCheck out{raw, {}};
  if (!(raw.c_lost1 > raw.c_lost2)) out.warnings.push_back(Errc::PriorityViolation);
  return out;
}

inline SystemParams with_penalty(SystemParams p, double penalty) {
  p.penalty_p = penalty;
  return p;
}

inline Policy zeros_policy(int k) { return Policy(static_cast<std::size_t>(k), 0); }
inline Policy ones_policy(int k) { return Policy(static_cast<std::size_t>(k), 1); }

inline void check_policy(const SystemParams& p, const Policy& d) {
  if (static_cast<int>(d.size()) != p.threshold_k)
    throw Error(Errc::LengthMismatch, "policy length " + std::to_string(d.size()) +
                                          " != K=" + std::to_string(p.threshold_k));
  for (int x : d)
    if (x != 0 && x != 1) throw Error(Errc::InvalidPolicy, "decisions must be 0 or 1");
}

// Decision at state i over the full range 0..N.
inline int decision_at(const SystemParams& p, const Policy& d, int i) {
  if (i <= 0) return 0;
  if (i > p.threshold_k) return 1;
  return d[static_cast<std::size_t>(i - 1)];
}

// v(d_i) = mu1 + d_i mu2, the total down rate out of state i >= 1.
template <class Real = double>
Real down_rate(const SystemParams& p, const Policy& d, int i) {
  return Real(p.mu1) + Real(decision_at(p, d, i)) * Real(p.mu2);
}

template <class Real = double>
struct RewardStructure {
  std::vector<Real> a_coeffs;  // coefficient of -P
  std::vector<Real> b_coeffs;
  std::vector<Real> f_values;
};

template <class Real = double>
RewardStructure<Real> reward_structure(const SystemParams& p, const Policy& d) {
  check_policy(p, d);
  const int n = p.capacity_n;
  const int k = p.threshold_k;
  const Real lam(p.lambda), mu1(p.mu1), mu2(p.mu2);
  const Real c1(p.c_hold), c21(p.c_lost1), c22(p.c_lost2), c3(p.c_buy), c4(p.c_opp);
  const Real r(p.price_r), pen(p.penalty_p);

  RewardStructure<Real> rs;
  rs.a_coeffs.assign(static_cast<std::size_t>(n + 1), Real(0));
  rs.b_coeffs.assign(static_cast<std::size_t>(n + 1), Real(0));
  rs.b_coeffs[0] = -c21 * mu1 - c22 * mu2 - c3 * lam;
  for (int i = 1; i <= n; ++i) {
    const Real di(decision_at(p, d, i));
    Real b = r * (mu1 + mu2 * di) - c1 * Real(i);
    if (i <= k) b -= c22 * mu2 * (Real(1) - di);
    b -= (i < n ? c3 : c4) * lam;
    rs.b_coeffs[static_cast<std::size_t>(i)] = b;
    if (i <= k) rs.a_coeffs[static_cast<std::size_t>(i)] = mu2 * di;
  }
  rs.f_values.resize(rs.b_coeffs.size());
  for (std::size_t i = 0; i < rs.f_values.size(); ++i)
    rs.f_values[i] = rs.b_coeffs[i] - pen * rs.a_coeffs[i];
  return rs;
}

// Positions (1-based) where the two policies disagree, ascending.
inline std::vector<int> difference_set(const Policy& d, const Policy& c) {
  if (d.size() != c.size()) throw Error(Errc::LengthMismatch, "policies differ in length");
  std::vector<int> s;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != c[i]) s.push_back(static_cast<int>(i) + 1);
  return s;
}

// Flip the positions of S(d,c) one at a time in the given order; the last element is c.
inline std::vector<Policy> adjacent_chain(const Policy& d, const Policy& c,
                                          const std::vector<int>& order) {
  std::vector<int> s = difference_set(d, c);
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != s) throw Error(Errc::InvalidOrder, "order is not a permutation of S(d,c)");
  std::vector<Policy> chain;
  chain.reserve(order.size());
  Policy cur = d;
  for (int j : order) {
    cur[static_cast<std::size_t>(j - 1)] = c[static_cast<std::size_t>(j - 1)];
    chain.push_back(cur);
  }
  return chain;
}

inline constexpr int kEnumerationCap = 24;

// Lexicographic rank: d_1 is the most significant bit.
inline Policy policy_at(int k, std::uint64_t index) {
  Policy d(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) d[static_cast<std::size_t>(i)] = static_cast<int>((index >> (k - 1 - i)) & 1u);
  return d;
}

class PolicyRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Policy;
    using difference_type = std::ptrdiff_t;
    using pointer = const Policy*;
    using reference = Policy;

    iterator(int k, std::uint64_t idx) : k_(k), idx_(idx) {}
    Policy operator*() const { return policy_at(k_, idx_); }
    iterator& operator++() {
      ++idx_;
      return *this;
    }
    iterator operator++(int) {
      iterator t = *this;
      ++idx_;
      return t;
    }
    bool operator==(const iterator& o) const { return idx_ == o.idx_; }
    bool operator!=(const iterator& o) const { return idx_ != o.idx_; }

   private:
    int k_;
    std::uint64_t idx_;
  };

  PolicyRange(int k, std::uint64_t first, std::uint64_t last) : k_(k), first_(first), last_(last) {}
  iterator begin() const { return {k_, first_}; }
  iterator end() const { return {k_, last_}; }
  std::uint64_t size() const { return last_ - first_; }

  // Contiguous slice [part*size/parts, (part+1)*size/parts) for parallel consumers.
  PolicyRange partition(unsigned part, unsigned parts) const {
    const std::uint64_t n = size();
    return {k_, first_ + n * part / parts, first_ + n * (part + 1) / parts};
  }

 private:
  int k_;
  std::uint64_t first_;
  std::uint64_t last_;
};

inline PolicyRange enumerate_policies(int k, int cap = kEnumerationCap) {
  if (k < 0) throw Error(Errc::InvalidArgument, "K must be >= 0");
  if (k > cap)
    throw Error(Errc::CapExceeded, "K=" + std::to_string(k) + " exceeds enumeration cap " +
                                       std::to_string(cap));
  return {k, 0, std::uint64_t{1} << k};
}

}  // namespace rationing
