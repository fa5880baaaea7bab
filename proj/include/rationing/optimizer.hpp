#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "rationing/static_policy.hpp"

namespace rationing {

enum class Region { HighPenalty, LowPenalty, Middle };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::HighPenalty: return "HighPenalty";
    case Region::LowPenalty: return "LowPenalty";
    case Region::Middle: return "Middle";
  }
  return "Unknown";
}

struct RegionClassification {
  Region region;
  Policy reference;
  double p_low;
  double p_high;
  int n0;  // number of roots strictly below P when Middle, else 0
};

inline int count_roots_below(const std::vector<double>& roots, double penalty) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [&](double r) { return r < penalty; }));
}

inline RegionClassification classify_region(const SystemParams& p, const Policy& d) {
  const PenaltyProfile pr = penalty_roots(p, d);
  const double pen = p.penalty_p;
  RegionClassification rc{Region::Middle, d, pr.p_low, pr.p_high, 0};
  if (pen >= pr.p_high) {
    rc.region = Region::HighPenalty;
  } else if (pr.p_low > 0.0 && pen >= 0.0 && pen <= pr.p_low) {
    rc.region = Region::LowPenalty;
  } else {
    rc.n0 = count_roots_below(pr.roots, pen);
  }
  return rc;
}

inline Policy optimal_high_penalty(const SystemParams& p) { return zeros_policy(p.threshold_k); }
inline Policy optimal_low_penalty(const SystemParams& p) { return ones_policy(p.threshold_k); }

struct TransformPlan {
  std::vector<int> sort_perm;  // 1-based
  int n0;
  Policy transformed;  // sorted coordinates: n0 zeros then ones
  Policy restored;     // original coordinates
};

// Threshold in the coordinates sorted by root; roots equal to P land on the "one" side.
inline TransformPlan transform_plan(const std::vector<double>& roots, double penalty) {
  const int k = static_cast<int>(roots.size());
  TransformPlan tp;
  tp.sort_perm.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) tp.sort_perm[static_cast<std::size_t>(i)] = i + 1;
  std::stable_sort(tp.sort_perm.begin(), tp.sort_perm.end(), [&](int x, int y) {
    return roots[static_cast<std::size_t>(x - 1)] < roots[static_cast<std::size_t>(y - 1)];
  });
  tp.n0 = count_roots_below(roots, penalty);
  tp.transformed.assign(static_cast<std::size_t>(k), 1);
  for (int j = 0; j < tp.n0; ++j) tp.transformed[static_cast<std::size_t>(j)] = 0;
  tp.restored.assign(static_cast<std::size_t>(k), 1);
  for (int j = 0; j < k; ++j)
    tp.restored[static_cast<std::size_t>(tp.sort_perm[static_cast<std::size_t>(j)] - 1)] =
        tp.transformed[static_cast<std::size_t>(j)];
  return tp;
}

inline TransformPlan transform_plan(const SystemParams& p, const Policy& d) {
  return transform_plan(penalty_roots(p, d).roots, p.penalty_p);
}

// Sorted coordinates of a policy under a permutation, and back.
inline Policy to_sorted(const Policy& d, const std::vector<int>& perm) {
  Policy out(d.size());
  for (std::size_t j = 0; j < perm.size(); ++j) out[j] = d[static_cast<std::size_t>(perm[j] - 1)];
  return out;
}

inline Policy from_sorted(const Policy& s, const std::vector<int>& perm) {
  Policy out(s.size());
  for (std::size_t j = 0; j < perm.size(); ++j) out[static_cast<std::size_t>(perm[j] - 1)] = s[j];
  return out;
}

// One improvement step: serve class 2 at i iff G(i) + b > 0 under the current policy; ties keep d_i.
inline Policy improve_policy(const SystemParams& p, const Policy& d) {
  const AffineFactors af = affine_factors(p, d);
  Policy next = d;
  for (int i = 1; i <= p.threshold_k; ++i) {
    const auto j = static_cast<std::size_t>(i - 1);
    const double v = af.at(i, p.penalty_p);
    const double tol = 1e-12 * std::max({1.0, std::abs(af.intercept[j]), std::abs(p.penalty_p * af.slope[j])});
    if (v > tol) next[j] = 1;
    else if (v < -tol) next[j] = 0;
  }
  return next;
}

struct Candidate {
  Policy policy;
  double eta;
};

namespace detail {

inline bool better(double eta, const Policy& d, const Candidate& best) {
  const double band = 1e-12 * std::max(1.0, std::abs(best.eta));
  if (eta > best.eta + band) return true;
  return std::abs(eta - best.eta) <= band && d < best.policy;
}

}  // namespace detail

inline Candidate brute_force_optimal(const SystemParams& p, int cap = kEnumerationCap, unsigned workers = 0) {
  const PolicyRange all = enumerate_policies(p.threshold_k, cap);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t min_chunk = 512;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, all.size() / min_chunk)));

  auto scan = [&p](PolicyRange r) {
    std::optional<Candidate> best;
    for (const Policy& d : r) {
      const double eta = average_profit(p, d);
      if (!best) best = Candidate{d, eta};
      else if (eta > best->eta + 1e-12 * std::max(1.0, std::abs(best->eta))) best = Candidate{d, eta};
    }
    return best;
  };

  std::vector<std::future<std::optional<Candidate>>> parts;
  for (unsigned w = 0; w < workers; ++w) parts.push_back(std::async(std::launch::async, scan, all.partition(w, workers)));
  std::optional<Candidate> best;
  for (auto& f : parts) {
    auto c = f.get();
    if (!c) continue;
    if (!best || detail::better(c->eta, c->policy, *best)) best = c;
  }
  return *best;
}

enum class OracleMode { Auto, Force, Off };

struct OptimizerOptions {
  OracleMode oracle = OracleMode::Auto;
  int auto_oracle_max_k = 16;
  int cap = kEnumerationCap;
  int max_iterations = 1000;
};

struct OptimizerReport {
  Policy policy;
  double eta = 0.0;
  Region region = Region::Middle;
  int n0 = 0;
  std::vector<int> sort_perm;
  bool gate_fired = false;
  bool gate_overridden = false;  // gate policy was improvable; fell through to iteration
  bool cycle_without_improvement = false;
  bool transformational_shape = false;  // policy equals the restored threshold of its own profile
  int iterations = 0;
  int static_theta = 0;
  double static_eta = 0.0;
  bool oracle_ran = false;
  bool oracle_confirmed = false;
  std::optional<Candidate> oracle;
  bool tie = false;  // another policy reaches the same eta within 1e-12 (oracle runs only)
};

namespace detail {

// Repeated improvement from a seed, then single-flip polishing on exact eta.
inline Candidate iterate_from(const SystemParams& p, Policy cur, int max_iter, int& iterations, bool& cycled) {
  std::set<Policy> seen;
  Candidate best{cur, average_profit(p, cur)};
  for (int it = 0; it < max_iter; ++it) {
    ++iterations;
    if (!seen.insert(cur).second) {
      cycled = true;
      break;
    }
    Policy next = improve_policy(p, cur);
    if (next == cur) break;
    cur = std::move(next);
    const double eta = average_profit(p, cur);
    if (better(eta, cur, best)) best = {cur, eta};
  }
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t j = 0; j < best.policy.size(); ++j) {
      Policy f = best.policy;
      f[j] = 1 - f[j];
      const double eta = average_profit(p, f);
      if (eta > best.eta + 1e-13 * std::max(1.0, std::abs(best.eta))) {
        best = {f, eta};
        moved = true;
      }
    }
  }
  return best;
}

}  // namespace detail

inline OptimizerReport global_optimal(const SystemParams& p, const OptimizerOptions& opt = {}) {
  validate_params(p);
  const int k = p.threshold_k;
  OptimizerReport rep;
  const StaticOptimum st = optimal_static_threshold(p);
  rep.static_theta = st.theta;
  rep.static_eta = st.eta;

  const Policy d1 = zeros_policy(k);
  const Policy d2 = ones_policy(k);
  std::optional<Candidate> result;

  const RegionClassification r1 = classify_region(p, d1);
  if (r1.region == Region::HighPenalty) {
    rep.gate_fired = true;
    rep.region = Region::HighPenalty;
    if (improve_policy(p, d1) == d1) result = Candidate{d1, average_profit(p, d1)};
    else rep.gate_overridden = true;
  }
  if (!result && !rep.gate_fired) {
    const PenaltyProfile pr2 = penalty_roots(p, d2);
    if (pr2.p_low > 0.0 && p.penalty_p >= 0.0 && p.penalty_p <= pr2.p_low) {
      rep.gate_fired = true;
      rep.region = Region::LowPenalty;
      if (improve_policy(p, d2) == d2) result = Candidate{d2, average_profit(p, d2)};
      else rep.gate_overridden = true;
    }
  }
  if (!result) {
    if (!rep.gate_fired) rep.region = Region::Middle;
    const Policy seeds[] = {d1, d2, build_static(p, st.theta).policy};
    for (const Policy& s : seeds) {
      bool cycled = false;
      Candidate c = detail::iterate_from(p, s, opt.max_iterations, rep.iterations, cycled);
      rep.cycle_without_improvement = rep.cycle_without_improvement || cycled;
      if (!result || detail::better(c.eta, c.policy, *result)) result = c;
    }
  }
  rep.policy = result->policy;
  rep.eta = result->eta;

  const PenaltyProfile own = penalty_roots(p, rep.policy);
  const TransformPlan tp = transform_plan(own.roots, p.penalty_p);
  rep.sort_perm = tp.sort_perm;
  rep.transformational_shape = tp.restored == rep.policy;
  if (rep.region == Region::Middle) rep.n0 = tp.n0;

  const bool run = opt.oracle == OracleMode::Force || (opt.oracle == OracleMode::Auto && k <= opt.auto_oracle_max_k);
  if (run) {
    if (k > opt.cap)
      throw Error(Errc::CapExceeded, "K=" + std::to_string(k) + " exceeds enumeration cap " + std::to_string(opt.cap));
    rep.oracle = brute_force_optimal(p, opt.cap);
    rep.oracle_ran = true;
    rep.oracle_confirmed = std::abs(rep.oracle->eta - rep.eta) <= 1e-9;
    if (rep.oracle_confirmed) {
      int near = 0;
      for (const Policy& d : enumerate_policies(k, opt.cap))
        if (std::abs(average_profit(p, d) - rep.eta) <= 1e-12 * std::max(1.0, std::abs(rep.eta))) ++near;
      rep.tie = near > 1;
    }
  }
  return rep;
}

struct MonotoneReport {
  bool holds;
  std::vector<double> etas;  // eta of start, then of each chain element
  int first_violation;       // index into etas, -1 if none
};

inline MonotoneReport monotone_chain_check(const SystemParams& p, const Policy& start, const std::vector<Policy>& chain,
                                           double penalty, double slack = 1e-10) {
  const SystemParams q = with_penalty(p, penalty);
  MonotoneReport rep{true, {average_profit(q, start)}, -1};
  for (const Policy& d : chain) {
    rep.etas.push_back(average_profit(q, d));
    const std::size_t n = rep.etas.size();
    if (rep.holds && rep.etas[n - 1] > rep.etas[n - 2] + slack) {
      rep.holds = false;
      rep.first_violation = static_cast<int>(n - 1);
    }
  }
  return rep;
}

struct ExhaustiveChainReport {
  std::size_t chains = 0;
  std::size_t violations = 0;
};

// Every target policy and every flip order from the start policy.
inline ExhaustiveChainReport exhaustive_monotone_chains(const SystemParams& p, const Policy& start, double penalty) {
  ExhaustiveChainReport rep;
  for (const Policy& c : enumerate_policies(p.threshold_k)) {
    std::vector<int> order = difference_set(start, c);
    if (order.empty()) continue;
    do {
      ++rep.chains;
      if (!monotone_chain_check(p, start, adjacent_chain(start, c, order), penalty).holds) ++rep.violations;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return rep;
}

}  // namespace rationing
