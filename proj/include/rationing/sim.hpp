#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <random>
#include <thread>
#include <vector>

#include "rationing/chain.hpp"

namespace rationing {

struct SimOptions {
  double warmup_fraction = 0.01;
  unsigned workers = 0;  // 0: hardware concurrency
};

struct SimEstimate {
  double eta_hat;
  double std_err;
  int replications;
  double horizon;
  std::uint64_t seed;
  std::vector<double> per_replication;
  std::vector<double> occupancy;      // pooled time fractions per state
  std::vector<double> occupancy_se;   // std error of the per-state fraction across replications
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace detail {

struct RepResult {
  double eta;
  std::vector<double> occupancy;
};

inline RepResult simulate_one(const SystemParams& p, const Policy& d, const std::vector<double>& f, double horizon,
                              double warmup, std::uint64_t stream_seed) {
  const int n = p.capacity_n;
  std::mt19937_64 rng(stream_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> up(static_cast<std::size_t>(n + 1)), total(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    up[static_cast<std::size_t>(i)] = i < n ? p.lambda : 0.0;
    total[static_cast<std::size_t>(i)] = up[static_cast<std::size_t>(i)] + (i > 0 ? down_rate(p, d, i) : 0.0);
  }
  std::vector<double> occ(static_cast<std::size_t>(n + 1), 0.0);
  int state = 0;
  double t = 0.0;
  while (t < horizon) {
    const auto s = static_cast<std::size_t>(state);
    const double q = total[s];
    const double dwell = std::exponential_distribution<double>(q)(rng);
    const double lo = std::max(t, warmup);
    const double hi = std::min(t + dwell, horizon);
    if (hi > lo) occ[s] += hi - lo;
    t += dwell;
    state += unif(rng) * q < up[s] ? 1 : -1;
  }
  const double span = horizon - warmup;
  double eta = 0.0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    occ[i] /= span;
    eta += occ[i] * f[i];
  }
  return {eta, std::move(occ)};
}

}  // namespace detail

// Replication r draws from mt19937_64 seeded with splitmix64(seed + r).
inline SimEstimate simulate(const SystemParams& p, const Policy& d, double horizon, int replications,
                            std::uint64_t seed, const SimOptions& opt = {}) {
  check_policy(p, d);
  if (!(horizon > 0.0)) throw Error(Errc::InvalidArgument, "horizon must be > 0");
  if (replications < 2) throw Error(Errc::InvalidArgument, "need at least 2 replications for a standard error");
  const auto f = reward_structure(p, d).f_values;
  const double warmup = opt.warmup_fraction * horizon;

  unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(replications));
  std::vector<detail::RepResult> reps(static_cast<std::size_t>(replications));
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int r = static_cast<int>(w); r < replications; r += static_cast<int>(workers))
        reps[static_cast<std::size_t>(r)] =
            detail::simulate_one(p, d, f, horizon, warmup, splitmix64(seed + static_cast<std::uint64_t>(r)));
    }));
  }
  for (auto& j : jobs) j.get();

  SimEstimate est{0.0, 0.0, replications, horizon, seed, {}, {}, {}};
  const double m = replications;
  for (const auto& r : reps) est.per_replication.push_back(r.eta);
  for (double x : est.per_replication) est.eta_hat += x;
  est.eta_hat /= m;
  double ss = 0.0;
  for (double x : est.per_replication) ss += (x - est.eta_hat) * (x - est.eta_hat);
  est.std_err = std::sqrt(ss / (m - 1.0) / m);

  const std::size_t states = f.size();
  est.occupancy.assign(states, 0.0);
  est.occupancy_se.assign(states, 0.0);
  for (std::size_t i = 0; i < states; ++i) {
    for (const auto& r : reps) est.occupancy[i] += r.occupancy[i];
    est.occupancy[i] /= m;
    double s2 = 0.0;
    for (const auto& r : reps) s2 += (r.occupancy[i] - est.occupancy[i]) * (r.occupancy[i] - est.occupancy[i]);
    est.occupancy_se[i] = std::sqrt(s2 / (m - 1.0) / m);
  }
  return est;
}

}  // namespace rationing
