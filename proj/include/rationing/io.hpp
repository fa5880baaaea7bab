#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rationing/optimizer.hpp"
#include "rationing/sim.hpp"

namespace rationing {

using json = nlohmann::json;

// Shortest text that parses back to the same double.
inline std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// JSON has no infinities; signed infinite roots are written as strings.
inline json json_number(double x) {
  if (std::isfinite(x)) return x;
  return fmt_double(x);
}

inline void to_json(json& j, const SystemParams& p) {
  j = json{{"lambda", p.lambda},     {"mu1", p.mu1},         {"mu2", p.mu2},
           {"capacity_n", p.capacity_n}, {"threshold_k", p.threshold_k}, {"c_hold", p.c_hold},
           {"c_lost1", p.c_lost1},   {"c_lost2", p.c_lost2}, {"c_buy", p.c_buy},
           {"c_opp", p.c_opp},       {"price_r", p.price_r}, {"penalty_p", p.penalty_p}};
}

inline void from_json(const json& j, SystemParams& p) {
  p.lambda = j.at("lambda").get<double>();
  p.mu1 = j.at("mu1").get<double>();
  p.mu2 = j.at("mu2").get<double>();
  p.capacity_n = j.at("capacity_n").get<int>();
  p.threshold_k = j.at("threshold_k").get<int>();
  p.c_hold = j.at("c_hold").get<double>();
  p.c_lost1 = j.at("c_lost1").get<double>();
  p.c_lost2 = j.at("c_lost2").get<double>();
  p.c_buy = j.at("c_buy").get<double>();
  p.c_opp = j.at("c_opp").get<double>();
  p.price_r = j.at("price_r").get<double>();
  p.penalty_p = j.value("penalty_p", 0.0);
}

inline Policy policy_from_json(const json& j) {
  Policy d;
  for (const auto& x : j) {
    const int v = x.get<int>();
    if (v != 0 && v != 1) throw Error(Errc::InvalidPolicy, "policy entries must be 0 or 1");
    d.push_back(v);
  }
  return d;
}

inline json profile_json(const PenaltyProfile& pr) {
  json roots = json::array();
  for (double r : pr.roots) roots.push_back(json_number(r));
  return {{"roots", roots},
          {"p_high", json_number(pr.p_high)},
          {"p_low", json_number(pr.p_low)},
          {"sort_perm", pr.sort_perm}};
}

inline json report_json(const OptimizerReport& r) {
  json j{{"policy", r.policy},
         {"eta", r.eta},
         {"region", to_string(r.region)},
         {"n0", r.n0},
         {"sort_perm", r.sort_perm},
         {"oracle_confirmed", r.oracle_ran ? json(r.oracle_confirmed) : json(nullptr)},
         {"gate_fired", r.gate_fired},
         {"gate_overridden", r.gate_overridden},
         {"cycle_without_improvement", r.cycle_without_improvement},
         {"transformational_shape", r.transformational_shape},
         {"iterations", r.iterations},
         {"static_theta", r.static_theta},
         {"static_eta", r.static_eta},
         {"tie", r.tie}};
  if (r.oracle) j["oracle"] = {{"policy", r.oracle->policy}, {"eta", r.oracle->eta}};
  return j;
}

inline json sim_json(const SimEstimate& s) {
  return {{"eta_hat", s.eta_hat},   {"std_err", s.std_err}, {"replications", s.replications},
          {"horizon", s.horizon},   {"seed", s.seed}};
}

// Minimal CSV writer: header first, numbers in round-trip form.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& cols) { row_strings(cols); }

  template <class... Ts>
  void row(const Ts&... xs) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(xs), first = false), ...);
    os_ << '\n';
  }

 private:
  void row_strings(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
    os_ << '\n';
  }
  static std::string cell(double x) { return fmt_double(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long x) { return std::to_string(x); }
  static std::string cell(unsigned long x) { return std::to_string(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

  std::ostream& os_;
};

inline std::string policy_string(const Policy& d) {
  std::string s;
  for (int x : d) s += static_cast<char>('0' + x);
  return s;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

}  // namespace rationing
