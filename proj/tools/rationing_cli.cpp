// rationing_cli: solve / optimize / sweep / reproduce / simulate
// Exit codes: 0 ok, 1 a requested check failed, 2 usage or parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "rationing/rationing.hpp"

using namespace rationing;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config;
  std::string out;
  std::string format = "json";
  bool oracle = false;
  std::uint64_t seed = 1;
  std::string fixtures = RATIONING_FIXTURE_DIR;
};

json load_config(const Globals& g) {
  if (g.config.empty()) throw UsageError("--config is required");
  std::ifstream in(g.config);
  if (!in) throw UsageError("cannot open config " + g.config);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed JSON in ") + g.config + ": " + e.what());
  }
}

SystemParams params_from(const json& cfg) {
  try {
    const json& src = cfg.contains("params") ? cfg.at("params") : cfg;
    SystemParams p = src.get<SystemParams>();
    for (Errc w : validate_params(p).warnings) std::cerr << "warning: " << to_string(w) << ": C21 <= C22\n";
    return p;
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad parameters: ") + e.what());
  }
}

Policy policy_arg(const json& cfg, const std::string& literal, const SystemParams& p) {
  Policy d;
  if (!literal.empty()) {
    if (literal == "zeros") return zeros_policy(p.threshold_k);
    if (literal == "ones") return ones_policy(p.threshold_k);
    for (char c : literal) {
      if (c != '0' && c != '1') throw UsageError("policy literal must be 0/1 digits, 'zeros' or 'ones'");
      d.push_back(c - '0');
    }
  } else if (cfg.contains("policy")) {
    d = policy_from_json(cfg.at("policy"));
  } else {
    throw UsageError("a policy is required (config key \"policy\" or --policy)");
  }
  check_policy(p, d);
  return d;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(g.out);
  if (!os) throw UsageError("cannot write " + g.out);
  os << text;
}

template <class Real>
json vec_json(const std::vector<Real>& v) {
  json a = json::array();
  for (const Real& x : v) a.push_back(json_number(static_cast<double>(x)));
  return a;
}

int cmd_solve(const Globals& g, const std::string& literal, double im, double xi_shift) {
  const json cfg = load_config(g);
  const SystemParams p = params_from(cfg);
  const Policy d = policy_arg(cfg, literal, p);
  const auto st = stationary_distribution(p, d);
  const auto lf = profit_linear_form(p, d);
  const auto sol = solve_poisson(p, d, cfg.value("im", im), cfg.value("xi_shift", xi_shift));
  const auto rf = realization_factors_from_potential(p, sol);
  const auto pr = penalty_roots(p, d);
  const auto f = reward_structure(p, d).f_values;

  if (g.format == "csv") {
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"i", "pi", "f", "g", "G", "root"});
    for (int i = 0; i <= p.capacity_n; ++i) {
      const auto j = static_cast<std::size_t>(i);
      const std::string gi = i >= 1 ? fmt_double(rf(i)) : "";
      const std::string ri = i >= 1 && i <= p.threshold_k ? fmt_double(pr.roots[j - 1]) : "";
      w.row(i, st.pi[j], f[j], static_cast<double>(sol.g[j]), gi, ri);
    }
    emit(g, os.str());
  } else {
    json j{{"params", p},
           {"policy", d},
           {"pi", vec_json(st.pi)},
           {"eta", sol.eta},
           {"d_coef", lf.d_coef},
           {"f_coef", lf.f_coef},
           {"g", vec_json(sol.g)},
           {"free_im", sol.free_im},
           {"free_xi", sol.free_xi},
           {"residual", sol.residual},
           {"G", vec_json(rf.g_diff)},
           {"b", rf.b},
           {"penalty_profile", profile_json(pr)}};
    emit(g, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_optimize(const Globals& g) {
  const json cfg = load_config(g);
  const SystemParams p = params_from(cfg);
  OptimizerOptions opt;
  opt.oracle = g.oracle ? OracleMode::Force : OracleMode::Auto;
  const OptimizerReport rep = global_optimal(p, opt);
  const json j = report_json(rep);
  if (g.format == "csv") {
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"policy", "eta", "region", "n0", "oracle_confirmed", "tie"});
    w.row(policy_string(rep.policy), rep.eta, to_string(rep.region), rep.n0,
          rep.oracle_ran ? (rep.oracle_confirmed ? "true" : "false") : "", rep.tie ? "true" : "false");
    emit(g, os.str());
  } else {
    emit(g, j.dump(2) + "\n");
  }
  if (rep.tie) std::cerr << "note: optimum is tied with another policy; lexicographically smallest reported\n";
  return g.oracle && !rep.oracle_confirmed ? 1 : 0;
}

int cmd_sweep(const Globals& g, std::string kind, double from, double to, int points, const std::string& literal) {
  const json cfg = load_config(g);
  SystemParams p = params_from(cfg);
  if (cfg.contains("sweep")) {
    const json& s = cfg.at("sweep");
    kind = s.value("kind", kind);
    from = s.value("from", from);
    to = s.value("to", to);
    points = s.value("points", points);
  }
  std::ostringstream os;
  CsvWriter w(os);
  json rows = json::array();
  if (kind == "theta") {
    const auto sweep = static_sweep(p);
    const auto best = optimal_static_threshold(p);
    w.header({"theta", "eta", "theta_star"});
    for (std::size_t j = 0; j < sweep.size(); ++j) {
      w.row(static_cast<int>(j) + 1, sweep[j], best.theta);
      rows.push_back({{"theta", j + 1}, {"eta", sweep[j]}});
    }
  } else if (kind == "lambda" || kind == "penalty") {
    if (points < 1) throw Error(Errc::EmptyGrid, "sweep needs at least one point");
    const Policy d = policy_arg(cfg, literal, p);
    w.header({kind, "eta"});
    for (double x : linspace(from, to, points)) {
      (kind == "lambda" ? p.lambda : p.penalty_p) = x;
      validate_params(p);
      const double eta = average_profit(p, d);
      w.row(x, eta);
      rows.push_back({{kind, x}, {"eta", eta}});
    }
  } else {
    throw UsageError("sweep kind must be theta, lambda or penalty");
  }
  emit(g, g.format == "json" ? rows.dump(2) + "\n" : os.str());
  return 0;
}

int cmd_reproduce(const Globals& g, const std::string& target) {
  const json fx = read_json_file(g.fixtures + "/" + target + ".json");
  const ReproReport rep = reproduce(target, fx);
  if (g.format == "csv") {
    emit(g, rep.csv);
  } else {
    json checks = json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"tol", c.tol}, {"pass", c.pass}});
    emit(g, json{{"target", rep.target}, {"pass", rep.pass()}, {"soft_fail", rep.soft_fail}, {"checks", checks}, {"data", rep.data}}
                    .dump(2) + "\n");
  }
  for (const auto& c : rep.checks)
    std::cerr << (c.pass ? "pass " : "FAIL ") << c.name << ": actual " << fmt_double(c.actual) << ", expected "
              << fmt_double(c.expected) << " +- " << fmt_double(c.tol) << "\n";
  return rep.pass() ? 0 : 1;
}

int cmd_simulate(const Globals& g, const std::string& literal, double horizon, int reps, bool per_rep) {
  const json cfg = load_config(g);
  const SystemParams p = params_from(cfg);
  const Policy d = policy_arg(cfg, literal, p);
  if (cfg.contains("simulation")) {
    horizon = cfg.at("simulation").value("horizon", horizon);
    reps = cfg.at("simulation").value("replications", reps);
  }
  if (reps < 2) throw UsageError("replications must be >= 2 (standard error undefined)");
  const SimEstimate est = simulate(p, d, horizon, reps, g.seed);
  const double eta = average_profit(p, d);
  const double z = est.std_err > 0 ? (est.eta_hat - eta) / est.std_err : (est.eta_hat == eta ? 0.0 : INFINITY);
  if (g.format == "csv" && per_rep) {
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"rep", "eta_hat_rep"});
    for (std::size_t r = 0; r < est.per_replication.size(); ++r) w.row(static_cast<int>(r), est.per_replication[r]);
    emit(g, os.str());
  } else if (g.format == "csv") {
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"eta_hat", "std_err", "eta", "z"});
    w.row(est.eta_hat, est.std_err, eta, z);
    emit(g, os.str());
  } else {
    json j = sim_json(est);
    j["eta"] = eta;
    j["z"] = json_number(z);
    if (per_rep) j["per_replication"] = est.per_replication;
    emit(g, j.dump(2) + "\n");
  }
  return std::abs(z) <= 3.0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stock-rationing queue analysis: potentials, penalty roots, optimal policies"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON file with the system parameters (and optional policy)");
  app.add_option("--out", g.out, "write output here instead of stdout");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--oracle", g.oracle, "force brute-force confirmation (K <= 24)");
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--fixtures", g.fixtures, "directory holding the reproduction fixtures");

  std::string literal;
  double im = 0.0, xi_shift = 0.0;
  auto* solve = app.add_subcommand("solve", "stationary law, profit, potential, realization factors, penalty roots");
  solve->add_option("--policy", literal, "decision digits d1..dK, 'zeros' or 'ones'");
  solve->add_option("--im", im, "free constant g(0) before displacement");
  solve->add_option("--xi-shift", xi_shift, "constant added to the whole potential");

  auto* optimize = app.add_subcommand("optimize", "globally optimal rationing policy");

  std::string kind = "theta";
  double from = 0.0, to = 1.0;
  int points = 11;
  auto* sweep = app.add_subcommand("sweep", "profit over a grid of theta, lambda or P");
  sweep->add_option("--kind", kind)->check(CLI::IsMember({"theta", "lambda", "penalty"}));
  sweep->add_option("--from", from);
  sweep->add_option("--to", to);
  sweep->add_option("--points", points);
  sweep->add_option("--policy", literal);

  std::string target;
  auto* repro = app.add_subcommand("reproduce", "rerun a published experiment against its fixture");
  repro->add_option("target", target)->required()->check(
      CLI::IsMember({"example1", "example2", "example3", "example4", "table2"}));

  double horizon = 1e5;
  int reps = 20;
  bool per_rep = false;
  auto* sim = app.add_subcommand("simulate", "CTMC simulation estimate and z-score against the analytic profit");
  sim->add_option("--policy", literal);
  sim->add_option("--horizon", horizon);
  sim->add_option("--replications", reps);
  sim->add_flag("--per-replication", per_rep, "emit one row per replication");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*solve) return cmd_solve(g, literal, im, xi_shift);
    if (*optimize) return cmd_optimize(g);
    if (*sweep) return cmd_sweep(g, kind, from, to, points, literal);
    if (*repro) return cmd_reproduce(g, target);
    if (*sim) return cmd_simulate(g, literal, horizon, reps, per_rep);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::CapExceeded:
      case Errc::InconsistentTermination:
      case Errc::NumericalOverflow:
      case Errc::SingularSystem:
        return 1;
      default:
        return 2;
    }
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
