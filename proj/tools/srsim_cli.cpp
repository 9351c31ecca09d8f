// Command-line front end: single-instance solves with JSON output, config
// driven Monte Carlo sweeps, and a closed-form-vs-detector consistency check.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "srsim/channel_model.hpp"
#include "srsim/csr_solver.hpp"
#include "srsim/detector.hpp"
#include "srsim/experiment.hpp"
#include "srsim/model.hpp"
#include "srsim/psr_solver.hpp"
#include "srsim/rng.hpp"
#include "srsim/types.hpp"

namespace {

using nlohmann::json;
using namespace srsim;

json cxd_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

json cvec_json(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cxd_json(v[i]));
  return a;
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    default: return "infeasible";
  }
}

// Shared options for the two single-instance subcommands.
struct InstanceArgs {
  std::string config_path;
  std::uint64_t seed = 1;
  std::optional<int> n_ant;
  std::optional<int> m_elems;
  std::optional<double> p_max_dbm;
  std::optional<double> noise_dbm;
  std::optional<double> rho;
  std::optional<int> l_periods;
  std::optional<double> r_th;
  std::string scheme = "joint";
  std::uint64_t phase_seed = 0;
  bool phase_seed_set = false;
  std::string channel_file;
  int channel_index = 0;
  std::string channel_dump;
  std::string trace_path;
};

void add_instance_options(CLI::App* sc, InstanceArgs& a) {
  sc->add_option("--config", a.config_path,
                 "JSON config file (system/geometry/path_loss/fading/solver)");
  sc->add_option("--seed", a.seed, "Channel realization seed");
  sc->add_option("-n,--n-ant", a.n_ant, "Transmit antennas");
  sc->add_option("-m,--m-elems", a.m_elems, "Reflecting elements");
  sc->add_option("--p-max-dbm", a.p_max_dbm, "Power budget in dBm");
  sc->add_option("--noise-dbm", a.noise_dbm, "Noise power in dBm");
  sc->add_option("--rho", a.rho, "Active reflection fraction");
  sc->add_option("--l-periods", a.l_periods,
                 "Primary symbols per reflected symbol");
  sc->add_option("--r-th", a.r_th, "Primary rate floor (bits/s/Hz)");
  sc->add_option("--scheme", a.scheme,
                 "joint | fixed_filter | random_phases")
      ->check(CLI::IsMember({"joint", "fixed_filter", "random_phases"}));
  sc->add_option("--phase-seed", a.phase_seed,
                 "Seed for the random_phases scheme (default: --seed)");
  sc->add_option("--channel-file", a.channel_file,
                 "Replay a channel record instead of sampling");
  sc->add_option("--channel-index", a.channel_index,
                 "Record index inside --channel-file");
  sc->add_option("--channel-dump", a.channel_dump,
                 "Write the channel used to this dump file");
  sc->add_option("--trace", a.trace_path,
                 "Write the per-iteration solver trace CSV here");
}

ExperimentConfig instance_config(const InstanceArgs& a) {
  ExperimentConfig cfg;
  if (a.config_path.empty()) {
    cfg = parse_experiment_config("{}");
  } else {
    cfg = load_experiment_config(a.config_path);
  }
  if (a.n_ant) cfg.params.n_ant = *a.n_ant;
  if (a.m_elems) cfg.params.m_elems = *a.m_elems;
  if (a.p_max_dbm) cfg.params.p_max = dbm_to_watt(*a.p_max_dbm);
  if (a.noise_dbm) cfg.params.noise_power = dbm_to_watt(*a.noise_dbm);
  if (a.rho) cfg.params.rho = *a.rho;
  if (a.l_periods) cfg.params.l_periods = *a.l_periods;
  if (a.r_th) {
    cfg.params.r_th_csr = *a.r_th;
    cfg.params.r_th_psr = *a.r_th;
  }
  cfg.params.validate();
  return cfg;
}

ChannelSet instance_channel(const InstanceArgs& a, const ExperimentConfig& cfg,
                            std::uint64_t& seed_used) {
  if (!a.channel_file.empty()) {
    const auto recs = read_channel_dump_file(a.channel_file);
    if (a.channel_index < 0 ||
        a.channel_index >= static_cast<int>(recs.size()))
      throw std::runtime_error("channel index out of range: file holds " +
                               std::to_string(recs.size()) + " records");
    seed_used = recs[a.channel_index].seed;
    return recs[a.channel_index].ch;
  }
  seed_used = a.seed;
  return sample_channels(cfg.geometry, cfg.path_loss, cfg.fading,
                         cfg.params.n_ant, cfg.params.m_elems, a.seed);
}

void maybe_dump_channel(const InstanceArgs& a, const ChannelSet& ch,
                        std::uint64_t seed) {
  if (a.channel_dump.empty()) return;
  std::vector<ChannelRecord> recs(1);
  recs[0].seed = seed;
  recs[0].ch = ch;
  write_channel_dump_file(a.channel_dump, recs);
}

int run_solve_csr(const InstanceArgs& a) {
  const ExperimentConfig cfg = instance_config(a);
  std::uint64_t seed_used = 0;
  const ChannelSet ch = instance_channel(a, cfg, seed_used);
  maybe_dump_channel(a, ch, seed_used);

  const std::uint64_t ps = a.phase_seed_set ? a.phase_seed : a.seed;
  CsrSolution sol;
  if (a.scheme == "fixed_filter") {
    sol = run_baseline1_csr(ch, cfg.params, cfg.solver);
  } else if (a.scheme == "random_phases") {
    sol = run_baseline2_csr(ch, cfg.params, cfg.solver, ps);
  } else {
    sol = solve_csr(ch, cfg.params, cfg.solver);
  }

  if (!a.trace_path.empty()) {
    std::ofstream ts(a.trace_path, std::ios::binary);
    if (!ts) throw std::runtime_error("cannot open " + a.trace_path);
    ts << "outer,eta,xi,objective,inner_iters\n";
    char buf[160];
    for (const auto& row : sol.trace) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d\n", row.outer,
                    row.eta, row.xi, row.objective, row.inner_iters);
      ts << buf;
    }
  }

  json j;
  j["scenario"] = "csr";
  j["scheme"] = a.scheme;
  j["seed"] = seed_used;
  j["n_ant"] = ch.n_ant();
  j["m_elems"] = ch.m_elems();
  j["status"] = status_name(sol.status);
  j["ber"] = sol.ber;
  j["avg_rate"] = sol.avg_rate;
  j["gamma"] = sol.gamma;
  j["xi"] = sol.xi;
  j["eta_final"] = sol.eta_final;
  j["objective"] = sol.objective;
  j["outer_iters"] = sol.outer_iters;
  j["inner_iters_total"] = sol.inner_iters_total;
  j["mu1"] = cxd_json(sol.mu1);
  j["mu2"] = cxd_json(sol.mu2);
  j["gain"] = {{"direct", cxd_json(sol.gain.direct)},
               {"cascaded", cxd_json(sol.gain.cascaded)}};
  j["tx_power"] = sol.w.squaredNorm();
  j["w"] = cvec_json(sol.w);
  j["v"] = cvec_json(sol.v);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_solve_psr(const InstanceArgs& a) {
  const ExperimentConfig cfg = instance_config(a);
  std::uint64_t seed_used = 0;
  const ChannelSet ch = instance_channel(a, cfg, seed_used);
  maybe_dump_channel(a, ch, seed_used);

  const std::uint64_t ps = a.phase_seed_set ? a.phase_seed : a.seed;
  PsrSolution sol;
  if (a.scheme == "fixed_filter") {
    sol = run_baseline1_psr(ch, cfg.params, cfg.solver);
  } else if (a.scheme == "random_phases") {
    sol = run_baseline2_psr(ch, cfg.params, cfg.solver, ps);
  } else {
    sol = solve_psr(ch, cfg.params, cfg.solver);
  }

  if (!a.trace_path.empty()) {
    std::ofstream ts(a.trace_path, std::ios::binary);
    if (!ts) throw std::runtime_error("cannot open " + a.trace_path);
    ts << "probe,beta,f_obj,feasible,inner_iters\n";
    char buf[160];
    for (std::size_t i = 0; i < sol.beta_trace.size(); ++i) {
      const BetaProbe& p = sol.beta_trace[i];
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%d,%d\n", i, p.beta,
                    p.f_obj, p.feasible ? 1 : 0, p.iterations);
      ts << buf;
    }
  }

  json j;
  j["scenario"] = "psr";
  j["scheme"] = a.scheme;
  j["seed"] = seed_used;
  j["n_ant"] = ch.n_ant();
  j["m_elems"] = ch.m_elems();
  j["status"] = status_name(sol.status);
  j["ber"] = sol.ber;
  j["rate"] = sol.rate;
  j["gamma"] = sol.gamma;
  j["beta_star"] = sol.beta_star;
  j["bisection_iters"] = sol.bisection_iters;
  j["rank_one_residual"] = sol.rank_one_residual;
  j["gain"] = {{"direct", cxd_json(sol.gain.direct)},
               {"cascaded", cxd_json(sol.gain.cascaded)}};
  j["tx_power"] = sol.w.squaredNorm();
  j["w"] = cvec_json(sol.w);
  j["v"] = cvec_json(sol.v);
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct SweepArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool outage = false;
};

int run_sweep_cmd(const SweepArgs& a) {
  ExperimentConfig cfg = load_experiment_config(a.config_path);
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.workers) cfg.workers = *a.workers;

  const std::string base = a.out_dir + "/" + cfg.label;

  if (a.outage) {
    if (cfg.sweep_param != "r_th")
      throw std::runtime_error("--outage needs sweep.param == \"r_th\"");
    const auto rows = estimate_outage(cfg, cfg.sweep_values);
    std::ofstream os(base + "_outage.csv", std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + base + "_outage.csv");
    write_outage_csv(rows, cfg, os);
    std::cerr << "wrote " << base << "_outage.csv\n";
    return 0;
  }

  const ExperimentReport report = run_sweep(cfg);
  write_csv_file(report, base + ".csv");
  write_provenance_file(report, base + "_provenance.json");

  // Convergence trace of the first realization's joint commensal solve, for
  // penalty-schedule plots.
  bool has_csr = false;
  for (auto s : cfg.scenarios) has_csr = has_csr || s == Scenario::Csr;
  if (has_csr && !cfg.sweep_values.empty()) {
    const PointSetup setup = apply_sweep_value(cfg, cfg.sweep_values[0]);
    const ChannelSet ch = sample_channels(
        setup.geometry, cfg.path_loss, cfg.fading, setup.params.n_ant,
        setup.params.m_elems, realization_seed(cfg.master_seed, 0, 0));
    const CsrSolution sol = solve_csr(ch, setup.params, cfg.solver);
    std::ofstream ts(base + "_trace.csv", std::ios::binary);
    if (!ts) throw std::runtime_error("cannot open " + base + "_trace.csv");
    ts << "outer,eta,xi,objective,inner_iters\n";
    char buf[160];
    for (const auto& row : sol.trace) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d\n", row.outer,
                    row.eta, row.xi, row.objective, row.inner_iters);
      ts << buf;
    }
  }

  double total_secs = 0.0;
  for (const auto& r : report.records) total_secs += r.wall_seconds;
  std::cerr << "wrote " << base << ".csv (" << report.records.size()
            << " solves, " << total_secs << " s solver time)\n";
  return 0;
}

struct ValidateArgs {
  std::vector<double> gamma_db{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0};
  std::vector<int> l_periods{1, 5, 15};
  long trials = 200000;
  std::uint64_t seed = 7;
  std::string out;
};

int run_validate_ber(const ValidateArgs& a) {
  std::ofstream csv;
  if (!a.out.empty()) {
    csv.open(a.out, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open " + a.out);
    csv << "gamma_db,l_periods,closed_form,simulated,abs_diff,four_se,pass\n";
  }
  std::printf("%10s %4s %14s %14s %12s %12s  %s\n", "gamma_dB", "L",
              "closed_form", "simulated", "abs_diff", "4*se", "pass");
  bool all_ok = true;
  int case_idx = 0;
  for (double gdb : a.gamma_db) {
    for (int l : a.l_periods) {
      const double gamma = db_to_linear(gdb);
      const double cf = csr_ber(gamma, l);
      const cxd c{std::sqrt(gamma), 0.0};
      const DetectorResult det = simulate_csr_detector(
          c, l, a.trials, mix_seed({a.seed, static_cast<std::uint64_t>(case_idx)}));
      const double se =
          std::sqrt(std::max(cf * (1.0 - cf), 1e-12) / a.trials);
      const double diff = std::abs(det.ber - cf);
      const bool ok = diff <= 4.0 * se;
      all_ok = all_ok && ok;
      std::printf("%10.2f %4d %14.8f %14.8f %12.3e %12.3e  %s\n", gdb, l, cf,
                  det.ber, diff, 4.0 * se, ok ? "yes" : "NO");
      if (csv.is_open()) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%d\n",
                      gdb, l, cf, det.ber, diff, 4.0 * se, ok ? 1 : 0);
        csv << buf;
      }
      ++case_idx;
    }
  }
  std::printf("%s\n", all_ok ? "all cases within 4 binomial standard errors"
                             : "MISMATCH beyond 4 binomial standard errors");
  return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS symbiotic-radio solvers and experiment runner"};
  app.require_subcommand(1);

  InstanceArgs csr_args;
  auto* sc_csr = app.add_subcommand(
      "solve-csr", "Solve one commensal instance, print the solution as JSON");
  add_instance_options(sc_csr, csr_args);

  InstanceArgs psr_args;
  auto* sc_psr = app.add_subcommand(
      "solve-psr", "Solve one parasitic instance, print the solution as JSON");
  add_instance_options(sc_psr, psr_args);

  SweepArgs sweep_args;
  auto* sc_sweep = app.add_subcommand(
      "sweep", "Run a Monte Carlo sweep from a config file, write CSV");
  sc_sweep->add_option("--config", sweep_args.config_path, "JSON config file")
      ->required();
  sc_sweep->add_option("--out-dir", sweep_args.out_dir, "Output directory");
  sc_sweep->add_option("--seed", sweep_args.seed, "Override master_seed");
  sc_sweep->add_option("--workers", sweep_args.workers,
                       "Override worker count (0 = hardware)");
  sc_sweep->add_flag("--outage", sweep_args.outage,
                     "Feasibility-only outage campaign over the r_th grid");

  ValidateArgs val_args;
  auto* sc_val = app.add_subcommand(
      "validate-ber", "Compare closed-form error rates with detector runs");
  sc_val->add_option("--gamma-db", val_args.gamma_db,
                     "Cascaded SNR grid in dB");
  sc_val->add_option("--l-periods", val_args.l_periods,
                     "Spreading factors to test");
  sc_val->add_option("--trials", val_args.trials, "Trials per point");
  sc_val->add_option("--seed", val_args.seed, "Simulation seed");
  sc_val->add_option("--out", val_args.out, "Optional CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_csr->parsed()) {
      csr_args.phase_seed_set = sc_csr->count("--phase-seed") > 0;
      return run_solve_csr(csr_args);
    }
    if (sc_psr->parsed()) {
      psr_args.phase_seed_set = sc_psr->count("--phase-seed") > 0;
      return run_solve_psr(psr_args);
    }
    if (sc_sweep->parsed()) return run_sweep_cmd(sweep_args);
    if (sc_val->parsed()) return run_validate_ber(val_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
