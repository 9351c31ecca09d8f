#include "srsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "detail.hpp"
#include "srsim/model.hpp"
#include "srsim/rng.hpp"

namespace srsim {

using nlohmann::json;

namespace {
constexpr std::uint64_t kPhaseTag = 0x70686173ULL;  // stream tag for phases

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string to_string(Scenario s) {
  return s == Scenario::Csr ? "csr" : "psr";
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Joint: return "joint";
    case Scheme::FixedFilter: return "fixed_filter";
    default: return "random_phases";
  }
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "csr") return Scenario::Csr;
  if (s == "psr") return Scenario::Psr;
  throw std::invalid_argument("unknown scenario: " + s);
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "joint") return Scheme::Joint;
  if (s == "fixed_filter") return Scheme::FixedFilter;
  if (s == "random_phases") return Scheme::RandomPhases;
  throw std::invalid_argument("unknown scheme: " + s);
}

void ExperimentConfig::validate() const {
  params.validate();
  solver.validate();
  if (sweep_param != "p_max_dbm" && sweep_param != "m_elems" &&
      sweep_param != "irs_x" && sweep_param != "r_th")
    throw std::invalid_argument("unknown sweep_param: " + sweep_param);
  if (sweep_param == "m_elems")
    for (double v : sweep_values)
      if (v < 0.0 || v != std::floor(v))
        throw std::invalid_argument("m_elems sweep values must be integers >= 0");
  if (n_realizations < 1)
    throw std::invalid_argument("n_realizations must be >= 1");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
  if (scenarios.empty() || schemes.empty())
    throw std::invalid_argument("scenarios and schemes must be non-empty");
}

namespace {

void parse_solver_overrides(const json& j, SolverConfig& s) {
  auto get_d = [&](const char* k, double& field) {
    if (j.contains(k)) field = j.at(k).get<double>();
  };
  auto get_i = [&](const char* k, int& field) {
    if (j.contains(k)) field = j.at(k).get<int>();
  };
  get_d("eta0", s.eta0);
  get_d("penalty_scale", s.penalty_scale);
  get_i("max_outer", s.max_outer);
  get_i("max_inner", s.max_inner);
  get_d("eps_inner", s.eps_inner);
  get_d("eps_violation", s.eps_violation);
  get_d("lambda_lb", s.lambda_lb);
  get_d("dual_tol", s.dual_tol);
  get_d("power_tol_rel", s.power_tol_rel);
  get_i("dual_max_iter", s.dual_max_iter);
  get_d("rank_tol_rel", s.rank_tol_rel);
  get_d("sca_tol", s.sca_tol);
  get_i("sca_max_newton", s.sca_max_newton);
  get_d("beta_lb", s.beta_lb);
  get_d("beta_tol", s.beta_tol);
  get_d("beta_tol_rel", s.beta_tol_rel);
  get_i("beta_max_iter", s.beta_max_iter);
  get_d("tau1_ub", s.tau1_ub);
  get_d("eta_bar0", s.eta_bar0);
  get_i("dc_max_outer", s.dc_max_outer);
  get_i("dc_max_iter", s.dc_max_iter);
  get_d("dc_rank_tol", s.dc_rank_tol);
  get_d("dc_obj_tol", s.dc_obj_tol);
  get_i("sdp_max_iter", s.sdp_max_iter);
  get_d("sdp_tol", s.sdp_tol);
  get_i("probe_max_iter", s.probe_max_iter);
}

Vec3 parse_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("position must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = json::parse(json_text);
  ExperimentConfig cfg;
  if (j.contains("system")) {
    const json& s = j.at("system");
    cfg.params.n_ant = s.value("n_ant", 10);
    cfg.params.m_elems = s.value("m_elems", 32);
    cfg.params.p_max = dbm_to_watt(s.value("p_max_dbm", 40.0));
    cfg.params.noise_power = dbm_to_watt(s.value("noise_dbm", -80.0));
    cfg.params.rho = s.value("rho", 0.5);
    cfg.params.l_periods = s.value("l_periods", 15);
    cfg.params.r_th_csr = s.value("r_th_csr", 1.0);
    cfg.params.r_th_psr = s.value("r_th_psr", 1.0);
  } else {
    cfg.params.n_ant = 10;
    cfg.params.m_elems = 32;
    cfg.params.p_max = dbm_to_watt(40.0);
    cfg.params.noise_power = dbm_to_watt(-80.0);
    cfg.params.l_periods = 15;
    cfg.params.r_th_csr = 1.0;
    cfg.params.r_th_psr = 1.0;
  }
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    if (g.contains("bs")) cfg.geometry.bs = parse_vec3(g.at("bs"));
    if (g.contains("irs")) cfg.geometry.irs = parse_vec3(g.at("irs"));
    if (g.contains("ir")) cfg.geometry.ir = parse_vec3(g.at("ir"));
  }
  if (j.contains("path_loss")) {
    const json& p = j.at("path_loss");
    cfg.path_loss.l0_db = p.value("l0_db", -30.0);
    cfg.path_loss.d0 = p.value("d0", 1.0);
    cfg.path_loss.alpha_g = p.value("alpha_g", 2.6);
    cfg.path_loss.alpha_r = p.value("alpha_r", 2.6);
    cfg.path_loss.alpha_d = p.value("alpha_d", 3.6);
  }
  if (j.contains("fading")) {
    const json& f = j.at("fading");
    cfg.fading.k_g_db = f.value("k_g_db", 3.0);
    cfg.fading.k_r_db = f.value("k_r_db", 3.0);
    cfg.fading.m_x = f.value("m_x", 0);
  }
  if (j.contains("solver")) parse_solver_overrides(j.at("solver"), cfg.solver);
  if (j.contains("scenarios")) {
    cfg.scenarios.clear();
    for (const auto& s : j.at("scenarios"))
      cfg.scenarios.push_back(scenario_from_string(s.get<std::string>()));
  }
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : j.at("schemes"))
      cfg.schemes.push_back(scheme_from_string(s.get<std::string>()));
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    cfg.sweep_param = s.value("param", std::string("p_max_dbm"));
    cfg.sweep_values.clear();
    for (const auto& v : s.at("values"))
      cfg.sweep_values.push_back(v.get<double>());
  }
  cfg.n_realizations = j.value("n_realizations", 200);
  cfg.master_seed = j.value("master_seed", std::uint64_t{1});
  cfg.workers = j.value("workers", 0);
  cfg.label = j.value("label", std::string("experiment"));
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string canonical_config_json(const ExperimentConfig& cfg) {
  json j;
  j["system"] = {{"n_ant", cfg.params.n_ant},
                 {"m_elems", cfg.params.m_elems},
                 {"p_max_w", cfg.params.p_max},
                 {"noise_w", cfg.params.noise_power},
                 {"rho", cfg.params.rho},
                 {"l_periods", cfg.params.l_periods},
                 {"r_th_csr", cfg.params.r_th_csr},
                 {"r_th_psr", cfg.params.r_th_psr}};
  j["geometry"] = {
      {"bs", {cfg.geometry.bs.x, cfg.geometry.bs.y, cfg.geometry.bs.z}},
      {"irs", {cfg.geometry.irs.x, cfg.geometry.irs.y, cfg.geometry.irs.z}},
      {"ir", {cfg.geometry.ir.x, cfg.geometry.ir.y, cfg.geometry.ir.z}}};
  j["path_loss"] = {{"l0_db", cfg.path_loss.l0_db},
                    {"d0", cfg.path_loss.d0},
                    {"alpha_g", cfg.path_loss.alpha_g},
                    {"alpha_r", cfg.path_loss.alpha_r},
                    {"alpha_d", cfg.path_loss.alpha_d}};
  j["fading"] = {{"k_g_db", cfg.fading.k_g_db},
                 {"k_r_db", cfg.fading.k_r_db},
                 {"m_x", cfg.fading.m_x}};
  j["solver"] = {{"eta0", cfg.solver.eta0},
                 {"penalty_scale", cfg.solver.penalty_scale},
                 {"max_outer", cfg.solver.max_outer},
                 {"max_inner", cfg.solver.max_inner},
                 {"eps_inner", cfg.solver.eps_inner},
                 {"eps_violation", cfg.solver.eps_violation},
                 {"lambda_lb", cfg.solver.lambda_lb},
                 {"dual_tol", cfg.solver.dual_tol},
                 {"power_tol_rel", cfg.solver.power_tol_rel},
                 {"dual_max_iter", cfg.solver.dual_max_iter},
                 {"rank_tol_rel", cfg.solver.rank_tol_rel},
                 {"sca_tol", cfg.solver.sca_tol},
                 {"sca_max_newton", cfg.solver.sca_max_newton},
                 {"beta_lb", cfg.solver.beta_lb},
                 {"beta_tol", cfg.solver.beta_tol},
                 {"beta_tol_rel", cfg.solver.beta_tol_rel},
                 {"beta_max_iter", cfg.solver.beta_max_iter},
                 {"tau1_ub", cfg.solver.tau1_ub},
                 {"eta_bar0", cfg.solver.eta_bar0},
                 {"dc_max_outer", cfg.solver.dc_max_outer},
                 {"dc_max_iter", cfg.solver.dc_max_iter},
                 {"dc_rank_tol", cfg.solver.dc_rank_tol},
                 {"dc_obj_tol", cfg.solver.dc_obj_tol},
                 {"sdp_max_iter", cfg.solver.sdp_max_iter},
                 {"sdp_tol", cfg.solver.sdp_tol},
                 {"probe_max_iter", cfg.solver.probe_max_iter}};
  json scen = json::array();
  for (auto s : cfg.scenarios) scen.push_back(to_string(s));
  j["scenarios"] = scen;
  json sch = json::array();
  for (auto s : cfg.schemes) sch.push_back(to_string(s));
  j["schemes"] = sch;
  j["sweep"] = {{"param", cfg.sweep_param}, {"values", cfg.sweep_values}};
  j["n_realizations"] = cfg.n_realizations;
  j["master_seed"] = cfg.master_seed;
  j["label"] = cfg.label;
  return j.dump(2);
}

PointSetup apply_sweep_value(const ExperimentConfig& cfg, double value) {
  PointSetup out{cfg.params, cfg.geometry};
  if (cfg.sweep_param == "p_max_dbm") {
    out.params.p_max = dbm_to_watt(value);
  } else if (cfg.sweep_param == "m_elems") {
    out.params.m_elems = static_cast<int>(std::llround(value));
  } else if (cfg.sweep_param == "irs_x") {
    out.geometry.irs.x = value;
  } else if (cfg.sweep_param == "r_th") {
    out.params.r_th_csr = value;
    out.params.r_th_psr = value;
  }
  return out;
}

std::uint64_t realization_seed(std::uint64_t master, int point,
                               int realization) {
  return mix_seed({master, static_cast<std::uint64_t>(point),
                   static_cast<std::uint64_t>(realization)});
}

PhaseShifts random_phases(int m_elems, std::uint64_t seed) {
  Rng rng(seed);
  PhaseShifts v(m_elems);
  for (int m = 0; m < m_elems; ++m)
    v[m] = std::polar(1.0, 6.283185307179586476925286766559 * rng.uniform());
  return v;
}

CsrSolution run_baseline1_csr(const ChannelSet& ch, const SystemParams& p,
                              const SolverConfig& cfg) {
  CsrOptions o;
  o.freeze_w = true;
  o.w_init = detail::mrt_direct(ch, p.p_max);
  return solve_csr(ch, p, cfg, o);
}

CsrSolution run_baseline2_csr(const ChannelSet& ch, const SystemParams& p,
                              const SolverConfig& cfg,
                              std::uint64_t phase_seed) {
  CsrOptions o;
  o.freeze_v = true;
  o.v_init = random_phases(ch.m_elems(), phase_seed);
  return solve_csr(ch, p, cfg, o);
}

PsrSolution run_baseline1_psr(const ChannelSet& ch, const SystemParams& p,
                              const SolverConfig& cfg) {
  PsrOptions o;
  o.freeze_w = true;
  o.w_init = detail::mrt_direct(ch, p.p_max);
  return solve_psr(ch, p, cfg, o);
}

PsrSolution run_baseline2_psr(const ChannelSet& ch, const SystemParams& p,
                              const SolverConfig& cfg,
                              std::uint64_t phase_seed) {
  PsrOptions o;
  o.freeze_v = true;
  o.v_init = random_phases(ch.m_elems(), phase_seed);
  return solve_psr(ch, p, cfg, o);
}

namespace {

SolveRecord run_single(const ChannelSet& ch, const SystemParams& params,
                       const SolverConfig& solver, Scenario scenario,
                       Scheme scheme, std::uint64_t phase_seed) {
  SolveRecord rec;
  rec.scenario = scenario;
  rec.scheme = scheme;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (scenario == Scenario::Csr) {
      CsrSolution s;
      switch (scheme) {
        case Scheme::Joint: s = solve_csr(ch, params, solver); break;
        case Scheme::FixedFilter: s = run_baseline1_csr(ch, params, solver); break;
        case Scheme::RandomPhases:
          s = run_baseline2_csr(ch, params, solver, phase_seed);
          break;
      }
      rec.feasible = s.status != SolveStatus::Infeasible;
      rec.converged = s.status == SolveStatus::Converged;
      rec.ber = s.ber;
      rec.rate = s.avg_rate;
      rec.gamma = s.gamma;
      rec.iters = s.outer_iters;
    } else {
      PsrSolution s;
      switch (scheme) {
        case Scheme::Joint: s = solve_psr(ch, params, solver); break;
        case Scheme::FixedFilter: s = run_baseline1_psr(ch, params, solver); break;
        case Scheme::RandomPhases:
          s = run_baseline2_psr(ch, params, solver, phase_seed);
          break;
      }
      rec.feasible = s.status != SolveStatus::Infeasible;
      rec.converged = s.status == SolveStatus::Converged;
      rec.ber = s.ber;
      rec.rate = s.rate;
      rec.gamma = s.gamma;
      rec.iters = s.bisection_iters;
    }
  } catch (const std::exception&) {
    rec.ok = false;
    rec.feasible = false;
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

}  // namespace

ExperimentReport run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sweep_values.empty())
    throw std::invalid_argument("run_sweep needs at least one sweep value");
  ExperimentReport report;
  report.config = cfg;

  const int n_points = static_cast<int>(cfg.sweep_values.size());
  const int n_real = cfg.n_realizations;
  const int n_scen = static_cast<int>(cfg.scenarios.size());
  const int n_schem = static_cast<int>(cfg.schemes.size());
  report.records.resize(static_cast<std::size_t>(n_points) * n_real * n_scen *
                        n_schem);

  const int n_jobs = n_points * n_real;
  std::atomic<int> next_job{0};
  auto worker = [&]() {
    for (;;) {
      const int job = next_job.fetch_add(1);
      if (job >= n_jobs) break;
      const int point = job / n_real;
      const int realization = job % n_real;
      const PointSetup setup =
          apply_sweep_value(cfg, cfg.sweep_values[point]);
      const std::uint64_t seed =
          realization_seed(cfg.master_seed, point, realization);
      ChannelSet ch;
      bool ch_ok = true;
      try {
        ch = sample_channels(setup.geometry, cfg.path_loss, cfg.fading,
                             setup.params.n_ant, setup.params.m_elems, seed);
      } catch (const std::exception&) {
        ch_ok = false;
      }
      const std::uint64_t phase_seed = mix_seed(
          {cfg.master_seed, static_cast<std::uint64_t>(point),
           static_cast<std::uint64_t>(realization), kPhaseTag});
      for (int si = 0; si < n_scen; ++si) {
        for (int ci = 0; ci < n_schem; ++ci) {
          const std::size_t idx =
              ((static_cast<std::size_t>(point) * n_real + realization) *
                   n_scen +
               si) *
                  n_schem +
              ci;
          SolveRecord& rec = report.records[idx];
          if (!ch_ok) {
            rec.ok = false;
          } else {
            rec = run_single(ch, setup.params, cfg.solver, cfg.scenarios[si],
                             cfg.schemes[ci], phase_seed);
          }
          rec.point = point;
          rec.realization = realization;
          rec.scenario = cfg.scenarios[si];
          rec.scheme = cfg.schemes[ci];
        }
      }
    }
  };

  int n_workers = cfg.workers > 0
                      ? cfg.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min(n_workers, n_jobs));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregate in record order; sums are order-deterministic.
  for (int p = 0; p < n_points; ++p) {
    for (int si = 0; si < n_scen; ++si) {
      for (int ci = 0; ci < n_schem; ++ci) {
        PointSummary sum;
        sum.point = p;
        sum.sweep_value = cfg.sweep_values[p];
        sum.scenario = cfg.scenarios[si];
        sum.scheme = cfg.schemes[ci];
        double ber_acc = 0.0, rate_acc = 0.0, gamma_acc = 0.0;
        double iters_acc = 0.0, secs_acc = 0.0;
        int converged_acc = 0;
        for (int r = 0; r < n_real; ++r) {
          const std::size_t idx =
              ((static_cast<std::size_t>(p) * n_real + r) * n_scen + si) *
                  n_schem +
              ci;
          const SolveRecord& rec = report.records[idx];
          ++sum.n_total;
          if (!rec.ok) {
            ++sum.n_failed;
            continue;
          }
          iters_acc += rec.iters;
          secs_acc += rec.wall_seconds;
          if (rec.converged) ++converged_acc;
          if (rec.feasible) {
            ++sum.n_feasible;
            ber_acc += rec.ber;
            rate_acc += rec.rate;
            gamma_acc += rec.gamma;
          }
        }
        if (sum.n_feasible > 0) {
          sum.mean_ber = ber_acc / sum.n_feasible;
          sum.mean_rate = rate_acc / sum.n_feasible;
          sum.mean_gamma = gamma_acc / sum.n_feasible;
        }
        const int denom = sum.n_total - sum.n_failed;
        sum.outage = denom > 0
                         ? static_cast<double>(denom - sum.n_feasible) / denom
                         : 0.0;
        if (denom > 0) {
          sum.success_rate = static_cast<double>(converged_acc) / denom;
          sum.mean_iters = iters_acc / denom;
          sum.mean_seconds = secs_acc / denom;
        }
        report.summaries.push_back(sum);
      }
    }
  }
  return report;
}

std::vector<OutagePoint> estimate_outage(const ExperimentConfig& cfg,
                                         const std::vector<double>& r_th_grid) {
  std::vector<OutagePoint> rows;
  for (int gi = 0; gi < static_cast<int>(r_th_grid.size()); ++gi) {
    SystemParams params = cfg.params;
    params.r_th_csr = r_th_grid[gi];
    params.r_th_psr = r_th_grid[gi];
    std::vector<OutagePoint> here;
    for (auto scenario : cfg.scenarios)
      for (auto scheme : cfg.schemes) {
        OutagePoint op;
        op.r_th = r_th_grid[gi];
        op.scenario = scenario;
        op.scheme = scheme;
        here.push_back(op);
      }
    for (int r = 0; r < cfg.n_realizations; ++r) {
      const std::uint64_t seed = realization_seed(cfg.master_seed, gi, r);
      const ChannelSet ch =
          sample_channels(cfg.geometry, cfg.path_loss, cfg.fading,
                          params.n_ant, params.m_elems, seed);
      const std::uint64_t phase_seed =
          mix_seed({cfg.master_seed, static_cast<std::uint64_t>(gi),
                    static_cast<std::uint64_t>(r), kPhaseTag});
      const Beamformer w_mrt = detail::mrt_direct(ch, params.p_max);
      int slot = 0;
      for (auto scenario : cfg.scenarios) {
        for (auto scheme : cfg.schemes) {
          OutagePoint& op = here[slot++];
          ++op.n_total;
          bool feasible = false;
          if (scenario == Scenario::Csr) {
            CsrOptions o;
            if (scheme == Scheme::FixedFilter) {
              o.freeze_w = true;
              o.w_init = w_mrt;
            } else if (scheme == Scheme::RandomPhases) {
              o.freeze_v = true;
              o.v_init = random_phases(params.m_elems, phase_seed);
            }
            feasible = csr_feasibility_probe(ch, params, cfg.solver, o).feasible;
            if (!feasible && scheme == Scheme::Joint) {
              CsrOptions ob;
              ob.freeze_w = true;
              ob.w_init = w_mrt;
              feasible =
                  csr_feasibility_probe(ch, params, cfg.solver, ob).feasible;
            }
          } else {
            const PhaseShifts v0 =
                scheme == Scheme::RandomPhases
                    ? random_phases(params.m_elems, phase_seed)
                    : PhaseShifts::Ones(params.m_elems);
            const bool fw = scheme == Scheme::FixedFilter;
            const bool fv = scheme == Scheme::RandomPhases;
            FeasibilityResult fv0 = feasibility_value(
                ch, params, cfg.solver.beta_lb, cfg.solver, w_mrt, v0, fw, fv);
            feasible = fv0.feasible && fv0.f_obj >= 0.0;
            if (!feasible && scheme == Scheme::Joint) {
              FeasibilityResult fb = feasibility_value(
                  ch, params, cfg.solver.beta_lb, cfg.solver, w_mrt, v0, true,
                  false);
              feasible = fb.feasible && fb.f_obj >= 0.0;
            }
          }
          if (!feasible) ++op.n_infeasible;
        }
      }
    }
    for (auto& op : here) {
      op.outage = op.n_total > 0
                      ? static_cast<double>(op.n_infeasible) / op.n_total
                      : 0.0;
      rows.push_back(op);
    }
  }
  return rows;
}

namespace {
void csv_row(std::ostream& os, const ExperimentConfig& cfg,
             const std::string& sweep_param, double sweep_value,
             const std::string& scenario, const std::string& scheme,
             const std::string& metric, double value, int count) {
  os << "1," << cfg.label << ',' << sweep_param << ','
     << fmt_double(sweep_value) << ',' << scenario << ',' << scheme << ','
     << metric << ',' << fmt_double(value) << ',' << count << ','
     << cfg.master_seed << '\n';
}
}  // namespace

void write_csv(const ExperimentReport& report, std::ostream& os) {
  os << "schema_version,experiment,sweep_param,sweep_value,scenario,scheme,"
        "metric,value,count,master_seed\n";
  for (const auto& s : report.summaries) {
    const std::string scen = to_string(s.scenario);
    const std::string schm = to_string(s.scheme);
    csv_row(os, report.config, report.config.sweep_param, s.sweep_value, scen,
            schm, "mean_ber", s.mean_ber, s.n_feasible);
    csv_row(os, report.config, report.config.sweep_param, s.sweep_value, scen,
            schm, "mean_rate", s.mean_rate, s.n_feasible);
    csv_row(os, report.config, report.config.sweep_param, s.sweep_value, scen,
            schm, "mean_gamma", s.mean_gamma, s.n_feasible);
    csv_row(os, report.config, report.config.sweep_param, s.sweep_value, scen,
            schm, "outage", s.outage, s.n_total - s.n_failed);
    csv_row(os, report.config, report.config.sweep_param, s.sweep_value, scen,
            schm, "success_rate", s.success_rate, s.n_total - s.n_failed);
    csv_row(os, report.config, report.config.sweep_param, s.sweep_value, scen,
            schm, "mean_iters", s.mean_iters, s.n_total - s.n_failed);
    csv_row(os, report.config, report.config.sweep_param, s.sweep_value, scen,
            schm, "n_feasible", s.n_feasible, s.n_total);
    csv_row(os, report.config, report.config.sweep_param, s.sweep_value, scen,
            schm, "n_failed", s.n_failed, s.n_total);
  }
}

void write_csv_file(const ExperimentReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(report, os);
}

void write_outage_csv(const std::vector<OutagePoint>& rows,
                      const ExperimentConfig& cfg, std::ostream& os) {
  os << "schema_version,experiment,sweep_param,sweep_value,scenario,scheme,"
        "metric,value,count,master_seed\n";
  for (const auto& op : rows) {
    csv_row(os, cfg, "r_th", op.r_th, to_string(op.scenario),
            to_string(op.scheme), "outage", op.outage, op.n_total);
    csv_row(os, cfg, "r_th", op.r_th, to_string(op.scenario),
            to_string(op.scheme), "n_infeasible", op.n_infeasible, op.n_total);
  }
}

void write_provenance(const ExperimentReport& report, std::ostream& os) {
  const std::string canonical = canonical_config_json(report.config);
  json j;
  j["library_version"] = library_version();
  j["config_hash_fnv1a64"] = fnv1a64(canonical);
  j["master_seed"] = report.config.master_seed;
  j["n_records"] = report.records.size();
  j["config"] = json::parse(canonical);
  os << j.dump(2) << '\n';
}

void write_provenance_file(const ExperimentReport& report,
                           const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_provenance(report, os);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const char* library_version() { return "1.0.0"; }

}  // namespace srsim
