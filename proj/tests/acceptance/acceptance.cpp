// Acceptance gate for the whole stack: each runner exercises one end-to-end
// claim about the system and prints exactly one verdict line. Run with no
// arguments for the full gate or with a criterion number (1-7) for one piece.
#include <srsim/channel_model.hpp>
#include <srsim/csr_solver.hpp>
#include <srsim/detector.hpp>
#include <srsim/experiment.hpp>
#include <srsim/kernels.hpp>
#include <srsim/model.hpp>
#include <srsim/psr_solver.hpp>
#include <srsim/types.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "../support/oracles.hpp"
#include "../support/rig.hpp"

using namespace srsim;
using testsup::cxd;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& what) {
    if (detail.empty()) detail = what;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// P(Bin(n, 1/2) >= k); the one-sided sign test everything below reuses.
double sign_test_upper(int n, int k) { return testsup::binom_upper_p(n, k); }

// ---------------------------------------------------------------------------
// 1. Closed-form bit error rates against brute-force detection
// ---------------------------------------------------------------------------

Verdict criterion1() {
  Verdict v;
  std::mt19937_64 gen(20260801);
  std::uniform_real_distribution<double> log_gamma(std::log(0.05),
                                                   std::log(30.0));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  const int64_t trials = 1000000;
  int worst_pair = -1;
  double worst_sigma = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const double gamma = std::exp(log_gamma(gen));
    const int l_periods = 1 + static_cast<int>(gen() % 8);
    const cxd casc = std::polar(std::sqrt(gamma), phase(gen));

    const double p_csr = csr_ber(gamma, l_periods);
    const DetectorResult mc_csr =
        simulate_csr_detector(casc, l_periods, trials, 1000 + pair);
    const double se_csr =
        std::sqrt(std::max(p_csr * (1.0 - p_csr), 1e-18) / trials);
    const double dev_csr = std::abs(mc_csr.ber - p_csr);
    if (dev_csr > 4.0 * se_csr)
      v.fail("csr pair " + std::to_string(pair) + " off by " +
             fmt(dev_csr / se_csr) + " sigma");
    if (se_csr > 0.0 && dev_csr / se_csr > worst_sigma) {
      worst_sigma = dev_csr / se_csr;
      worst_pair = pair;
    }

    const double p_psr = psr_ber(gamma);
    const DetectorResult mc_psr =
        simulate_psr_detector(casc, trials, 2000 + pair);
    const double se_psr =
        std::sqrt(std::max(p_psr * (1.0 - p_psr), 1e-18) / trials);
    if (std::abs(mc_psr.ber - p_psr) > 4.0 * se_psr)
      v.fail("psr pair " + std::to_string(pair) + " off by " +
             fmt(std::abs(mc_psr.ber - p_psr) / se_psr) + " sigma");
  }
  v.note("100 detector runs of 1e6 trials, worst deviation " +
         fmt(worst_sigma) + " sigma (pair " + std::to_string(worst_pair) +
         ")");
  return v;
}

// ---------------------------------------------------------------------------
// 2. Convex kernels against independent oracles
// ---------------------------------------------------------------------------

Verdict criterion2() {
  Verdict v;
  std::mt19937_64 gen(20260802);

  double worst_ridge = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const CMat s = testsup::rand_psd(gen, n, 1 + static_cast<int>(gen() % n));
    const CVec z = testsup::rand_cvec(gen, n);
    const double p_max = 0.4 + 0.45 * (trial % 6);
    const RidgeResult r =
        ridge_beamformer(s, z, p_max, 1e-8, 1e-12, 1e-10, 400);
    const testsup::BallPgResult pg = testsup::ball_pg_max(s, z, p_max);
    const double gap =
        std::abs(testsup::ridge_objective(s, z, r.w) - pg.objective) /
        (1.0 + std::abs(pg.objective));
    worst_ridge = std::max(worst_ridge, gap);
    if (gap > 1e-6)
      v.fail("ridge trial " + std::to_string(trial) + " gap " + fmt(gap));
  }

  double worst_sca = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const cxd a = testsup::rand_cn(gen);
    const cxd b = testsup::rand_cn(gen);
    const cxd m1r = testsup::rand_cn(gen, 0.7);
    const cxd m2r = testsup::rand_cn(gen, 0.7);
    const double eta = 0.05 + 0.1 * (trial % 4);
    const double rho = 0.3 + 0.2 * (trial % 3);
    const double r_th =
        0.7 * testsup::sca_rate_lin(m1r, m2r, m1r, m2r, rho);
    const ScaResult r =
        sca_aux_solver(a, b, eta, rho, r_th, m1r, m2r, 1e-10, 300);
    if (r.status != ScaStatus::Ok) {
      v.fail("sca trial " + std::to_string(trial) + " not ok");
      continue;
    }
    const testsup::ScaPgResult pg =
        testsup::sca_pg_oracle(a, b, eta, rho, r_th, m1r, m2r);
    const double gap = std::abs(r.objective - pg.objective) /
                       (1.0 + std::abs(pg.objective));
    worst_sca = std::max(worst_sca, gap);
    if (!pg.feasible || gap > 1e-5)
      v.fail("sca trial " + std::to_string(trial) + " gap " + fmt(gap));
  }

  double worst_step = 0.0;
  int step_trials = 0;
  while (step_trials < 20) {
    const int n = 2 + static_cast<int>(gen() % 3);
    const int m = 3 + static_cast<int>(gen() % 4);
    const ChannelSet ch = testsup::rand_channels(gen, n, m);
    SystemParams p = testsup::unit_params(n, m);
    p.r_th_psr = 0.5;
    const CVec vphase = testsup::rand_unit_modulus(gen, m);
    CVec w_prev = testsup::rand_cvec(gen, n);
    w_prev *= std::sqrt(p.p_max) / w_prev.norm();
    const testsup::PsrSubproblem probe =
        testsup::build_psr_subproblem(ch, p, vphase, w_prev, 0.0);
    const double slack = testsup::psr_sub_max_floor(probe) - probe.hr;
    if (slack <= 0.1) continue;
    ++step_trials;
    const double beta = 0.3 * slack;
    const PsrStepResult step =
        psr_beamformer_step(ch, p, vphase, w_prev, beta, SolverConfig{});
    const testsup::PsrSubproblem sub =
        testsup::build_psr_subproblem(ch, p, vphase, w_prev, beta);
    const testsup::HalfBallPgResult pg = testsup::ball_halfspace_pg(sub);
    if (!step.feasible || !pg.found) {
      v.fail("transmit step trial infeasible");
      continue;
    }
    const double fk = testsup::psr_sub_objective(sub, step.w);
    const double gap =
        (pg.objective - fk) / (1.0 + std::abs(pg.objective));
    worst_step = std::max(worst_step, gap);
    if (gap > 1e-5)
      v.fail("transmit step gap " + fmt(gap));
  }

  double worst_sdp = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 5);
    const CVec bvec = testsup::rand_cvec(gen, m);
    const CMat b = bvec * bvec.adjoint();
    double mag_sum = 0.0;
    for (int i = 0; i < m; ++i) mag_sum += std::abs(bvec[i]);
    SdpProblem prob;
    prob.b_mat = b;
    prob.eta_bar = 2.0 + 20.0 * (trial % 4);
    prob.beta = (trial % 2 == 0 ? 0.0 : 0.6) * mag_sum * mag_sum;
    const CVec u = testsup::rand_unit_modulus(gen, m);
    const CMat v_init = 0.9 * (u * u.adjoint()) + 0.1 * CMat::Identity(m, m);
    Eigen::SelfAdjointEigenSolver<CMat> es(v_init);
    const CVec pvec = es.eigenvectors().col(m - 1);
    const CMat c = b + (1.0 / prob.eta_bar) *
                           (CMat::Identity(m, m) - pvec * pvec.adjoint());
    const SdpResult r = sdp_rankone_solve(prob, v_init, 1e-8, 8000);
    const testsup::DenseSdpResult oracle =
        testsup::dense_sdp_oracle(c, b, prob.beta);
    if (!r.feasible || !oracle.feasible) {
      v.fail("sdp trial " + std::to_string(trial) + " infeasible");
      continue;
    }
    const double fk = (c.adjoint() * r.v_mat).trace().real();
    const double gap = std::abs(fk - oracle.objective) /
                       (1.0 + std::abs(oracle.objective));
    worst_sdp = std::max(worst_sdp, gap);
    if (gap > 1e-4)
      v.fail("sdp trial " + std::to_string(trial) + " gap " + fmt(gap));
  }

  v.note("worst relative gaps: ridge " + fmt(worst_ridge) + ", aux " +
         fmt(worst_sca) + ", transmit " + fmt(worst_step) + ", sdp " +
         fmt(worst_sdp));
  return v;
}

// ---------------------------------------------------------------------------
// 3. Penalty continuation convergence at deployment scale
// ---------------------------------------------------------------------------

Verdict criterion3() {
  Verdict v;
  const Geometry geom;
  const PathLossModel pl;
  const FadingModel fm;
  SystemParams params;
  params.n_ant = 10;
  params.p_max = dbm_to_watt(40.0);
  params.noise_power = dbm_to_watt(-80.0);
  params.rho = 0.5;
  params.l_periods = 15;
  params.r_th_csr = 1.0;
  const SolverConfig cfg;
  double worst_xi = 0.0;
  int worst_outer = 0;
  int checked = 0;
  for (int m_elems : {16, 64}) {
    params.m_elems = m_elems;
    for (int rep = 0; rep < 5; ++rep) {
      const ChannelSet ch = sample_channels(geom, pl, fm, params.n_ant,
                                            m_elems, 3000 + 10 * m_elems + rep);
      const CsrSolution sol = solve_csr(ch, params, cfg);
      ++checked;
      if (sol.status == SolveStatus::Infeasible) {
        v.fail("M=" + std::to_string(m_elems) + " rep " +
               std::to_string(rep) + " infeasible");
        continue;
      }
      worst_xi = std::max(worst_xi, sol.xi);
      worst_outer = std::max(worst_outer, sol.outer_iters);
      if (!(sol.xi < 1e-4))
        v.fail("M=" + std::to_string(m_elems) + " rep " +
               std::to_string(rep) + " xi " + fmt(sol.xi));
      if (sol.outer_iters > 60)
        v.fail("M=" + std::to_string(m_elems) + " rep " +
               std::to_string(rep) + " took " +
               std::to_string(sol.outer_iters) + " outers");
      for (const auto& seq : sol.inner_objectives)
        for (std::size_t i = 1; i < seq.size(); ++i)
          if (seq[i] < seq[i - 1] - 1e-7 * std::max(1.0, std::abs(seq[i - 1])))
            v.fail("inner objective regressed at M=" +
                   std::to_string(m_elems) + " rep " + std::to_string(rep));
    }
  }
  v.note(std::to_string(checked) + " runs, worst violation " + fmt(worst_xi) +
         ", worst outer count " + std::to_string(worst_outer));
  return v;
}

// ---------------------------------------------------------------------------
// 4. Monte Carlo trends of the full campaign
// ---------------------------------------------------------------------------

struct PairKey {
  int point;
  int realization;
  Scenario scenario;
  Scheme scheme;
  bool operator<(const PairKey& o) const {
    return std::tie(point, realization, scenario, scheme) <
           std::tie(o.point, o.realization, o.scenario, o.scheme);
  }
};

std::map<PairKey, SolveRecord> index_records(const ExperimentReport& r) {
  std::map<PairKey, SolveRecord> out;
  for (const SolveRecord& rec : r.records)
    out[{rec.point, rec.realization, rec.scenario, rec.scheme}] = rec;
  return out;
}

ExperimentConfig campaign_base() {
  ExperimentConfig cfg;
  cfg.params.n_ant = 10;
  cfg.params.m_elems = 32;
  cfg.params.p_max = dbm_to_watt(40.0);
  cfg.params.noise_power = dbm_to_watt(-80.0);
  cfg.params.rho = 0.5;
  cfg.params.l_periods = 15;
  cfg.params.r_th_csr = 1.0;
  cfg.params.r_th_psr = 1.0;
  cfg.n_realizations = 200;
  cfg.master_seed = 20260804;
  cfg.workers = 0;
  return cfg;
}

// Significant decrease from sweep point `lo` to `hi` for one (scenario,
// scheme): one-sided sign test on per-realization pairs at 5%.
bool significant_decrease(const std::map<PairKey, SolveRecord>& idx, int lo,
                          int hi, int n_realizations, Scenario sc, Scheme sm,
                          std::string* stats) {
  int wins = 0, losses = 0;
  for (int r = 0; r < n_realizations; ++r) {
    const auto a = idx.find({lo, r, sc, sm});
    const auto b = idx.find({hi, r, sc, sm});
    if (a == idx.end() || b == idx.end()) continue;
    if (!a->second.ok || !b->second.ok || !a->second.feasible ||
        !b->second.feasible)
      continue;
    if (b->second.ber < a->second.ber)
      ++wins;
    else if (b->second.ber > a->second.ber)
      ++losses;
  }
  const double p = sign_test_upper(wins + losses, wins);
  if (stats)
    *stats = std::to_string(wins) + "W/" + std::to_string(losses) + "L p=" +
             fmt(p);
  return p <= 0.05;
}

// "Not significantly worse": a one-sided sign test cannot show `worse` beats
// `better` at 5%.
bool not_significantly_worse(int better_losses, int n_nonties) {
  return sign_test_upper(n_nonties, better_losses) > 0.05;
}

double mean_ber_of(const ExperimentReport& rep, int point, Scenario sc,
                   Scheme sm) {
  for (const PointSummary& s : rep.summaries)
    if (s.point == point && s.scenario == sc && s.scheme == sm)
      return s.mean_ber;
  return std::numeric_limits<double>::quiet_NaN();
}

Verdict criterion4() {
  Verdict v;

  // Sweep A: transmit power, all schemes, both scenarios.
  ExperimentConfig cfg_a = campaign_base();
  cfg_a.sweep_param = "p_max_dbm";
  cfg_a.sweep_values = {30.0, 35.0, 40.0};
  const ExperimentReport rep_a = run_sweep(cfg_a);
  const auto idx_a = index_records(rep_a);

  // Sweep B: panel size, all schemes, both scenarios.
  ExperimentConfig cfg_b = campaign_base();
  cfg_b.sweep_param = "m_elems";
  cfg_b.sweep_values = {16.0, 32.0, 64.0};
  const ExperimentReport rep_b = run_sweep(cfg_b);
  const auto idx_b = index_records(rep_b);

  // Sweep E: rate floor, joint scheme only.
  ExperimentConfig cfg_e = campaign_base();
  cfg_e.sweep_param = "r_th";
  cfg_e.sweep_values = {1.0, 5.0, 8.0};
  cfg_e.schemes = {Scheme::Joint};
  const ExperimentReport rep_e = run_sweep(cfg_e);
  const auto idx_e = index_records(rep_e);

  // (a) Mean bit error rate strictly decreasing in transmit power, with a
  // significant per-pair sign test.
  for (Scenario sc : {Scenario::Csr, Scenario::Psr}) {
    for (int point = 1; point < 3; ++point) {
      const double m_lo = mean_ber_of(rep_a, point - 1, sc, Scheme::Joint);
      const double m_hi = mean_ber_of(rep_a, point, sc, Scheme::Joint);
      std::string stats;
      const bool sig = significant_decrease(idx_a, point - 1, point, 200, sc,
                                            Scheme::Joint, &stats);
      if (!(m_hi < m_lo) || !sig)
        v.fail("power trend " + to_string(sc) + " point " +
               std::to_string(point) + " (" + stats + ")");
    }
  }

  // (b) Same across the panel sizes.
  for (Scenario sc : {Scenario::Csr, Scenario::Psr}) {
    for (int point = 1; point < 3; ++point) {
      const double m_lo = mean_ber_of(rep_b, point - 1, sc, Scheme::Joint);
      const double m_hi = mean_ber_of(rep_b, point, sc, Scheme::Joint);
      std::string stats;
      const bool sig = significant_decrease(idx_b, point - 1, point, 200, sc,
                                            Scheme::Joint, &stats);
      if (!(m_hi < m_lo) || !sig)
        v.fail("panel trend " + to_string(sc) + " point " +
               std::to_string(point) + " (" + stats + ")");
    }
  }

  // (c) Joint never significantly worse than either reference scheme at any
  // sweep point of either sweep.
  for (const auto* pack : {&rep_a, &rep_b}) {
    const auto idx = index_records(*pack);
    const int n_points = static_cast<int>(pack->config.sweep_values.size());
    for (int point = 0; point < n_points; ++point)
      for (Scenario sc : {Scenario::Csr, Scenario::Psr})
        for (Scheme ref : {Scheme::FixedFilter, Scheme::RandomPhases}) {
          int joint_losses = 0, nonties = 0;
          for (int r = 0; r < 200; ++r) {
            const auto a = idx.find({point, r, sc, Scheme::Joint});
            const auto b = idx.find({point, r, sc, ref});
            if (a == idx.end() || b == idx.end()) continue;
            if (!a->second.ok || !b->second.ok || !a->second.feasible ||
                !b->second.feasible)
              continue;
            if (a->second.ber != b->second.ber) {
              ++nonties;
              if (a->second.ber > b->second.ber) ++joint_losses;
            }
          }
          if (!not_significantly_worse(joint_losses, nonties))
            v.fail("joint worse than " + to_string(ref) + " for " +
                   to_string(sc) + " at point " + std::to_string(point) +
                   " (" + std::to_string(joint_losses) + "/" +
                   std::to_string(nonties) + ")");
        }
  }

  // (d) Long-symbol detection never significantly worse than equal-period
  // detection at any sweep point.
  for (const auto* pack : {&rep_a, &rep_b, &rep_e}) {
    const auto idx = index_records(*pack);
    const int n_points = static_cast<int>(pack->config.sweep_values.size());
    for (int point = 0; point < n_points; ++point) {
      int csr_losses = 0, nonties = 0;
      for (int r = 0; r < 200; ++r) {
        const auto a = idx.find({point, r, Scenario::Csr, Scheme::Joint});
        const auto b = idx.find({point, r, Scenario::Psr, Scheme::Joint});
        if (a == idx.end() || b == idx.end()) continue;
        if (!a->second.ok || !b->second.ok || !a->second.feasible ||
            !b->second.feasible)
          continue;
        if (a->second.ber != b->second.ber) {
          ++nonties;
          if (a->second.ber > b->second.ber) ++csr_losses;
        }
      }
      if (!not_significantly_worse(csr_losses, nonties))
        v.fail("commensal worse than parasitic at sweep point " +
               std::to_string(point) + " (" + std::to_string(csr_losses) +
               "/" + std::to_string(nonties) + ")");
    }
  }

  // (e) Raising the rate floor never significantly lowers the bit error
  // rate.
  for (Scenario sc : {Scenario::Csr, Scenario::Psr}) {
    for (int point = 1; point < 3; ++point) {
      int decreases = 0, nonties = 0;
      for (int r = 0; r < 200; ++r) {
        const auto a = idx_e.find({point - 1, r, sc, Scheme::Joint});
        const auto b = idx_e.find({point, r, sc, Scheme::Joint});
        if (a == idx_e.end() || b == idx_e.end()) continue;
        if (!a->second.ok || !b->second.ok || !a->second.feasible ||
            !b->second.feasible)
          continue;
        if (a->second.ber != b->second.ber) {
          ++nonties;
          if (b->second.ber < a->second.ber) ++decreases;
        }
      }
      if (sign_test_upper(nonties, decreases) <= 0.05)
        v.fail("floor trend " + to_string(sc) + " point " +
               std::to_string(point) + " significantly decreased (" +
               std::to_string(decreases) + "/" + std::to_string(nonties) +
               ")");
    }
  }

  std::ostringstream note;
  note << "power sweep joint mean BER csr ";
  for (int point = 0; point < 3; ++point)
    note << fmt(mean_ber_of(rep_a, point, Scenario::Csr, Scheme::Joint))
         << (point < 2 ? "/" : "");
  note << ", psr ";
  for (int point = 0; point < 3; ++point)
    note << fmt(mean_ber_of(rep_a, point, Scenario::Psr, Scheme::Joint))
         << (point < 2 ? "/" : "");
  v.note(note.str());
  return v;
}

// ---------------------------------------------------------------------------
// 5. Outage dominance of the joint design
// ---------------------------------------------------------------------------

Verdict criterion5() {
  Verdict v;
  ExperimentConfig cfg = campaign_base();
  cfg.sweep_param = "r_th";
  cfg.sweep_values = {1.0};  // required by validate; the grid drives outage
  cfg.schemes = {Scheme::Joint, Scheme::FixedFilter};
  const std::vector<double> grid = {8.5, 9.5, 10.5, 11.5};
  const std::vector<OutagePoint> rows = estimate_outage(cfg, grid);
  auto outage_of = [&](double r_th, Scenario sc, Scheme sm) {
    for (const OutagePoint& r : rows)
      if (r.r_th == r_th && r.scenario == sc && r.scheme == sm)
        return r.outage;
    return -1.0;
  };
  std::ostringstream note;
  for (Scenario sc : {Scenario::Csr, Scenario::Psr}) {
    note << (sc == Scenario::Csr ? "csr" : " psr") << " joint/pinned:";
    for (double r_th : grid) {
      const double joint = outage_of(r_th, sc, Scheme::Joint);
      const double pinned = outage_of(r_th, sc, Scheme::FixedFilter);
      if (joint < 0.0 || pinned < 0.0) {
        v.fail("missing outage row at r_th " + fmt(r_th));
        continue;
      }
      note << " " << fmt(joint) << "/" << fmt(pinned);
      if (joint > pinned + 1e-12)
        v.fail("joint outage " + fmt(joint) + " above pinned-filter " +
               fmt(pinned) + " at r_th " + fmt(r_th) + " (" + to_string(sc) +
               ")");
    }
  }
  v.note(note.str());
  return v;
}

// ---------------------------------------------------------------------------
// 6. Structural invariants of returned solutions
// ---------------------------------------------------------------------------

Verdict criterion6() {
  Verdict v;
  std::mt19937_64 gen(20260806);

  // Power multiplier complementary slackness on the transmit kernel.
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 3);
    const CMat s = testsup::rand_psd(gen, n, 1 + static_cast<int>(gen() % n));
    const CVec z = testsup::rand_cvec(gen, n);
    const double p_max = 0.5 + 0.3 * (trial % 5);
    const RidgeResult r =
        ridge_beamformer(s, z, p_max, 1e-8, 1e-12, 1e-10, 400);
    const double slack_product =
        r.lambda * std::abs(p_max - r.w.squaredNorm());
    if (slack_product > 1e-6 * (1.0 + r.lambda) * p_max)
      v.fail("slackness " + fmt(slack_product) + " at trial " +
             std::to_string(trial));
  }

  // Full solves: phases, budget, rate floors.
  int solved = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 3);
    const int m = 2 + static_cast<int>(gen() % 7);
    const ChannelSet ch = testsup::rand_channels(gen, n, m);
    SystemParams p = testsup::unit_params(n, m);
    const ProbeResult probe = csr_feasibility_probe(ch, p, SolverConfig{});
    if (!probe.feasible) continue;
    p.r_th_csr = 0.7 * probe.best_rate;
    const CVec w_mrt = std::sqrt(p.p_max) * (ch.h_d / ch.h_d.norm());
    LinkGain direct_only;
    direct_only.direct =
        (ch.h_d.adjoint() * w_mrt)(0, 0) / std::sqrt(p.noise_power);
    direct_only.cascaded = cxd{0.0, 0.0};
    p.r_th_psr = 0.5 * psr_rate(direct_only, p.rho);

    const CsrSolution c = solve_csr(ch, p, SolverConfig{});
    const PsrSolution s = solve_psr(ch, p, SolverConfig{});
    ++solved;
    if (unit_modulus_error(c.v) > 1e-12 || unit_modulus_error(s.v) > 1e-12)
      v.fail("phases off the unit circle at trial " + std::to_string(trial));
    if (c.w.squaredNorm() > p.p_max * (1.0 + 1e-6) ||
        s.w.squaredNorm() > p.p_max * (1.0 + 1e-6))
      v.fail("power budget exceeded at trial " + std::to_string(trial));
    if (c.status == SolveStatus::Converged && c.avg_rate < p.r_th_csr - 1e-4)
      v.fail("commensal rate floor missed by " +
             fmt(p.r_th_csr - c.avg_rate));
    if (s.status == SolveStatus::Converged && s.rate < p.r_th_psr - 1e-4)
      v.fail("parasitic rate floor missed by " + fmt(p.r_th_psr - s.rate));
  }

  // Dual-path transmit power monotone in tau1.
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 3);
    const int m = 3 + static_cast<int>(gen() % 4);
    const ChannelSet ch = testsup::rand_channels(gen, n, m);
    SystemParams p = testsup::unit_params(n, m);
    p.r_th_psr = 0.5;
    const CVec vphase = testsup::rand_unit_modulus(gen, m);
    CVec w_prev = testsup::rand_cvec(gen, n);
    w_prev *= std::sqrt(p.p_max) / w_prev.norm();
    const testsup::PsrSubproblem probe =
        testsup::build_psr_subproblem(ch, p, vphase, w_prev, 0.0);
    const double beta =
        0.2 * std::max(0.0, testsup::psr_sub_max_floor(probe) - probe.hr);
    const testsup::PsrSubproblem sub =
        testsup::build_psr_subproblem(ch, p, vphase, w_prev, beta);
    double prev = std::numeric_limits<double>::infinity();
    double tau1 = 1e-3;
    for (int k = 0; k < 20; ++k, tau1 *= 2.0) {
      const double pw = testsup::dual_path_power(sub, tau1);
      if (pw > prev * (1.0 + 1e-8))
        v.fail("dual path power rose at trial " + std::to_string(trial));
      prev = pw;
    }
  }

  // Rank surrogate residual at the phase block's exit.
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 7);
    const CVec b = testsup::rand_cvec(gen, m);
    double mag_sum = 0.0;
    for (int i = 0; i < m; ++i) mag_sum += std::abs(b[i]);
    const double beta = 0.5 * mag_sum * mag_sum;
    const DcPhaseResult dc =
        dc_phase_step(b, 1.0, beta, CVec::Ones(m), SolverConfig{});
    if (!dc.feasible) {
      v.fail("phase block infeasible at trial " + std::to_string(trial));
      continue;
    }
    if (dc.rank_residual > 1e-5 * m)
      v.fail("rank residual " + fmt(dc.rank_residual) + " at trial " +
             std::to_string(trial));
    if (dc.snr < beta - 1e-6 * (1.0 + beta))
      v.fail("floor missed by phase block at trial " + std::to_string(trial));
  }

  v.note(std::to_string(solved) + " full solves plus 140 kernel instances");
  return v;
}

// ---------------------------------------------------------------------------
// 7. Bit-identical campaign replays
// ---------------------------------------------------------------------------

Verdict criterion7() {
  Verdict v;
  ExperimentConfig cfg;
  cfg.params.n_ant = 6;
  cfg.params.m_elems = 12;
  cfg.params.p_max = dbm_to_watt(35.0);
  cfg.params.noise_power = dbm_to_watt(-80.0);
  cfg.params.rho = 0.5;
  cfg.params.l_periods = 8;
  cfg.params.r_th_csr = 1.0;
  cfg.params.r_th_psr = 1.0;
  cfg.sweep_param = "p_max_dbm";
  cfg.sweep_values = {30.0, 40.0};
  cfg.n_realizations = 5;
  cfg.master_seed = 77;
  cfg.label = "replay";

  cfg.workers = 1;
  const ExperimentReport serial = run_sweep(cfg);
  cfg.workers = 4;
  const ExperimentReport threaded = run_sweep(cfg);

  std::ostringstream csv1, csv2, prov1, prov2;
  write_csv(serial, csv1);
  write_csv(threaded, csv2);
  write_provenance(serial, prov1);
  write_provenance(threaded, prov2);
  if (csv1.str().empty()) v.fail("empty CSV");
  if (csv1.str() != csv2.str())
    v.fail("CSV bytes differ between worker counts");
  if (prov1.str() != prov2.str())
    v.fail("provenance bytes differ between worker counts");

  cfg.workers = 1;
  const ExperimentReport again = run_sweep(cfg);
  std::ostringstream csv3;
  write_csv(again, csv3);
  if (csv1.str() != csv3.str()) v.fail("CSV bytes differ between replays");

  v.note(std::to_string(csv1.str().size()) + " CSV bytes stable across " +
         "three runs and two worker counts");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 7) {
      std::fprintf(stderr, "usage: %s [criterion 1-7]\n", argv[0]);
      return 2;
    }
  }
  using Runner = Verdict (*)();
  const Runner runners[7] = {criterion1, criterion2, criterion3, criterion4,
                             criterion5, criterion6, criterion7};
  bool all_pass = true;
  for (int idx = 1; idx <= 7; ++idx) {
    if (only != 0 && idx != only) continue;
    const Verdict verdict = runners[idx - 1]();
    std::printf("criterion %d: %s — %s\n", idx,
                verdict.pass ? "PASS" : "FAIL", verdict.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && verdict.pass;
  }
  return all_pass ? 0 : 1;
}
