#include "srsim/csr_solver.hpp"

#include <cmath>

#include "detail.hpp"
#include "srsim/kernels.hpp"

namespace srsim {

using detail::dot_vh;
using detail::mrt_direct;
using detail::reflected_vec;

namespace {

// Exact phase step of the probe: rotate every reflected term onto the phase
// of the direct gain. Globally optimal for the average rate at fixed w.
PhaseShifts align_phases(const CVec& b, cxd direct) {
  const double phi = (direct == cxd{0.0, 0.0}) ? 0.0 : std::arg(direct);
  PhaseShifts v(b.size());
  for (Eigen::Index m = 0; m < b.size(); ++m) {
    const double mag = std::abs(b[m]);
    v[m] = mag > 0.0 ? std::polar(1.0, std::arg(b[m]) - phi) : cxd{1.0, 0.0};
  }
  return v;
}

struct PenaltyObjective {
  double value = 0.0;
  cxd c1{0.0, 0.0};
  cxd c2{0.0, 0.0};
};

PenaltyObjective penalty_objective(const ChannelSet& ch,
                                   const SystemParams& params,
                                   const Beamformer& w, const PhaseShifts& v,
                                   cxd mu1, cxd mu2, double eta) {
  const double sigma = std::sqrt(params.noise_power);
  PenaltyObjective po;
  po.c2 = ch.h_d.dot(w) / sigma;
  if (ch.m_elems() > 0) po.c1 = dot_vh(v, reflected_vec(ch, w, sigma));
  po.value = std::norm(mu1) -
             (std::norm(mu1 - po.c1) + std::norm(mu2 - po.c2)) / (2.0 * eta);
  return po;
}

}  // namespace

ProbeResult csr_feasibility_probe(const ChannelSet& ch,
                                  const SystemParams& params,
                                  const SolverConfig& cfg,
                                  const CsrOptions& opt) {
  params.validate();
  ch.validate();
  const double sigma2 = params.noise_power;
  ProbeResult out;

  Beamformer w = opt.w_init.value_or(mrt_direct(ch, params.p_max));
  PhaseShifts v = opt.v_init.value_or(PhaseShifts::Ones(ch.m_elems()));
  out.w = w;
  out.v = v;
  out.best_rate = csr_average_rate(link_gains(ch, w, v, sigma2), params.rho);

  for (int it = 0; it < cfg.probe_max_iter; ++it) {
    double improved = 0.0;
    if (!opt.freeze_v && ch.m_elems() > 0) {
      const CVec b = reflected_vec(ch, w, std::sqrt(sigma2));
      const cxd direct = ch.h_d.dot(w) / std::sqrt(sigma2);
      v = align_phases(b, direct);
    }
    if (!opt.freeze_w) {
      const CVec a_v = detail::cascade_tx(ch, v);
      std::vector<Beamformer> cands;
      cands.push_back(mrt_direct(ch, params.p_max));
      const CVec comb = ch.h_d + a_v;
      if (comb.norm() > 0.0)
        cands.push_back(std::sqrt(params.p_max) / comb.norm() * comb);
      if (a_v.norm() > 0.0)
        cands.push_back(std::sqrt(params.p_max) / a_v.norm() * a_v);
      cands.push_back(w);
      double best = -1.0;
      for (const auto& cand : cands) {
        const double r =
            csr_average_rate(link_gains(ch, cand, v, sigma2), params.rho);
        if (r > best) {
          best = r;
          w = cand;
        }
      }
    }
    const double rate = csr_average_rate(link_gains(ch, w, v, sigma2), params.rho);
    if (rate > out.best_rate) {
      improved = rate - out.best_rate;
      out.best_rate = rate;
      out.w = w;
      out.v = v;
    }
    if (improved <= 1e-12 * std::max(1.0, out.best_rate) && it > 0) break;
  }
  out.feasible = out.best_rate >= params.r_th_csr * (1.0 - 1e-12) - 1e-12;
  return out;
}

CsrSolution solve_csr(const ChannelSet& ch, const SystemParams& params,
                      const SolverConfig& cfg, const CsrOptions& opt) {
  params.validate();
  cfg.validate();
  ch.validate();
  const double sigma2 = params.noise_power;
  const double sigma = std::sqrt(sigma2);

  CsrSolution sol;

  // Without a surface there is nothing to reflect: the secondary link is
  // pure noise (error rate 1/2) and the transmit filter just serves the rate.
  if (ch.m_elems() == 0) {
    sol.w = opt.w_init.value_or(mrt_direct(ch, params.p_max));
    sol.v = PhaseShifts(0);
    sol.gain = link_gains(ch, sol.w, sol.v, sigma2);
    sol.mu2 = sol.gain.direct;
    sol.avg_rate = csr_average_rate(sol.gain, params.rho);
    sol.ber = 0.5;
    sol.status = sol.avg_rate >= params.r_th_csr * (1.0 - 1e-12) - 1e-12
                     ? SolveStatus::Converged
                     : SolveStatus::Infeasible;
    return sol;
  }

  const ProbeResult probe = csr_feasibility_probe(ch, params, cfg, opt);
  if (!probe.feasible) {
    sol.w = probe.w;
    sol.v = probe.v;
    sol.gain = link_gains(ch, sol.w, sol.v, sigma2);
    sol.gamma = cascaded_snr(sol.gain);
    sol.ber = csr_ber(sol.gamma, params.l_periods);
    sol.avg_rate = csr_average_rate(sol.gain, params.rho);
    sol.status = SolveStatus::Infeasible;
    return sol;
  }

  Beamformer w = opt.w_init.value_or(mrt_direct(ch, params.p_max));
  PhaseShifts v = opt.v_init.value_or(PhaseShifts::Ones(ch.m_elems()));
  if (csr_average_rate(link_gains(ch, w, v, sigma2), params.rho) <
      params.r_th_csr) {
    w = probe.w;  // default start misses the rate floor; probe's point is in
    v = probe.v;
  }

  LinkGain g0 = link_gains(ch, w, v, sigma2);
  cxd mu1 = g0.cascaded;
  cxd mu2 = g0.direct;

  double eta = cfg.eta0;
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    PenaltyObjective po = penalty_objective(ch, params, w, v, mu1, mu2, eta);
    double f_cur = po.value;
    double f_prev = f_cur;
    int inner_count = 0;
    sol.inner_objectives.emplace_back();
    for (int inner = 0; inner < cfg.max_inner; ++inner) {
      ++inner_count;
      f_prev = f_cur;
      // Auxiliary gains under the linearized rate floor.
      const ScaResult sca0 = sca_aux_solver(
          po.c1, po.c2, eta, params.rho, params.r_th_csr, mu1, mu2,
          cfg.sca_tol, cfg.sca_max_newton);
      ScaResult sca = sca0;
      if (sca.status == ScaStatus::InfeasibleLinearization) {
        sca = sca_aux_solver(po.c1, po.c2, eta, params.rho, params.r_th_csr,
                             po.c1, po.c2, cfg.sca_tol, cfg.sca_max_newton);
      }
      if (sca.status == ScaStatus::InfeasibleLinearization) {
        sol.status = SolveStatus::Infeasible;
        break;
      }
      if (sca.status == ScaStatus::Ok) {
        const double f_try =
            penalty_objective(ch, params, w, v, sca.mu1, sca.mu2, eta).value;
        if (f_try >= f_cur - 1e-9 * std::max(1.0, std::abs(f_cur))) {
          mu1 = sca.mu1;
          mu2 = sca.mu2;
          f_cur = f_try;
        }
      }

      // Transmit filter: ridge solve of the coupled least squares.
      if (!opt.freeze_w) {
        const CVec a_v = detail::cascade_tx(ch, v);
        const CMat s_mat =
            (a_v * a_v.adjoint() + ch.h_d * ch.h_d.adjoint()) / sigma2;
        const CVec z = (mu1 * a_v + mu2 * ch.h_d) / sigma;
        const RidgeResult rr = ridge_beamformer(
            s_mat, z, params.p_max, cfg.lambda_lb, cfg.power_tol_rel,
            cfg.dual_tol, cfg.dual_max_iter, cfg.rank_tol_rel);
        const double f_try =
            penalty_objective(ch, params, rr.w, v, mu1, mu2, eta).value;
        if (f_try >= f_cur - 1e-9 * std::max(1.0, std::abs(f_cur))) {
          w = rr.w;
          f_cur = f_try;
        }
      }

      // Phases: one majorize-minimize sweep on the coupling penalty.
      if (!opt.freeze_v) {
        const CVec b = reflected_vec(ch, w, sigma);
        const PhaseShifts v_try =
            mm_unit_modulus_step_rank_one(b, std::conj(mu1) * b, v);
        const double f_try =
            penalty_objective(ch, params, w, v_try, mu1, mu2, eta).value;
        if (f_try >= f_cur - 1e-9 * std::max(1.0, std::abs(f_cur))) {
          v = v_try;
          f_cur = f_try;
        }
      }

      po = penalty_objective(ch, params, w, v, mu1, mu2, eta);
      f_cur = po.value;
      sol.inner_objectives.back().push_back(f_cur);
      if (std::abs(f_cur - f_prev) / std::max(1.0, std::abs(f_cur)) <
          cfg.eps_inner)
        break;
    }
    sol.objective = f_cur;
    if (sol.status == SolveStatus::Infeasible) break;

    sol.inner_iters_total += inner_count;
    sol.outer_iters = outer + 1;
    const double xi = std::max(std::abs(mu1 - po.c1), std::abs(mu2 - po.c2));
    sol.trace.push_back({outer + 1, eta, xi, f_cur, inner_count});
    sol.xi = xi;
    sol.eta_final = eta;
    if (xi < cfg.eps_violation) {
      sol.status = SolveStatus::Converged;
      break;
    }
    eta *= cfg.penalty_scale;
  }

  sol.w = w;
  sol.v = v;
  sol.mu1 = mu1;
  sol.mu2 = mu2;
  sol.gain = link_gains(ch, w, v, sigma2);
  sol.gamma = cascaded_snr(sol.gain);
  sol.ber = csr_ber(sol.gamma, params.l_periods);
  sol.avg_rate = csr_average_rate(sol.gain, params.rho);
  return sol;
}

}  // namespace srsim
