#pragma once

#include <stdexcept>

namespace srsim {

// Every tolerance, schedule and cap used by the two optimizers. Defaults are
// the values used for all reported experiments; tests override individual
// fields. validate() rejects combinations that make a subproblem ill-posed.
struct SolverConfig {
  // Penalty continuation (commensal optimizer).
  double eta0 = 0.1;          // initial penalty weight, must stay < 1/2
  double penalty_scale = 0.7; // multiplies eta / eta_bar each outer round
  int max_outer = 100;        // penalty rounds
  int max_inner = 200;        // block sweeps per round
  double eps_inner = 1e-4;    // fractional objective change stop (eps1)
  double eps_violation = 1e-4;// coupling violation stop (eps2)

  // Ridge beamformer dual search.
  double lambda_lb = 1e-5;
  double dual_tol = 1e-6;       // interval width stop for dual bisections
  double power_tol_rel = 1e-10; // power residual stop, relative to p_max
  int dual_max_iter = 200;
  double rank_tol_rel = 1e-10;  // eigenvalue cutoff relative to the largest

  // Auxiliary-variable barrier solve.
  double sca_tol = 1e-9;
  int sca_max_newton = 200;

  // Parasitic-scenario bisection on the reflected-path SNR target.
  double beta_lb = 0.0;
  double beta_tol = 1e-4;     // absolute width stop (eps2 of the outer search)
  double beta_tol_rel = 0.0;  // optional relative width stop, 0 disables
  int beta_max_iter = 80;

  // Beamformer dual search in the parasitic scenario.
  double tau1_ub = 1e6;

  // Difference-of-convex phase refinement.
  double eta_bar0 = 1e2;        // initial inverse penalty weight
  int dc_max_outer = 60;        // penalty rounds
  int dc_max_iter = 50;         // linearizations per round
  double dc_rank_tol = 1e-5;    // stop when tr(V) - ||V||_2 <= tol * tr(V)
  double dc_obj_tol = 1e-5;     // fractional objective change stop

  // Semidefinite subproblem (operator splitting).
  int sdp_max_iter = 4000;
  double sdp_tol = 1e-8;

  // Feasibility probe.
  int probe_max_iter = 50;

  void validate() const {
    if (!(eta0 > 0.0 && eta0 < 0.5))
      throw std::invalid_argument("eta0 must lie in (0, 1/2)");
    if (!(penalty_scale > 0.0 && penalty_scale < 1.0))
      throw std::invalid_argument("penalty_scale must lie in (0, 1)");
    if (max_outer < 1 || max_inner < 1 || dual_max_iter < 1 ||
        beta_max_iter < 1 || dc_max_outer < 1 || dc_max_iter < 1 ||
        sdp_max_iter < 1 || sca_max_newton < 1 || probe_max_iter < 1)
      throw std::invalid_argument("iteration caps must be >= 1");
    if (!(eps_inner > 0.0) || !(eps_violation > 0.0) || !(dual_tol > 0.0) ||
        !(beta_tol > 0.0) || !(sdp_tol > 0.0) || !(sca_tol > 0.0) ||
        !(dc_rank_tol > 0.0) || !(dc_obj_tol > 0.0))
      throw std::invalid_argument("tolerances must be positive");
    if (!(eta_bar0 > 0.0) || !(tau1_ub > 0.0) || !(lambda_lb > 0.0))
      throw std::invalid_argument("schedule parameters must be positive");
    if (beta_tol_rel < 0.0 || beta_lb < 0.0)
      throw std::invalid_argument("beta bounds must be >= 0");
  }
};

}  // namespace srsim
