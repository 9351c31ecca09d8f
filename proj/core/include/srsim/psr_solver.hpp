#pragma once

#include <optional>
#include <vector>

#include "srsim/model.hpp"
#include "srsim/csr_solver.hpp"
#include "srsim/solver_config.hpp"
#include "srsim/types.hpp"

namespace srsim {

// Certified upper bound on the reachable reflected-path SNR at full power:
// p_max * max_v v^H A_hat v with A_hat = diag(h_r^H) G G^H diag(h_r) / sigma^2.
// Runs the majorize-maximize sweep on the unit-modulus set from v0 (ones when
// empty) and returns the tightest surrogate maximum seen; every iteration's
// surrogate maximum is a valid bound, so the minimum over iterations is too.
double beta_upper_bound(const ChannelSet& ch, const SystemParams& params,
                        const SolverConfig& cfg,
                        const std::optional<PhaseShifts>& v0 = std::nullopt);

struct PsrStepResult {
  Beamformer w;
  double tau1 = 0.0;
  double tau2 = 0.0;
  bool feasible = true;   // false when no w fits both floor and budget
  int iterations = 0;
};

// Transmit-filter block at a fixed SNR floor beta: maximizes the linearized
// rate bound around w_prev subject to ||w||^2 <= p_max and the linearized
// SNR floor f2_lb(w) >= beta. Solved through the stationarity system
//   (D1 + tau1 I) w = h_d h_d^H w_prev / sigma^2 + tau2 a_tilde,
// D1 = (2^r_th - 1) rho a a^H / sigma^2, a = G^H diag(h_r) v,
// a_tilde = a a^H w_prev / sigma^2, with tau2 chosen in closed form so the
// floor binds exactly when it binds, and tau1 bisected on the transmit power
// (non-increasing in tau1). tau1 = 0 applies only when the system is
// consistent at zero; bisection hitting tau1_ub marks the step infeasible.
PsrStepResult psr_beamformer_step(const ChannelSet& ch,
                                  const SystemParams& params,
                                  const PhaseShifts& v,
                                  const Beamformer& w_prev, double beta,
                                  const SolverConfig& cfg);

struct DcPhaseResult {
  PhaseShifts v;
  CMat v_mat;               // final lifted iterate
  double rank_residual = 0.0;  // tr(V) - ||V||_2 at exit
  double snr = 0.0;            // reflected SNR of the extracted phases
  bool feasible = true;
  bool converged = false;
  int outer_iters = 0;
  int sdp_iters = 0;
};

// Phase block at a fixed SNR floor: the reflected power v^H (b b^H/sigma^2) v
// is both the secondary detection SNR and the interference to the primary, so
// the step minimizes it subject to itself staying above beta; the optimum
// pins the reflected SNR to the floor. Solved through the lifted
// unit-diagonal semidefinite relaxation plus a spectral-norm
// difference-of-convex penalty: the subgradient linearization is refreshed
// every convex solve, the penalty weight tightens geometrically until
// tr(V) - ||V||_2 <= dc_rank_tol * tr(V), and phases come from the dominant
// eigenvector of the final V. The loop is warm started at a floor-tight
// rank-one lift built by phase interpolation (|v^H b| can realize any value
// between the fold-minimum and the aligned sum), which for this rank-one
// quadratic is already a global minimizer, so the penalty loop typically
// certifies it in one round. b_vec is diag(h_r^H) G w.
DcPhaseResult dc_phase_step(const CVec& b_vec, double noise_power, double beta,
                            const PhaseShifts& v_init, const SolverConfig& cfg);

struct FeasibilityResult {
  double f_obj = 0.0;  // direct SNR minus the scaled interference-plus-noise;
                       // -inf marks an inner block declaring the floor
                       // unreachable
  Beamformer w;
  PhaseShifts v;
  double rank_residual = 0.0;
  bool feasible = true;  // inner blocks admitted the floor
  int inner_iters = 0;
};

// Inner alternation of the SNR-target search: at a fixed floor beta,
// alternately improves w (psr_beamformer_step) and v (dc_phase_step) until
// the feasibility surrogate
//   f_obj = |h_d^H w|^2/sigma^2 - (2^r_th - 1)(rho |v^H diag(h_r^H) G w|^2/sigma^2 + 1)
// stalls. f_obj >= 0 certifies that the rate floor survives at this beta.
// When the starting pair misses the floor, the blocks first climb the
// reflected SNR by exact alternating maximization (aligned phases, matched
// filter) so the linearized subproblems start from a floor-feasible anchor;
// if even that climb cannot reach beta, the floor is declared unreachable
// (f_obj = -inf). Warm starts come from (w_start, v_start); pass the previous
// feasible pair to continue a bracket search. When neither block is frozen
// and the climb fails to certify, a second climb runs with the filter pinned
// to the full-power direct match (phases still free), so the free search
// certifies at least every floor the pinned-filter scheme does.
FeasibilityResult feasibility_value(const ChannelSet& ch,
                                    const SystemParams& params, double beta,
                                    const SolverConfig& cfg,
                                    const Beamformer& w_start,
                                    const PhaseShifts& v_start,
                                    bool freeze_w = false,
                                    bool freeze_v = false);

// One probe of the outer SNR-target search.
struct BetaProbe {
  double beta = 0.0;
  double f_obj = 0.0;
  bool feasible = false;
  int iterations = 0;
};

struct PsrSolution {
  Beamformer w;
  PhaseShifts v;
  double beta_star = 0.0;  // reflected SNR actually achieved
  LinkGain gain;
  double gamma = 0.0;
  double ber = 0.5;
  double rate = 0.0;
  double rank_one_residual = 0.0;
  int bisection_iters = 0;
  SolveStatus status = SolveStatus::MaxIterations;
  std::vector<BetaProbe> beta_trace;  // midpoints probed by the outer search
};

struct PsrOptions {
  bool freeze_w = false;
  bool freeze_v = false;
  std::optional<Beamformer> w_init;
  std::optional<PhaseShifts> v_init;
};

// Outer driver for the parasitic scenario: bisects the reflected-path SNR
// target on [beta_lb, beta_upper_bound] using the sign of the converged
// feasibility surrogate, keeping the best feasible (w, v). Any infeasible
// verdict inside a probe counts as "floor too high". Infeasible instances
// (rate floor unreachable even with beta = 0) are reported as such.
PsrSolution solve_psr(const ChannelSet& ch, const SystemParams& params,
                      const SolverConfig& cfg, const PsrOptions& opt = {});

}  // namespace srsim
