#pragma once

#include <optional>
#include <vector>

#include "srsim/model.hpp"
#include "srsim/solver_config.hpp"
#include "srsim/types.hpp"

namespace srsim {

enum class SolveStatus { Converged, MaxIterations, Infeasible };

// Per-round trace of the penalty continuation, one row per outer round.
struct PenaltyState {
  int outer = 0;
  double eta = 0.0;
  double xi = 0.0;         // max coupling violation after the round
  double objective = 0.0;  // penalized objective at the round's last sweep
  int inner_iters = 0;
};

struct CsrSolution {
  Beamformer w;
  PhaseShifts v;
  cxd mu1{0.0, 0.0};      // auxiliary coupled to the cascaded gain
  cxd mu2{0.0, 0.0};      // auxiliary coupled to the direct gain
  LinkGain gain;          // physical gains of (w, v)
  double gamma = 0.0;     // |cascaded|^2
  double ber = 0.5;
  double avg_rate = 0.0;
  double xi = 0.0;        // final coupling violation
  double eta_final = 0.0;
  double objective = 0.0;
  int outer_iters = 0;
  int inner_iters_total = 0;
  SolveStatus status = SolveStatus::MaxIterations;
  std::vector<PenaltyState> trace;
  // Penalized objective after every inner sweep, one sequence per outer
  // round; each sequence is non-decreasing (block steps never regress).
  std::vector<std::vector<double>> inner_objectives;
};

struct ProbeResult {
  bool feasible = false;
  double best_rate = 0.0;
  Beamformer w;
  PhaseShifts v;
};

// Optional block freezes and warm starts; used by the reference schemes
// (frozen transmit filter, frozen random phases) and by tests.
struct CsrOptions {
  bool freeze_w = false;
  bool freeze_v = false;
  std::optional<Beamformer> w_init;
  std::optional<PhaseShifts> v_init;
};

// Heuristic maximizer of the average primary rate, used as the feasibility
// screen. Alternates the exact phase step (align every reflected path with
// the direct one) with a small set of closed-form transmit candidates and
// keeps the best pair; the result is a certified achievable rate, so
// best_rate >= r_th proves feasibility. Honors freezes in `opt`.
ProbeResult csr_feasibility_probe(const ChannelSet& ch,
                                  const SystemParams& params,
                                  const SolverConfig& cfg,
                                  const CsrOptions& opt = {});

// Penalty-continuation optimizer for the commensal scenario: maximizes the
// reflected-path SNR subject to the average-rate floor and the power budget.
// Each outer round relaxes the coupling equalities into quadratic penalties
// with weight 1/(2 eta) and block-sweeps (auxiliary gains, transmit filter,
// phases) until the penalized objective stalls; eta shrinks geometrically
// until the worst coupling violation xi drops below eps_violation.
CsrSolution solve_csr(const ChannelSet& ch, const SystemParams& params,
                      const SolverConfig& cfg, const CsrOptions& opt = {});

}  // namespace srsim
