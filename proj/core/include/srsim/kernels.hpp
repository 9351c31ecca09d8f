#pragma once

#include <functional>

#include "srsim/types.hpp"

namespace srsim {

// ---------------------------------------------------------------------------
// Scalar root bracketing
// ---------------------------------------------------------------------------

struct BisectionResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Root of a non-increasing f on [lo, hi] with f(lo) >= 0 >= f(hi). Stops when
// the bracket is narrower than tol_x or |f| <= tol_f, whichever first; the
// returned x is the endpoint of the final bracket with f >= -tol_f preferred,
// so callers get the feasible side.
BisectionResult scalar_bisection(const std::function<double(double)>& f,
                                 double lo, double hi, double tol_x,
                                 double tol_f, int max_iter);

// ---------------------------------------------------------------------------
// Hermitian eigenstructure
// ---------------------------------------------------------------------------

// Eigendecomposition of a Hermitian PSD matrix with a relative rank cutoff.
// Eigenvalues are sorted descending; rank counts those above
// rank_tol_rel * max(eig, 0).
struct EigBasis {
  CMat u;                // unitary, columns are eigenvectors
  Eigen::VectorXd eigs;  // descending
  int rank = 0;
};

EigBasis eig_hermitian(const CMat& s_mat, double rank_tol_rel = 1e-10);

// ---------------------------------------------------------------------------
// Power-constrained ridge beamformer
// ---------------------------------------------------------------------------

struct RidgeResult {
  Beamformer w;
  double lambda = 0.0;
  double power = 0.0;
  bool at_interior = false;  // true when ||w(0)||^2 <= p_max already
  int iterations = 0;
};

// Minimizer of ||z - S^(1/2)...||-type quadratics: solves
//   max_w 2 Re{w^H z} - w^H S w  s.t. ||w||^2 <= p_max,
// whose stationary point is w(lambda) = (S + lambda I)^+ z with lambda >= 0
// the power multiplier. ||w(lambda)||^2 is non-increasing in lambda, and at
// lambda = 0 components of z outside range(S) make the norm infinite, so the
// interior branch applies only when z lies in range(S) and the pseudoinverse
// solution already fits the budget. Otherwise lambda is bisected on
// [lambda_lb, ||z|| / sqrt(p_max)] until the power residual is below
// power_tol_rel * p_max or the bracket is exhausted.
RidgeResult ridge_beamformer(const CMat& s_mat, const CVec& z, double p_max,
                             double lambda_lb, double power_tol_rel,
                             double dual_tol, int max_iter,
                             double rank_tol_rel = 1e-10);

// ---------------------------------------------------------------------------
// Majorize-minimize step on the unit-modulus set
// ---------------------------------------------------------------------------

// One surrogate descent step for f(v) = v^H A v - 2 Re{v^H linear} over
// |v_m| = 1: with q = (lambda_max(A) I - A) v_prev + linear, the surrogate
// minimizer is v_m = q_m / |q_m| (1 when q_m = 0). Guarantees
// f(v_new) <= f(v_prev) because the surrogate touches f at v_prev and
// dominates it on the whole set.
PhaseShifts mm_unit_modulus_step(const CMat& a_mat, const CVec& linear,
                                 const PhaseShifts& v_prev);

// Same step for the rank-one A = u u^H arising in the optimizers;
// lambda_max = ||u||^2 and the matrix is never formed.
PhaseShifts mm_unit_modulus_step_rank_one(const CVec& u, const CVec& linear,
                                          const PhaseShifts& v_prev);

// ---------------------------------------------------------------------------
// Auxiliary-gain subproblem of the commensal optimizer
// ---------------------------------------------------------------------------

enum class ScaStatus {
  Ok,
  InfeasibleLinearization,  // linearized rate constraint has no interior
  Unbounded,                // eta too close to 1/2 with a nonzero target
};

struct ScaResult {
  cxd mu1{0.0, 0.0};
  cxd mu2{0.0, 0.0};
  double objective = 0.0;
  double kkt_residual = 0.0;
  double constraint_slack = 0.0;  // linearized-rate value minus threshold
  ScaStatus status = ScaStatus::Ok;
};

// Maximizes
//   |mu1|^2 - (1/(2 eta)) (|mu1 - a|^2 + |mu2 - b|^2)
// over the linearized average-rate region
//   (1-rho) log2(y2) + rho log2(y12) >= r_th,
//   y2  = 1 - |m2r|^2  + 2 Re{mu2^* m2r},
//   y12 = 1 - |m12r|^2 + 2 Re{(mu1+mu2)^* m12r},  m12r = m1r + m2r,
// where (m1r, m2r) is the linearization anchor. Falls back to the closed-form
// unconstrained maximizer mu1 = a/(1-2 eta), mu2 = b whenever it is feasible;
// otherwise runs a log-barrier Newton method from a strictly feasible point.
// Requires eta < 1/2.
ScaResult sca_aux_solver(cxd a, cxd b, double eta, double rho, double r_th,
                         cxd m1r, cxd m2r, double tol, int max_newton);

// ---------------------------------------------------------------------------
// Unit-diagonal semidefinite subproblem of the parasitic optimizer
// ---------------------------------------------------------------------------

struct SdpProblem {
  CMat b_mat;           // Hermitian PSD quadratic form of the reflected SNR
  double beta = 0.0;    // SNR floor: Re tr(V B) >= beta
  double eta_bar = 1.0; // inverse penalty weight on the rank surrogate
};

struct SdpResult {
  CMat v_mat;           // Hermitian PSD, diag within tolerance of 1
  double objective = 0.0;
  double primal_residual = 0.0;
  bool feasible = true;   // false when no unit-diagonal PSD V reaches beta
  bool converged = false;
  int iterations = 0;
};

// Solves min Re tr(V B) + (1/eta_bar) Re tr((I - p p^H) V) over unit-diagonal
// PSD V with Re tr(V B) >= beta, where p is the dominant eigenvector of
// v_init (the current linearization of the spectral-norm surrogate).
// A feasible v_init whose objective meets the duality bound
// max(beta, elliptope floor of Re tr(V B)) is returned unchanged with zero
// iterations (the penalty part is nonnegative, so the bound certifies
// optimality). Otherwise: operator splitting on scale-normalized data,
// alternately projecting onto the affine slice {diag = 1, Re tr(V B) >= beta}
// (closed form) and the PSD cone (eigenvalue clipping), with over-relaxation,
// a scaled dual update, and residual-balanced penalty rescaling every 25
// iterations. Infeasibility is certified against max_V Re tr(V B) over
// unit-diagonal PSD V, which for rank-one B = b b^H / s equals
// (sum_m |b_m|)^2 / s.
SdpResult sdp_rankone_solve(const SdpProblem& prob, const CMat& v_init,
                            double tol, int max_iter);

}  // namespace srsim
