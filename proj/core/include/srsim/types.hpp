#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace srsim {

using cxd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// System-level constants of one problem instance. Powers are linear (watts);
// conversion from dBm/dB happens at config parse time, never inside the model.
struct SystemParams {
  int n_ant = 1;        // transmit antennas N
  int m_elems = 0;      // reflecting elements M; 0 means no surface
  double p_max = 1.0;   // transmit power budget, W
  double noise_power = 1.0;  // receiver noise power sigma^2, W
  double rho = 0.5;     // fraction of symbols reflected with state on
  int l_periods = 1;    // primary symbols per secondary symbol (L)
  double r_th_csr = 0.0;  // primary rate threshold, commensal scenario
  double r_th_psr = 0.0;  // primary rate threshold, parasitic scenario

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

// One channel draw: direct link h_d (N), surface-to-receiver h_r (M),
// transmitter-to-surface G (M x N).
struct ChannelSet {
  CVec h_d;
  CMat g_mat;
  CVec h_r;

  int n_ant() const { return static_cast<int>(h_d.size()); }
  int m_elems() const { return static_cast<int>(h_r.size()); }
  void validate() const;
};

// Transmit beamformer; feasible when ||w||^2 <= p_max (+ tolerance).
using Beamformer = CVec;

// Reflection coefficients, one per element, unit modulus.
using PhaseShifts = CVec;

// Noise-normalized scalar gains of the two paths:
//   direct    = h_d^H w / sigma
//   cascaded  = v^H diag(h_r^H) G w / sigma
// Squared magnitudes are SNRs directly; all rate/BER formulas consume these.
struct LinkGain {
  cxd direct{0.0, 0.0};
  cxd cascaded{0.0, 0.0};
};

// Largest deviation of |v_m| from 1.
double unit_modulus_error(const PhaseShifts& v);

// True when every |v_m| is within tol of 1.
bool is_unit_modulus(const PhaseShifts& v, double tol = 1e-9);

// ||w||^2 <= p_max scaled by (1 + tol).
bool power_feasible(const Beamformer& w, double p_max, double tol = 1e-9);

double db_to_linear(double db);
double dbm_to_watt(double dbm);

}  // namespace srsim
