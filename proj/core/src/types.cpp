#include "srsim/types.hpp"

#include <cmath>

namespace srsim {

void SystemParams::validate() const {
  if (n_ant < 1) throw std::invalid_argument("n_ant must be >= 1");
  if (m_elems < 0) throw std::invalid_argument("m_elems must be >= 0");
  if (!(p_max > 0.0) || !std::isfinite(p_max))
    throw std::invalid_argument("p_max must be positive and finite");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power))
    throw std::invalid_argument("noise_power must be positive and finite");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("rho must lie in [0, 1]");
  if (l_periods < 1) throw std::invalid_argument("l_periods must be >= 1");
  if (!(r_th_csr >= 0.0) || !(r_th_psr >= 0.0))
    throw std::invalid_argument("rate thresholds must be >= 0");
}

void ChannelSet::validate() const {
  if (g_mat.rows() != h_r.size() || g_mat.cols() != h_d.size())
    throw std::invalid_argument("channel dimensions disagree: G must be M x N");
}

double unit_modulus_error(const PhaseShifts& v) {
  double worst = 0.0;
  for (Eigen::Index m = 0; m < v.size(); ++m)
    worst = std::max(worst, std::abs(std::abs(v[m]) - 1.0));
  return worst;
}

bool is_unit_modulus(const PhaseShifts& v, double tol) {
  return unit_modulus_error(v) <= tol;
}

bool power_feasible(const Beamformer& w, double p_max, double tol) {
  return w.squaredNorm() <= p_max * (1.0 + tol);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace srsim
