#pragma once

#include <cmath>

#include "srsim/types.hpp"

namespace srsim::detail {

// Reflected path as seen from the phases: b_m = h_r_m^* (G w)_m / sigma, so
// the cascaded gain is v^H b. Pass sigma = 1 for the unnormalized vector.
inline CVec reflected_vec(const ChannelSet& ch, const Beamformer& w,
                          double sigma) {
  const CVec gw = ch.g_mat * w;
  CVec b(ch.m_elems());
  for (Eigen::Index m = 0; m < b.size(); ++m)
    b[m] = std::conj(ch.h_r[m]) * gw[m] / sigma;
  return b;
}

inline cxd dot_vh(const PhaseShifts& v, const CVec& b) {
  cxd acc{0.0, 0.0};
  for (Eigen::Index m = 0; m < v.size(); ++m) acc += std::conj(v[m]) * b[m];
  return acc;
}

// Full-power match to the direct link; falls back to a unit direction when
// the direct link is exactly dark.
inline Beamformer mrt_direct(const ChannelSet& ch, double p_max) {
  const double n = ch.h_d.norm();
  if (n == 0.0) {
    Beamformer w = Beamformer::Zero(ch.n_ant());
    if (ch.n_ant() > 0) w[0] = std::sqrt(p_max);
    return w;
  }
  return std::sqrt(p_max) / n * ch.h_d;
}

// a = G^H diag(h_r) v; the transmit-side image of the reflected path.
inline CVec cascade_tx(const ChannelSet& ch, const PhaseShifts& v) {
  if (ch.m_elems() == 0) return CVec::Zero(ch.n_ant());
  return ch.g_mat.adjoint() * (ch.h_r.array() * v.array()).matrix();
}

}  // namespace srsim::detail
