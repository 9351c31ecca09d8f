// Shared helpers for the test binaries: deterministic random problem
// builders and canonical parameter sets. Everything is seeded explicitly so
// failures reproduce from the test name alone.
#pragma once

#include <srsim/types.hpp>

#include <complex>
#include <random>

namespace testsup {

using srsim::CMat;
using srsim::CVec;
using srsim::cxd;

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64{seed}; }

inline cxd rand_cn(std::mt19937_64& gen, double stddev = 1.0) {
  std::normal_distribution<double> n(0.0, stddev / std::sqrt(2.0));
  return {n(gen), n(gen)};
}

inline CVec rand_cvec(std::mt19937_64& gen, int n, double stddev = 1.0) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = rand_cn(gen, stddev);
  return v;
}

inline CMat rand_cmat(std::mt19937_64& gen, int rows, int cols,
                      double stddev = 1.0) {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rand_cn(gen, stddev);
  return m;
}

// Random Hermitian PSD matrix A = X X^H with controlled rank.
inline CMat rand_psd(std::mt19937_64& gen, int n, int rank,
                     double stddev = 1.0) {
  const CMat x = rand_cmat(gen, n, rank, stddev);
  return x * x.adjoint();
}

inline CVec rand_unit_modulus(std::mt19937_64& gen, int m) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  CVec v(m);
  for (int i = 0; i < m; ++i) v[i] = std::polar(1.0, u(gen));
  return v;
}

// Channel draw at O(1) scale, for solver unit tests where physical path loss
// would only add dynamic range.
inline srsim::ChannelSet rand_channels(std::mt19937_64& gen, int n_ant,
                                       int m_elems, double direct_scale = 1.0,
                                       double reflect_scale = 1.0) {
  srsim::ChannelSet ch;
  ch.h_d = rand_cvec(gen, n_ant, direct_scale);
  ch.g_mat = rand_cmat(gen, m_elems, n_ant, reflect_scale);
  ch.h_r = rand_cvec(gen, m_elems, reflect_scale);
  return ch;
}

// Unit-scale parameters: noise 1, power budget p_max, thresholds zeroed.
inline srsim::SystemParams unit_params(int n_ant, int m_elems,
                                       double p_max = 1.0) {
  srsim::SystemParams p;
  p.n_ant = n_ant;
  p.m_elems = m_elems;
  p.p_max = p_max;
  p.noise_power = 1.0;
  p.rho = 0.5;
  p.l_periods = 2;
  p.r_th_csr = 0.0;
  p.r_th_psr = 0.0;
  return p;
}

}  // namespace testsup
