#include "srsim/model.hpp"

#include <cmath>

namespace srsim {

double q_function(double x) {
  return 0.5 * std::erfc(x * 0.7071067811865475244);
}

LinkGain link_gains(const ChannelSet& ch, const Beamformer& w,
                    const PhaseShifts& v, double noise_power) {
  const double sigma = std::sqrt(noise_power);
  LinkGain g;
  g.direct = ch.h_d.dot(w) / sigma;  // Eigen dot conjugates the left factor
  if (ch.m_elems() > 0) {
    const CVec gw = ch.g_mat * w;
    cxd acc{0.0, 0.0};
    for (Eigen::Index m = 0; m < v.size(); ++m)
      acc += std::conj(v[m]) * std::conj(ch.h_r[m]) * gw[m];
    g.cascaded = acc / sigma;
  }
  return g;
}

double cascaded_snr(const LinkGain& g) { return std::norm(g.cascaded); }

double ber_mu(double gamma) {
  if (gamma <= 0.0) return 0.0;
  if (std::isinf(gamma)) return 1.0;
  return std::sqrt(gamma / (gamma + 4.0));
}

double csr_ber(double gamma, int l_periods) {
  const int L = l_periods;
  const double mu = ber_mu(gamma);
  if (mu >= 1.0) return 0.0;
  if (mu <= 0.0) return 0.5;
  // log of ((1-mu)/2)^L, accurate when mu -> 1: (1-mu)/2 = exp(log1p(-mu) - log 2)
  const double log_lo = std::log1p(-mu) - 0.6931471805599453094;
  const double log_hi = std::log1p(mu) - 0.6931471805599453094;
  double sum = 0.0;
  for (int l = 0; l < L; ++l) {
    // C(L-1+l, l) via lgamma keeps this exact-enough out to L = 64.
    const double log_binom = std::lgamma(static_cast<double>(L + l)) -
                             std::lgamma(static_cast<double>(l + 1)) -
                             std::lgamma(static_cast<double>(L));
    sum += std::exp(static_cast<double>(L) * log_lo + log_binom +
                    static_cast<double>(l) * log_hi);
  }
  if (sum < 0.0) return 0.0;
  return sum > 0.5 ? 0.5 : sum;
}

double psr_ber(double gamma) { return 0.5 * (1.0 - ber_mu(gamma)); }

double csr_average_rate(const LinkGain& g, double rho) {
  const double direct = std::norm(g.direct);
  const double both = std::norm(g.direct + g.cascaded);
  return (1.0 - rho) * std::log2(1.0 + direct) + rho * std::log2(1.0 + both);
}

double psr_rate(const LinkGain& g, double rho) {
  const double direct = std::norm(g.direct);
  const double interf = rho * std::norm(g.cascaded);
  return std::log2(1.0 + direct / (interf + 1.0));
}

}  // namespace srsim
