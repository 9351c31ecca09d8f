#pragma once

#include "srsim/types.hpp"

namespace srsim {

// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

// Noise-normalized path gains for a beamformer/phase configuration.
// sigma is sqrt(noise_power); the stored scalars are h_d^H w / sigma and
// v^H diag(h_r^H) G w / sigma. v.size() must equal M (0 allowed).
LinkGain link_gains(const ChannelSet& ch, const Beamformer& w,
                    const PhaseShifts& v, double noise_power);

// Detection SNR of the reflected path, |cascaded|^2.
double cascaded_snr(const LinkGain& g);

// sqrt(gamma / (gamma + 4)); the modulus of the characteristic root that
// drives both bit error rate expressions. gamma >= 0.
double ber_mu(double gamma);

// Exact bit error rate of the on-off secondary symbol when it spans l_periods
// primary symbols and the receiver combines them coherently:
//   ((1-mu)/2)^L * sum_{l=0}^{L-1} C(L-1+l, l) ((1+mu)/2)^l.
// Evaluated in log space so it stays finite for l_periods up to 64 and large
// gamma. gamma = 0 gives exactly 0.5 for every L.
double csr_ber(double gamma, int l_periods);

// Single-period special case, (1 - mu)/2.
double psr_ber(double gamma);

// Ergodic primary rate when the secondary symbol is long enough to ride the
// primary codeword: (1-rho) log2(1+|direct|^2) + rho log2(1+|direct+cascaded|^2).
double csr_average_rate(const LinkGain& g, double rho);

// Primary rate when both symbol periods coincide and the reflection acts as
// interference: log2(1 + |direct|^2 / (rho |cascaded|^2 + 1)).
double psr_rate(const LinkGain& g, double rho);

}  // namespace srsim
