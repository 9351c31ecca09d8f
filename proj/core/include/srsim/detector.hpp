#pragma once

#include <cstdint>

#include "srsim/types.hpp"

namespace srsim {

struct DetectorResult {
  double ber = 0.0;
  double half_width95 = 0.0;  // normal-approximation 95% half width
  std::int64_t trials = 0;
  std::int64_t errors = 0;
};

// Monte Carlo run of the coherent on-off detector. Works in noise-normalized
// units: `cascaded` is the gain from LinkGain, primary symbols are CN(0,1),
// noise is CN(0,1). Per trial the receiver forms
//   T = Re{ c^* sum_l x[l]^* y[l] },  y[l] = c s x[l] + n[l],
// and compares against the genie threshold |c|^2 sum_l |x[l]|^2 / 2 computed
// from that trial's symbols. c = 0 makes both sides zero, ties resolve to
// "on", and the error rate is exactly 1/2 in expectation.
//
// Trials are consumed in fixed-size blocks whose generators are seeded by
// mix_seed({seed, block}), so the result depends only on (seed, n_trials),
// never on scheduling.
DetectorResult simulate_csr_detector(cxd cascaded, int l_periods,
                                     std::int64_t n_trials, std::uint64_t seed);

// Same detector with the two symbol clocks equal: one primary symbol per
// decision, direct-path contribution already removed.
DetectorResult simulate_psr_detector(cxd cascaded, std::int64_t n_trials,
                                     std::uint64_t seed);

}  // namespace srsim
