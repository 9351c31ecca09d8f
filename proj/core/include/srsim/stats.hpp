#pragma once

#include <cstdint>

namespace srsim {

// P(Bin(n, p) >= k), evaluated by log-space summation; exact enough for the
// sample sizes used in the acceptance checks (n <= a few thousand).
double binomial_sf(std::int64_t k, std::int64_t n, double p);

// One-sided sign test: p-value for observing at least `wins` successes out of
// `wins + losses` fair coin flips. Small values mean the win side dominates.
double sign_test_p(std::int64_t wins, std::int64_t losses);

}  // namespace srsim
