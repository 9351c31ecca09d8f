#include "srsim/detector.hpp"

#include <cmath>
#include <stdexcept>

#include "srsim/rng.hpp"

namespace srsim {

namespace {
constexpr std::int64_t kBlock = 1 << 14;
}

DetectorResult simulate_csr_detector(cxd cascaded, int l_periods,
                                     std::int64_t n_trials,
                                     std::uint64_t seed) {
  if (l_periods < 1) throw std::invalid_argument("l_periods must be >= 1");
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  const cxd c = cascaded;
  const double c2 = std::norm(c);
  std::int64_t errors = 0;
  const std::int64_t blocks = (n_trials + kBlock - 1) / kBlock;
  for (std::int64_t b = 0; b < blocks; ++b) {
    Rng rng(mix_seed({seed, static_cast<std::uint64_t>(b)}));
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(n_trials, lo + kBlock);
    for (std::int64_t t = lo; t < hi; ++t) {
      const bool s = rng.bit();
      cxd acc{0.0, 0.0};
      double x_energy = 0.0;
      for (int l = 0; l < l_periods; ++l) {
        const cxd x = rng.cnormal();
        const cxd n = rng.cnormal();
        const cxd y = (s ? c * x : cxd{0.0, 0.0}) + n;
        acc += std::conj(x) * y;
        x_energy += std::norm(x);
      }
      const double stat = (std::conj(c) * acc).real();
      const double thresh = 0.5 * c2 * x_energy;
      const bool decide_on = stat >= thresh;
      if (decide_on != s) ++errors;
    }
  }
  DetectorResult r;
  r.trials = n_trials;
  r.errors = errors;
  r.ber = static_cast<double>(errors) / static_cast<double>(n_trials);
  r.half_width95 =
      1.959963984540054 *
      std::sqrt(std::max(r.ber * (1.0 - r.ber), 0.25 / static_cast<double>(n_trials)) /
                static_cast<double>(n_trials));
  return r;
}

DetectorResult simulate_psr_detector(cxd cascaded, std::int64_t n_trials,
                                     std::uint64_t seed) {
  return simulate_csr_detector(cascaded, 1, n_trials, seed);
}

}  // namespace srsim
