#include "srsim/stats.hpp"

#include <cmath>

namespace srsim {

double binomial_sf(std::int64_t k, std::int64_t n, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double acc = 0.0;
  for (std::int64_t i = k; i <= n; ++i) {
    const double lc = std::lgamma(static_cast<double>(n + 1)) -
                      std::lgamma(static_cast<double>(i + 1)) -
                      std::lgamma(static_cast<double>(n - i + 1));
    acc += std::exp(lc + static_cast<double>(i) * lp +
                    static_cast<double>(n - i) * lq);
  }
  return acc > 1.0 ? 1.0 : acc;
}

double sign_test_p(std::int64_t wins, std::int64_t losses) {
  return binomial_sf(wins, wins + losses, 0.5);
}

}  // namespace srsim
