#include "ularma/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace ularma::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: probability must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  if (lambda < 1.18) {
    // Jacobi theta form; the alternating series converges slowly here.
    const double w = -pi2 / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(w * m * m);
      cdf += term;
      if (term < 1e-17 * cdf) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sf = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sf += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sf, 0.0, 1.0);
}

double lilliefors_p(double d, std::size_t n) {
  const double nn = static_cast<double>(n);
  // Above n = 100 the statistic is rescaled onto the n = 100 curve.
  const double kd = n > 100 ? d * std::pow(nn / 100.0, 0.49) : d;
  const double nd = n > 100 ? 100.0 : nn;
  const double p = std::exp(-7.01256 * kd * kd * (nd + 2.78019) + 2.99587 * kd * std::sqrt(nd + 2.78019) -
                            0.122119 + 0.974598 / std::sqrt(nd) + 1.67997 / nd);
  if (p <= 0.1) return p;
  const double k = (std::sqrt(nn) - 0.01 + 0.85 / std::sqrt(nn)) * d;
  auto poly = [k](double c0, double c1, double c2, double c3, double c4) {
    return c0 + k * (c1 + k * (c2 + k * (c3 + k * c4)));
  };
  double q = 0.0;
  if (k <= 0.302) {
    q = 1.0;
  } else if (k <= 0.5) {
    q = poly(2.76773, -19.828315, 80.709644, -138.55152, 81.218052);
  } else if (k <= 0.9) {
    q = poly(-4.901232, 40.662806, -97.490286, 94.029866, -32.355711);
  } else if (k <= 1.31) {
    q = poly(6.198765, -19.558097, 23.186922, -12.234627, 2.423045);
  }
  return std::clamp(q, 0.0, 1.0);
}

double quantile_type7(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw std::invalid_argument("quantile_type7: empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw std::domain_error("quantile_type7: probability must lie in [0, 1]");
  }
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double mean(std::span<const double> x) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double median(std::vector<double> x) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(x.begin(), x.end());
  return quantile_type7(x, 0.5);
}

double stddev(std::span<const double> x) {
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace ularma::stats
