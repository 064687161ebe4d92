#include "ularma/unit_lindley.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ularma {
namespace {

void require_interior(double y, const char* what) {
  if (!(y > kSupportGuard && y < 1.0 - kSupportGuard)) {
    throw std::domain_error(std::string(what) + ": y = " + std::to_string(y) +
                            " is outside (0, 1)");
  }
}

// In the standardized Lindley scale z = rate * y / (1 - y) the survival
// function is (1 + mu z) e^{-z}, independent of the rate otherwise.
double lower_tail_z(double z, double mu) { return -std::expm1(-z) - mu * z * std::exp(-z); }
double upper_tail_z(double z, double mu) { return (1.0 + mu * z) * std::exp(-z); }
double density_z(double z, double mu) { return std::exp(-z) * (1.0 - mu + mu * z); }

double y_from_z(double z, double mu) { return z * mu / (1.0 - mu + z * mu); }
double z_from_y(double y, double mu) { return (1.0 - mu) / mu * y / (1.0 - y); }

}  // namespace

UnitLindleyParam::UnitLindleyParam(double mu) : mu_(mu) {
  if (!(mu > kSupportGuard && mu < 1.0 - kSupportGuard)) {
    throw std::domain_error("UnitLindleyParam: mu = " + std::to_string(mu) +
                            " is outside (0, 1)");
  }
}

double pdf(double y, UnitLindleyParam p) { return std::exp(log_pdf(y, p)); }

double log_pdf(double y, UnitLindleyParam p) {
  require_interior(y, "log_pdf");
  const double mu = p.mu();
  return 2.0 * std::log1p(-mu) - std::log(mu) - 3.0 * std::log1p(-y) +
         y * (mu - 1.0) / (mu * (1.0 - y));
}

double cdf(double y, UnitLindleyParam p) {
  if (!(y >= 0.0 && y < 1.0)) {
    throw std::domain_error("cdf: y = " + std::to_string(y) + " is outside [0, 1)");
  }
  if (y == 0.0) return 0.0;
  return lower_tail_z(z_from_y(y, p.mu()), p.mu());
}

double ccdf(double y, UnitLindleyParam p) {
  if (!(y >= 0.0 && y < 1.0)) {
    throw std::domain_error("ccdf: y = " + std::to_string(y) + " is outside [0, 1)");
  }
  if (y == 0.0) return 1.0;
  return upper_tail_z(z_from_y(y, p.mu()), p.mu());
}

double quantile(double u, UnitLindleyParam p) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("quantile: u = " + std::to_string(u) + " is outside (0, 1)");
  }
  const double mu = p.mu();
  // Residual in whichever tail is better conditioned; both are decreasing in z
  // after the sign flip below, so the bracket logic is shared.
  const bool upper = u > 0.5;
  const double target = upper ? 1.0 - u : u;
  auto residual = [&](double z) {
    return upper ? upper_tail_z(z, mu) - target : target - lower_tail_z(z, mu);
  };

  double lo = 0.0;
  double hi = 1.0;
  while (residual(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) break;
  }

  double z = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = residual(z);
    if (f == 0.0) break;
    if (f > 0.0) {
      lo = z;
    } else {
      hi = z;
    }
    // Both residuals have derivative -density_z.
    const double step = f / density_z(z, mu);
    double next = z + step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-14 * z) {
      z = next;
      break;
    }
    z = next;
  }
  return y_from_z(z, mu);
}

double sample(UnitLindleyParam p, Rng& rng) {
  const double mu = p.mu();
  // Lindley(rate) is Exp(rate) with probability rate / (1 + rate) = 1 - mu and
  // Gamma(2, rate) otherwise; z = rate * X removes the rate.
  double z = rng.exponential();
  if (rng.uniform() >= 1.0 - mu) z += rng.exponential();
  const double y = y_from_z(z, mu);
  if (y >= 1.0) return std::nextafter(1.0, 0.0);
  return y;
}

double odds_mean(UnitLindleyParam p) {
  const double mu = p.mu();
  return (mu * mu + mu) / (1.0 - mu);
}

}  // namespace ularma
