#pragma once

#include "ularma/random.hpp"

namespace ularma {

/// Values within this distance of 0 or 1 are rejected by the checked
/// distribution functions; clamping is left to callers.
inline constexpr double kSupportGuard = 1e-12;

/**
 * Mean parameter of the Unit-Lindley law on (0, 1).
 *
 * The law is the image of a Lindley(rate) variable X under X / (1 + X) with
 * rate = (1 - mu) / mu, parameterized so that E(Y) = mu.
 */
class UnitLindleyParam {
 public:
  /// Throws std::domain_error unless mu lies strictly inside (0, 1).
  explicit UnitLindleyParam(double mu);

  [[nodiscard]] double mu() const noexcept { return mu_; }
  /// Rate of the underlying Lindley variable, (1 - mu) / mu.
  [[nodiscard]] double lindley_rate() const noexcept { return (1.0 - mu_) / mu_; }

 private:
  double mu_;
};

/// Density. Throws std::domain_error if y is not inside (0, 1).
[[nodiscard]] double pdf(double y, UnitLindleyParam p);
[[nodiscard]] double log_pdf(double y, UnitLindleyParam p);

/// Distribution function on [0, 1).
[[nodiscard]] double cdf(double y, UnitLindleyParam p);
/// Survival function 1 - cdf, computed without cancellation in the upper tail.
[[nodiscard]] double ccdf(double y, UnitLindleyParam p);

/// Inverse of cdf for u in (0, 1).
[[nodiscard]] double quantile(double u, UnitLindleyParam p);

/// One draw via the exponential / Erlang-2 mixture representation of the
/// Lindley law. The result lies strictly inside (0, 1).
[[nodiscard]] double sample(UnitLindleyParam p, Rng& rng);

/// E[Y / (1 - Y)] = (mu^2 + mu) / (1 - mu).
[[nodiscard]] double odds_mean(UnitLindleyParam p);

}  // namespace ularma
