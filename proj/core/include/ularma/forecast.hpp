#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ularma/estimation.hpp"

namespace ularma {

struct ForecastResult {
  std::size_t horizon = 0;
  /// mu_hat_{n+1..n+h}.
  std::vector<double> point;
  /// Bootstrap bounds; empty for point-only forecasts.
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t b_samples = 0;
  double delta = 0.0;
};

/// h-step point forecasts: the filter continued past n with Y_t = mu_t and
/// r_t = 0. `new_x` holds the h future covariate rows and is required iff r > 0.
[[nodiscard]] std::vector<double> forecast_point(const FittedModel& fit, const SeriesData& data,
                                                 std::size_t h, const RowMatrix& new_x = {});

/// B x h matrix of simulated future paths. Path m draws from
/// Rng::stream(seed, m), so the result does not depend on `jobs`.
[[nodiscard]] RowMatrix bootstrap_paths(const FittedModel& fit, const SeriesData& data,
                                        std::size_t h, std::size_t B, std::uint64_t seed,
                                        const RowMatrix& new_x = {}, std::size_t jobs = 1);

/// Point forecasts plus per-horizon delta/2 and 1 - delta/2 type-7 quantiles of
/// B bootstrap paths. Requires B >= 50.
[[nodiscard]] ForecastResult bootstrap_pi(const FittedModel& fit, const SeriesData& data,
                                          std::size_t h, std::size_t B, double delta,
                                          std::uint64_t seed, const RowMatrix& new_x = {},
                                          std::size_t jobs = 1);

}  // namespace ularma
