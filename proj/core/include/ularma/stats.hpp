#pragma once

#include <span>
#include <vector>

namespace ularma::stats {

/// Standard normal distribution function.
[[nodiscard]] double normal_cdf(double x);

/// Standard normal upper tail 1 - Phi(x), accurate for large x.
[[nodiscard]] double normal_sf(double x);

/// Standard normal quantile; p must lie in (0, 1).
[[nodiscard]] double normal_quantile(double p);

/// P(K > lambda) for the limiting Kolmogorov distribution K.
[[nodiscard]] double kolmogorov_sf(double lambda);

/// Lilliefors p-value for a KS distance `d` computed on n values standardized
/// by their own mean and sd. Dallal-Wilkinson approximation below 0.1, Stephens'
/// modified-statistic polynomials above. Accurate to about two digits.
[[nodiscard]] double lilliefors_p(double d, std::size_t n);

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be in ascending order.
[[nodiscard]] double quantile_type7(std::span<const double> sorted, double prob);

[[nodiscard]] double mean(std::span<const double> x);
[[nodiscard]] double median(std::vector<double> x);
/// Sample standard deviation (n - 1 denominator).
[[nodiscard]] double stddev(std::span<const double> x);

}  // namespace ularma::stats
