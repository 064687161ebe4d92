#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ularma/estimation.hpp"

namespace ularma {

struct ResidualSet {
  /// y_t - mu_hat_t
  std::vector<double> simple;
  /// Phi^{-1}(F(y_t | mu_hat_t))
  std::vector<double> quantile;
  bool drop_first = false;
  /// Quantile residuals capped at +/-8 because F evaluated to 0 or 1.
  std::size_t capped = 0;
};

/// Magnitude assigned to quantile residuals whose CDF value is exactly 0 or 1.
inline constexpr double kQuantileResidualCap = 8.0;

[[nodiscard]] ResidualSet residuals(const FittedModel& fit, const SeriesData& data,
                                    bool drop_first);

enum class DlStatistic { cp, kp };
enum class Multiplier { mammen, normal };

struct DlOptions {
  std::size_t B = 500;
  /// Number of lagged residuals in the conditioning vector.
  std::size_t lags = 1;
  Multiplier multiplier = Multiplier::mammen;
  std::uint64_t seed = 0;
};

struct DlResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/**
 * Dominguez-Lobato test of the martingale difference hypothesis.
 *
 * Marks e_t - mean(e) are accumulated over {s : x_s <= x_t} with x_t the
 * vector of `lags` previous values (componentwise order). Cp is the
 * Cramer-von Mises and Kp the Kolmogorov-Smirnov functional of that process,
 * each scaled by the mark variance. The null distribution comes from a wild
 * bootstrap that multiplies the marks by i.i.d. Mammen or Normal weights while
 * holding the conditioning values fixed.
 *
 * Requires at least 20 values and B >= 100; throws std::domain_error for
 * zero-variance input.
 */
[[nodiscard]] DlResult dl_test(std::span<const double> e, DlStatistic statistic,
                               const DlOptions& opts = {});

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

enum class KsNull {
  /// Standardize by the sample mean and sd; Lilliefors p-value. Keeps its size
  /// on residuals of a fitted model, where the plain test almost never rejects.
  estimated,
  /// Compare with N(0, 1) directly; asymptotic Kolmogorov p-value.
  standard,
};

/// One-sample KS normality test. Requires at least 8 values.
[[nodiscard]] KsResult ks_normality(std::span<const double> e, KsNull null = KsNull::estimated);

struct AccuracyMetrics {
  double rmse = 0.0;
  /// Fraction, not percent.
  double mape = 0.0;
  /// Share of t >= 2 with sign(pred_t - actual_{t-1}) == sign(actual_t - actual_{t-1}).
  /// NaN for fewer than two points.
  double mda = 0.0;
};

[[nodiscard]] AccuracyMetrics accuracy_metrics(std::span<const double> actual,
                                               std::span<const double> predicted);

/// Rule-of-thumb threshold below which an AR root is reported as near-unit.
inline constexpr double kSrcpAdvisoryThreshold = 1.05;

struct SrcpResult {
  /// Smallest modulus among roots of 1 - phi_1 z - ... - phi_p z^p.
  double value = 0.0;
  std::complex<double> root;
  /// |polynomial(root)| after polishing.
  double residual = 0.0;
  bool near_unit_root = false;
};

/// Throws std::invalid_argument if every phi is zero.
[[nodiscard]] SrcpResult srcp(std::span<const double> phi);

/// Evaluates 1 - sum_i phi_i z^i.
[[nodiscard]] std::complex<double> ar_polynomial(std::span<const double> phi, std::complex<double> z);

}  // namespace ularma
