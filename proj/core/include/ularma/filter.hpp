#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ularma/model.hpp"

namespace ularma {

/// Per-time output of the systematic-component recursion.
struct FilterState {
  std::vector<double> eta;
  std::vector<double> mu;
  /// r_t = g(y_t) - g(mu_t).
  std::vector<double> resid_r;
  /// 1 where eta_t fell outside eta_bounds and mu_t was saturated.
  std::vector<std::uint8_t> saturated;
  /// False when eta became non-finite; later entries are NaN.
  bool finite = true;

  [[nodiscard]] bool any_saturated() const;
};

/// Derivative quantities of the partial score U = D' T h.
struct DerivMatrices {
  /// n x (1 + r + p + q), [D]_{t,j} = d eta_t / d gamma_j (full coordinates).
  RowMatrix D;
  /// 1 / g'(mu_t); zero where mu_t is saturated.
  std::vector<double> T_diag;
  /// d l_t / d mu_t.
  std::vector<double> h;
};

/**
 * Running state of the linear predictor
 *   eta_t = alpha + x_t'beta + sum_i phi_i [g(Y_{t-i}) - x_{t-i}'beta] + sum_j theta_j r_{t-j}.
 *
 * Holds only the last p autoregressive brackets and last q errors. Pre-sample
 * brackets start at -xbar'beta (g(Y) = 0, xbar the mean of the first p
 * covariate rows) and pre-sample errors at zero. Shared by the filter, the
 * simulator and the forecaster so all three run the identical recursion.
 */
class LinearPredictor {
 public:
  /// `presample_x` has r entries (ignored when p = 0).
  LinearPredictor(const ModelSpec& spec, const ParamVector& gamma,
                  std::span<const double> presample_x);

  /// Predictor seeded with the pre-sample rule for the covariate matrix X.
  [[nodiscard]] static LinearPredictor for_series(const ModelSpec& spec, const ParamVector& gamma,
                                                  const RowMatrix& X);

  /// x'beta for one covariate row.
  [[nodiscard]] double xbeta(std::span<const double> x_row) const;
  /// eta for the next time point given its covariate row.
  [[nodiscard]] double next_eta(std::span<const double> x_row) const;
  /// Appends g(Y_t) and r_t for the time point whose covariate row is x_row.
  void push(double g_y, std::span<const double> x_row, double r);

 private:
  double alpha_;
  std::vector<double> beta_;
  std::vector<double> phi_;
  std::vector<double> theta_;
  std::vector<double> ar_lags_;  // [0] is lag 1
  std::vector<double> ma_lags_;
};

/// Row t of X as a span (empty when r = 0).
[[nodiscard]] inline std::span<const double> row_span(const RowMatrix& X, Eigen::Index t) {
  if (X.cols() == 0) return {};
  return {X.data() + t * X.cols(), static_cast<std::size_t>(X.cols())};
}

/// Mean of the first min(p, n) rows of X; the pre-sample covariate value.
[[nodiscard]] std::vector<double> presample_covariates(const RowMatrix& X, std::size_t p);

/// Runs the recursion over the observed sample.
[[nodiscard]] FilterState filter_forward(const ModelSpec& spec, const ParamVector& gamma,
                                         const SeriesData& data);

/// Derivative recursions for D, plus T and h, from a filter_forward result.
[[nodiscard]] DerivMatrices deriv_recursions(const ModelSpec& spec, const ParamVector& gamma,
                                             const SeriesData& data, const FilterState& fs);

}  // namespace ularma
