#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ularma/filter.hpp"
#include "ularma/model.hpp"

namespace ularma {

struct FitOptions {
  int max_iterations = 1000;
  /// Relative log-likelihood change between accepted steps.
  double rel_tol = 1e-8;
  /// Max-norm of the partial score at convergence.
  double score_tol = 1e-4;
  /// Restart with Nelder-Mead (then polish with L-BFGS) if L-BFGS fails.
  bool fallback_enabled = true;
  std::optional<ParamVector> start_override;
};

struct InfoCriteria {
  double aic = 0.0;
  double bic = 0.0;
  double hqc = 0.0;
};

/// Partial maximum likelihood fit and the quantities evaluated at its optimum.
struct FittedModel {
  ModelSpec spec;
  ParamVector gamma_hat;
  double loglik = 0.0;
  /// Conditional information over the free coordinates.
  Eigen::MatrixXd K_n;
  /// Inverse of K_n; empty when K_n is not positive definite.
  Eigen::MatrixXd covariance;
  /// Per full coordinate; NaN for fixed coefficients or singular K_n.
  std::vector<double> std_err;
  std::vector<double> fitted_mu;
  std::vector<double> fitted_eta;
  std::vector<double> resid_r;
  bool converged = false;
  int iterations = 0;
  std::size_t n_obs = 0;
  InfoCriteria criteria;
  /// Saturation of mu_t was active somewhere at gamma_hat.
  bool clamp_active = false;
  std::string method;
  std::vector<std::string> warnings;
  /// Log-likelihood after each accepted optimizer step.
  std::vector<double> loglik_trace;

  [[nodiscard]] bool information_invertible() const { return covariance.size() > 0; }
};

/// Sum over t of the conditional log-density; -infinity if the recursion
/// produced non-finite values.
[[nodiscard]] double log_likelihood(const ModelSpec& spec, const ParamVector& gamma,
                                    const SeriesData& data);

/// Partial score D' T h over the free coordinates.
[[nodiscard]] Eigen::VectorXd score(const ModelSpec& spec, const ParamVector& gamma,
                                    const SeriesData& data);

/// Conditional information D' T E T D over the free coordinates.
[[nodiscard]] Eigen::MatrixXd cond_info(const ModelSpec& spec, const ParamVector& gamma,
                                        const SeriesData& data);

/// -E[d^2 l_t / d mu_t^2 | past] = (2 - (1 - mu)^2) / (mu^2 (1 - mu)^2).
[[nodiscard]] double expected_curvature(double mu);

/**
 * Least-squares start: g(y_t) regressed on 1, x_t and g(y_{t-1..t-p}) over the
 * free columns; theta starts at zero. Falls back to alpha = g(mean(y)) when the
 * design is singular or too short.
 */
[[nodiscard]] ParamVector start_values(const ModelSpec& spec, const SeriesData& data);

/// Maximizes the partial log-likelihood. Never throws on non-convergence; the
/// best point found is returned with converged = false.
[[nodiscard]] FittedModel fit(const ModelSpec& spec, const SeriesData& data,
                              const FitOptions& opts = {});

/// Builds a FittedModel at a given coefficient vector without optimizing
/// (e.g. a model loaded from disk). `converged` is copied through.
[[nodiscard]] FittedModel fitted_model_at(const ModelSpec& spec, const ParamVector& gamma,
                                          const SeriesData& data, bool converged = true);

[[nodiscard]] InfoCriteria information_criteria(double loglik, std::size_t k, std::size_t n);

/// Copies the free coordinates of gamma into a dense vector.
[[nodiscard]] Eigen::VectorXd free_coordinates(const ModelSpec& spec, const ParamVector& gamma);
/// Inverse of free_coordinates; fixed coefficients are zero.
[[nodiscard]] ParamVector from_free_coordinates(const ModelSpec& spec, const Eigen::VectorXd& x);

}  // namespace ularma
