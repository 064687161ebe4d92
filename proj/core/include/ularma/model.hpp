#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ularma/links.hpp"

namespace ularma {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/**
 * Orders and link of a ULARMA(p, q) model with r covariates.
 *
 * Coefficients are laid out as (alpha, beta_1..beta_r, phi_1..phi_p,
 * theta_1..theta_q). `free_mask` marks which of them are estimated; the rest
 * are held at zero.
 */
struct ModelSpec {
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t r = 0;
  Link link = Link::logit;
  std::vector<bool> free_mask;

  /// Spec with every coefficient free.
  [[nodiscard]] static ModelSpec make(std::size_t p, std::size_t q, std::size_t r = 0,
                                      Link link = Link::logit);

  [[nodiscard]] std::size_t n_coef() const noexcept { return 1 + r + p + q; }
  [[nodiscard]] std::size_t n_free() const;
  /// Full-vector indices of the free coefficients, ascending.
  [[nodiscard]] std::vector<std::size_t> free_indices() const;
  [[nodiscard]] bool is_free(std::size_t j) const { return free_mask.at(j); }

  static constexpr std::size_t index_alpha() noexcept { return 0; }
  [[nodiscard]] std::size_t index_beta(std::size_t l) const noexcept { return 1 + l; }
  [[nodiscard]] std::size_t index_phi(std::size_t k) const noexcept { return 1 + r + k; }
  [[nodiscard]] std::size_t index_theta(std::size_t s) const noexcept { return 1 + r + p + s; }

  /// "alpha", "beta_1", "phi_3", "theta_2", ... (1-based lags).
  [[nodiscard]] std::string coef_name(std::size_t j) const;
  /// Inverse of coef_name; throws std::invalid_argument for unknown names.
  [[nodiscard]] std::size_t coef_index(const std::string& name) const;

  /// Throws std::invalid_argument if the mask length disagrees with the orders.
  void validate() const;
};

/// Coefficient vector gamma = (alpha, beta, phi, theta).
struct ParamVector {
  double alpha = 0.0;
  std::vector<double> beta;
  std::vector<double> phi;
  std::vector<double> theta;

  [[nodiscard]] static ParamVector zeros(const ModelSpec& spec);
  [[nodiscard]] static ParamVector from_flat(const ModelSpec& spec, std::span<const double> flat);

  [[nodiscard]] std::vector<double> flat() const;
  /// Copy with coefficients outside ModelSpec::free_mask set to zero.
  [[nodiscard]] ParamVector masked(const ModelSpec& spec) const;
  /// Throws std::invalid_argument on dimension mismatch with `spec`.
  void check_dims(const ModelSpec& spec) const;
};

/// Observed series y_1..y_n in (0, 1) with an n x r covariate matrix.
struct SeriesData {
  std::vector<double> y;
  RowMatrix X;

  [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
  [[nodiscard]] std::size_t n_covariates() const noexcept {
    return static_cast<std::size_t>(X.cols());
  }

  /// Series without covariates.
  [[nodiscard]] static SeriesData from_values(std::vector<double> y);

  /// Throws std::invalid_argument on boundary values or shape mismatch.
  void validate() const;
  /// Same, and additionally checks the covariate count against `spec.r`.
  void validate(const ModelSpec& spec) const;
};

}  // namespace ularma
