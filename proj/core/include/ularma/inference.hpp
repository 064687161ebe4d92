#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ularma/estimation.hpp"

namespace ularma {

struct WaldResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t coefficient_index = 0;
  double null_value = 0.0;
};

/// z = (gamma_hat_j - gamma_star) / sqrt([K_n^{-1}]_jj) with a two-sided normal
/// p-value. `j` is a full-coordinate index. Throws std::domain_error if K_n is
/// singular and std::invalid_argument if j is fixed or out of range.
[[nodiscard]] WaldResult wald_test(const FittedModel& fit, std::size_t j, double gamma_star = 0.0);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// gamma_hat_j -/+ z_{1-delta/2} * se_j for every full coordinate; fixed
/// coefficients get the degenerate interval [0, 0]. delta is the miscoverage.
[[nodiscard]] std::vector<Interval> conf_int_params(const FittedModel& fit, double delta);

enum class MuIntervalScaling {
  /// Var(mu_hat_t) = Z'K_n^{-1}Z / g'(mu_t)^2.
  delta_method,
  /// Additionally divides the variance by n.
  literal_paper,
};

/// Interval for the in-sample conditional mean mu_t, t in [1, n], with Z the
/// t-th row of D over the free coordinates. Intersected with [0, 1].
[[nodiscard]] Interval conf_int_mu(const FittedModel& fit, const SeriesData& data, std::size_t t,
                                   double delta,
                                   MuIntervalScaling scaling = MuIntervalScaling::delta_method);

struct StepwiseOptions {
  /// Backward phase fixes the worst coefficient while its p-value exceeds this.
  double drop = 0.15;
  /// Forward phase re-admits an excluded coefficient whose p-value is below this.
  double add = 0.10;
  bool keep_intercept = true;
  int max_rounds = 20;
  FitOptions fit;
};

struct SelectionEvent {
  enum class Action { drop, add, rollback };
  Action action = Action::drop;
  std::size_t index = 0;
  std::string name;
  double p_value = 0.0;

  /// "drop phi_3 p=0.4521"
  [[nodiscard]] std::string to_string() const;
};

struct SelectionResult {
  FittedModel model;
  std::vector<SelectionEvent> trace;
  int iterations = 0;
  bool hit_cycle_guard = false;
};

/**
 * Bidirectional Wald-based selection starting from the full
 * ULARMA(p_max, q_max) with every covariate in `data`.
 *
 * Backward steps fix one coefficient at a time (largest p-value above `drop`)
 * and refit; the forward step refits each excluded coefficient in turn and
 * re-admits the one with the smallest p-value below `add`. The two alternate
 * until neither changes the model. A refit that fails to converge is rolled
 * back and the coefficient is frozen in its previous state.
 */
[[nodiscard]] SelectionResult stepwise_select(const SeriesData& data, std::size_t p_max,
                                              std::size_t q_max, Link link,
                                              const StepwiseOptions& opts = {});

}  // namespace ularma
