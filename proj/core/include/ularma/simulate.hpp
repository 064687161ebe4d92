#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ularma/diagnostics.hpp"
#include "ularma/estimation.hpp"
#include "ularma/random.hpp"

namespace ularma {

enum class CovariateRule { none, sinusoid };

struct Scenario {
  ModelSpec spec;
  ParamVector gamma_true;
  std::size_t n = 500;
  std::size_t burnin = 100;
  CovariateRule covariate_rule = CovariateRule::none;
  std::size_t n_replicas = 100;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

/// x_t = sin(pi t / 50) for t = -burnin + 1, ..., n, as an (n + burnin) x 1 matrix.
[[nodiscard]] RowMatrix sinusoid_covariate(std::size_t n, std::size_t burnin);

/// Covariates over the burn-in and sample span for a scenario's rule.
[[nodiscard]] RowMatrix scenario_covariates(const Scenario& scn);

struct SimulatedPath {
  /// Retained observations (burn-in removed) with their covariate rows.
  SeriesData data;
  /// mu_t and eta_t used to draw each retained y_t.
  std::vector<double> mu;
  std::vector<double> eta;
};

/**
 * Draws y_t ~ UL(mu_t) with mu_t from the model recursion, starting from the
 * pre-sample rule at the first burn-in step. `X` has n + burnin rows (ignored
 * when r = 0). Throws std::runtime_error if eta becomes non-finite.
 */
[[nodiscard]] SimulatedPath simulate_path(const ModelSpec& spec, const ParamVector& gamma,
                                          std::size_t n, std::size_t burnin, const RowMatrix& X,
                                          Rng& rng);

/// One replica of a scenario, drawn from Rng::stream(seed, replica).
[[nodiscard]] SimulatedPath simulate_replica(const Scenario& scn, std::size_t replica);

struct CoefSummary {
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
};

struct PointMcSummary {
  std::vector<std::string> names;
  std::vector<double> truth;
  /// Over every replica whose fit returned an estimate.
  std::vector<CoefSummary> all;
  /// Over converged replicas only.
  std::vector<CoefSummary> converged_only;
  std::size_t replicas = 0;
  std::size_t n_converged = 0;
  /// Replicas whose simulation or fit threw.
  std::size_t n_failed = 0;
  /// Row m holds the free-coordinate estimate of replica m (NaN if failed).
  RowMatrix estimates;
  std::vector<std::uint8_t> converged;
};

[[nodiscard]] PointMcSummary run_point_mc(const Scenario& scn, std::size_t jobs = 1,
                                          const FitOptions& fit_opts = {});

enum class GofTest { dl_cp, dl_kp, ks_normality };

/// "DL-Cp", "DL-KS", "KS".
[[nodiscard]] std::string to_string(GofTest test);
[[nodiscard]] GofTest parse_gof_test(const std::string& name);

struct GofMcOptions {
  double level = 0.05;
  std::size_t dl_bootstrap = 500;
  bool drop_first = true;
};

struct GofMcSummary {
  std::vector<GofTest> tests;
  std::vector<double> rejection_rate;
  std::vector<std::size_t> rejections;
  /// Replicas that produced residuals (simulation and fit did not throw).
  std::size_t evaluated = 0;
  std::size_t replicas = 0;
};

[[nodiscard]] GofMcSummary run_gof_mc(const Scenario& scn, const std::vector<GofTest>& tests,
                                      std::size_t jobs = 1, const GofMcOptions& opts = {});

}  // namespace ularma
