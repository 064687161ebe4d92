#include "ularma/estimation.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ularma/simulate.hpp"

using namespace ularma;

namespace {

SimulatedPath simulate(const ModelSpec& spec, const ParamVector& g, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const RowMatrix X = spec.r > 0 ? sinusoid_covariate(n, 100) : RowMatrix(static_cast<Eigen::Index>(n + 100), 0);
  return simulate_path(spec, g, n, 100, X, rng);
}

ParamVector arma11_truth(const ModelSpec& spec) {
  return ParamVector::from_flat(spec, std::vector<double>{0.5, 0.5, 0.2, -0.4});
}

}  // namespace

TEST(Estimation, ExpectedCurvature) {
  EXPECT_NEAR(expected_curvature(0.5), 28.0, 1e-12);
  const double mu = 0.2;
  EXPECT_NEAR(expected_curvature(mu), (2 - 0.64) / (0.04 * 0.64), 1e-12);
}

TEST(Estimation, InformationCriteria) {
  const auto ic = information_criteria(100.0, 4, 500);
  EXPECT_DOUBLE_EQ(ic.aic, -200.0 + 8.0);
  EXPECT_DOUBLE_EQ(ic.bic, -200.0 + 4.0 * std::log(500.0));
  EXPECT_DOUBLE_EQ(ic.hqc, -200.0 + 8.0 * std::log(std::log(500.0)));
}

TEST(Estimation, LogLikelihoodSumsLogDensities) {
  const auto spec = ModelSpec::make(1, 1, 1);
  const auto g = arma11_truth(spec);
  const auto path = simulate(spec, g, 50, 3);
  const auto fs = filter_forward(spec, g, path.data);
  double ll = 0.0;
  for (std::size_t t = 0; t < 50; ++t) ll += std::log(oracle::ul_pdf(path.data.y[t], fs.mu[t]));
  EXPECT_NEAR(log_likelihood(spec, g, path.data), ll, 1e-9 * std::abs(ll));
}

TEST(Estimation, ScoreMatchesFiniteDifferences) {
  for (Link link : {Link::logit, Link::loglog, Link::cloglog}) {
    const auto spec = ModelSpec::make(1, 1, 1, link);
    const auto g = arma11_truth(spec);
    const auto path = simulate(spec, g, 300, 8);
    const auto at = ParamVector::from_flat(spec, std::vector<double>{0.45, 0.55, 0.25, -0.35});
    const auto u = score(spec, at, path.data);
    const auto fd = oracle::fd_gradient(
        [&](const Eigen::VectorXd& x) { return log_likelihood(spec, from_free_coordinates(spec, x), path.data); },
        free_coordinates(spec, at));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      EXPECT_NEAR(u(i), fd(i), 1e-5 * std::max(1.0, std::abs(fd(i)))) << to_string(link) << " i=" << i;
    }
  }
}

TEST(Estimation, FreeCoordinatesSkipFixed) {
  auto spec = ModelSpec::make(2, 1);
  spec.free_mask[spec.index_phi(0)] = false;
  const auto g = ParamVector::from_flat(spec, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  const auto x = free_coordinates(spec, g);
  ASSERT_EQ(x.size(), 3);
  EXPECT_EQ(x(1), 0.3);
  const auto back = from_free_coordinates(spec, x);
  EXPECT_EQ(back.phi[0], 0.0);
  EXPECT_EQ(back.phi[1], 0.3);
}

TEST(Estimation, FitRecoversTruth) {
  const auto spec = ModelSpec::make(1, 1, 1);
  const auto g = arma11_truth(spec);
  const auto path = simulate(spec, g, 1500, 21);
  const auto fm = fit(spec, path.data);
  ASSERT_TRUE(fm.converged);
  ASSERT_TRUE(fm.information_invertible());
  const auto est = fm.gamma_hat.flat();
  const auto truth = g.flat();
  for (std::size_t j = 0; j < truth.size(); ++j) {
    EXPECT_NEAR(est[j], truth[j], 4.0 * fm.std_err[j]) << spec.coef_name(j);
  }
  EXPECT_LT(score(spec, fm.gamma_hat, path.data).cwiseAbs().maxCoeff(), 1e-4);
  for (std::size_t i = 1; i < fm.loglik_trace.size(); ++i) {
    EXPECT_GE(fm.loglik_trace[i], fm.loglik_trace[i - 1] - 1e-9);
  }
  EXPECT_NEAR(fm.criteria.aic, -2 * fm.loglik + 8, 1e-9);
}

TEST(Estimation, MaskedCoefficientStaysZero) {
  auto spec = ModelSpec::make(1, 1, 1);
  const auto path = simulate(spec, arma11_truth(spec), 400, 4);
  spec.free_mask[spec.index_theta(0)] = false;
  const auto fm = fit(spec, path.data);
  EXPECT_EQ(fm.gamma_hat.theta[0], 0.0);
  EXPECT_TRUE(std::isnan(fm.std_err[spec.index_theta(0)]));
  EXPECT_EQ(fm.K_n.rows(), 3);
}

TEST(Estimation, StartValuesAreFinite) {
  const auto spec = ModelSpec::make(2, 2, 1);
  const auto path = simulate(ModelSpec::make(1, 1, 1), arma11_truth(ModelSpec::make(1, 1, 1)), 200, 6);
  const auto s = start_values(spec, path.data);
  EXPECT_TRUE(std::isfinite(log_likelihood(spec, s, path.data)));
  EXPECT_EQ(s.theta[0], 0.0);
}

TEST(Estimation, RejectsTooShortSeries) {
  const auto spec = ModelSpec::make(2, 2);
  const auto d = SeriesData::from_values({0.2, 0.3, 0.4, 0.5, 0.6});
  EXPECT_THROW((void)fit(spec, d), std::invalid_argument);
}

TEST(Estimation, FittedModelAtMatchesFit) {
  const auto spec = ModelSpec::make(1, 1, 1);
  const auto path = simulate(spec, arma11_truth(spec), 300, 9);
  const auto fm = fit(spec, path.data);
  const auto again = fitted_model_at(spec, fm.gamma_hat, path.data);
  EXPECT_EQ(again.loglik, fm.loglik);
  EXPECT_EQ(again.std_err, fm.std_err);
}
