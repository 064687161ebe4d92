#include "ularma/filter.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ularma/random.hpp"
#include "ularma/simulate.hpp"

using namespace ularma;

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

SeriesData toy_series(std::size_t n, std::size_t r, std::uint64_t seed) {
  Rng rng(seed);
  SeriesData d;
  d.y.resize(n);
  for (auto& v : d.y) v = 0.1 + 0.8 * rng.uniform();
  d.X = RowMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
  for (Eigen::Index i = 0; i < d.X.size(); ++i) d.X.data()[i] = rng.normal();
  return d;
}

}  // namespace

TEST(Filter, InterceptOnlyIsConstant) {
  const auto spec = ModelSpec::make(0, 0);
  ParamVector g = ParamVector::zeros(spec);
  g.alpha = 0.3;
  const auto fs = filter_forward(spec, g, toy_series(20, 0, 1));
  for (double mu : fs.mu) EXPECT_NEAR(mu, logistic(0.3), 1e-15);
}

TEST(Filter, HandTraceArma11) {
  const auto spec = ModelSpec::make(1, 1);
  ParamVector g = ParamVector::zeros(spec);
  g.alpha = 0.1;
  g.phi = {0.5};
  g.theta = {-0.3};
  const SeriesData d = SeriesData::from_values({0.6, 0.3, 0.8});
  const auto fs = filter_forward(spec, g, d);

  auto gl = [](double y) { return std::log(y / (1 - y)); };
  double eta1 = 0.1;  // g(Y_0) = 0, r_0 = 0
  double r1 = gl(0.6) - eta1;
  double eta2 = 0.1 + 0.5 * gl(0.6) - 0.3 * r1;
  double r2 = gl(0.3) - eta2;
  double eta3 = 0.1 + 0.5 * gl(0.3) - 0.3 * r2;
  EXPECT_NEAR(fs.eta[0], eta1, 1e-15);
  EXPECT_NEAR(fs.eta[1], eta2, 1e-15);
  EXPECT_NEAR(fs.eta[2], eta3, 1e-15);
  EXPECT_NEAR(fs.resid_r[2], gl(0.8) - eta3, 1e-15);
  EXPECT_NEAR(fs.mu[2], logistic(eta3), 1e-15);
}

TEST(Filter, PresampleUsesMeanOfFirstCovariateRows) {
  const auto spec = ModelSpec::make(2, 0, 1);
  ParamVector g = ParamVector::zeros(spec);
  g.beta = {0.7};
  g.phi = {0.4, 0.2};
  auto d = toy_series(5, 1, 3);
  const auto fs = filter_forward(spec, g, d);
  const double xbar = 0.5 * (d.X(0, 0) + d.X(1, 0));
  const double expected = 0.7 * d.X(0, 0) + 0.4 * (-0.7 * xbar) + 0.2 * (-0.7 * xbar);
  EXPECT_NEAR(fs.eta[0], expected, 1e-15);
  const double gy0 = std::log(d.y[0] / (1 - d.y[0]));
  const double expected1 = 0.7 * d.X(1, 0) + 0.4 * (gy0 - 0.7 * d.X(0, 0)) + 0.2 * (-0.7 * xbar);
  EXPECT_NEAR(fs.eta[1], expected1, 1e-15);
}

TEST(Filter, DerivativeRowsMatchFiniteDifferences) {
  for (Link link : {Link::logit, Link::loglog, Link::cloglog}) {
    const auto spec = ModelSpec::make(2, 2, 1, link);
    const ParamVector g = ParamVector::from_flat(spec, std::vector<double>{0.2, 0.3, 0.25, -0.1, 0.2, 0.15});
    const auto d = toy_series(40, 1, 11);
    const auto fs = filter_forward(spec, g, d);
    ASSERT_FALSE(fs.any_saturated());
    const auto dm = deriv_recursions(spec, g, d, fs);
    const auto flat = g.flat();
    for (std::size_t j = 0; j < flat.size(); ++j) {
      auto plus = flat;
      auto minus = flat;
      const double h = 1e-6;
      plus[j] += h;
      minus[j] -= h;
      const auto fp = filter_forward(spec, ParamVector::from_flat(spec, plus), d);
      const auto fm = filter_forward(spec, ParamVector::from_flat(spec, minus), d);
      for (std::size_t t = 0; t < d.size(); ++t) {
        const double fd = (fp.eta[t] - fm.eta[t]) / (2 * h);
        EXPECT_NEAR(dm.D(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)), fd, 1e-7)
            << "j=" << j << " t=" << t;
      }
    }
  }
}

TEST(Filter, NonFiniteEtaIsReported) {
  const auto spec = ModelSpec::make(1, 0);
  ParamVector g = ParamVector::zeros(spec);
  g.phi = {1e308};
  const auto d = SeriesData::from_values({0.5, 0.95, 0.5, 0.5});
  const auto fs = filter_forward(spec, g, d);
  EXPECT_FALSE(fs.finite);
  EXPECT_THROW((void)deriv_recursions(spec, g, d, fs), std::domain_error);
}

TEST(Filter, SaturationIsFlagged) {
  const auto spec = ModelSpec::make(0, 0);
  ParamVector g = ParamVector::zeros(spec);
  g.alpha = 40.0;
  const auto d = toy_series(5, 0, 2);
  const auto fs = filter_forward(spec, g, d);
  EXPECT_TRUE(fs.any_saturated());
  EXPECT_EQ(fs.mu[0], 1.0 - kMuEpsilon);
  const auto dm = deriv_recursions(spec, g, d, fs);
  EXPECT_EQ(dm.T_diag[0], 0.0);
}

TEST(Filter, RejectsMismatchedInputs) {
  const auto spec = ModelSpec::make(1, 0, 1);
  const auto g = ParamVector::zeros(spec);
  EXPECT_THROW((void)filter_forward(spec, g, toy_series(10, 0, 1)), std::invalid_argument);
  auto bad = toy_series(10, 1, 1);
  bad.y[3] = 1.0;
  EXPECT_THROW((void)filter_forward(spec, g, bad), std::invalid_argument);
}
