#include "ularma/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "ularma/random.hpp"
#include "ularma/simulate.hpp"
#include "ularma/stats.hpp"
#include "ularma/unit_lindley.hpp"

using namespace ularma;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

std::vector<double> ar1(std::size_t n, double rho, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  double prev = 0.0;
  for (auto& x : v) {
    prev = rho * prev + rng.normal();
    x = prev;
  }
  return v;
}

}  // namespace

TEST(Accuracy, WorkedExample) {
  const std::vector<double> a = {0.2, 0.4};
  const std::vector<double> p = {0.2, 0.1};
  const auto m = accuracy_metrics(a, p);
  EXPECT_NEAR(m.rmse, std::sqrt(0.09 / 2.0), 1e-15);
  EXPECT_NEAR(m.mape, 0.375, 1e-15);
  EXPECT_EQ(m.mda, 0.0);
}

TEST(Accuracy, PerfectForecast) {
  const std::vector<double> a = {0.2, 0.4, 0.3, 0.35};
  const auto m = accuracy_metrics(a, a);
  EXPECT_EQ(m.rmse, 0.0);
  EXPECT_EQ(m.mape, 0.0);
  EXPECT_EQ(m.mda, 1.0);
}

TEST(Accuracy, ReversalKeepsErrorMetrics) {
  const std::vector<double> a = {0.2, 0.4, 0.3, 0.35, 0.5};
  const std::vector<double> p = {0.25, 0.3, 0.32, 0.4, 0.45};
  const std::vector<double> ar(a.rbegin(), a.rend());
  const std::vector<double> pr(p.rbegin(), p.rend());
  const auto m = accuracy_metrics(a, p);
  const auto mr = accuracy_metrics(ar, pr);
  EXPECT_NEAR(m.rmse, mr.rmse, 1e-15);
  EXPECT_NEAR(m.mape, mr.mape, 1e-15);
  EXPECT_GE(mr.mda, 0.0);
  EXPECT_LE(mr.mda, 1.0);
}

TEST(Accuracy, EdgeCases) {
  const std::vector<double> one = {0.5};
  EXPECT_TRUE(std::isnan(accuracy_metrics(one, one).mda));
  const std::vector<double> z = {0.0, 0.5};
  EXPECT_THROW((void)accuracy_metrics(z, z), std::domain_error);
  const std::vector<double> shorter = {0.5};
  EXPECT_THROW((void)accuracy_metrics(z, shorter), std::invalid_argument);
}

TEST(Srcp, Examples) {
  const std::vector<double> half = {0.5};
  EXPECT_NEAR(srcp(half).value, 2.0, 1e-14);
  EXPECT_FALSE(srcp(half).near_unit_root);
  const std::vector<double> unit = {1.0};
  EXPECT_NEAR(srcp(unit).value, 1.0, 1e-14);
  EXPECT_TRUE(srcp(unit).near_unit_root);
  const std::vector<double> two = {0.2, -0.4};
  const auto s = srcp(two);
  EXPECT_LT(std::abs(ar_polynomial(two, s.root)), 1e-10);
  EXPECT_NEAR(s.value, std::sqrt(1.0 / 0.4), 1e-12);  // complex pair, |z|^2 = 1 / 0.4
  const std::vector<double> trailing = {0.5, 0.0, 0.0};
  EXPECT_NEAR(srcp(trailing).value, 2.0, 1e-14);
  const std::vector<double> zeros = {0.0, 0.0};
  EXPECT_THROW((void)srcp(zeros), std::invalid_argument);
}

TEST(Ks, PerfectNormalScores) {
  const std::size_t n = 200;
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = stats::normal_quantile((i + 0.5) / n);
  EXPECT_GT(ks_normality(e, KsNull::standard).p_value, 0.99);
  EXPECT_GT(ks_normality(e, KsNull::estimated).p_value, 0.99);
}

TEST(Ks, UniformIsRejected) {
  Rng rng(4);
  std::vector<double> e(500);
  for (auto& x : e) x = rng.uniform();
  EXPECT_LT(ks_normality(e, KsNull::standard).p_value, 0.01);
  EXPECT_LT(ks_normality(e, KsNull::estimated).p_value, 0.01);
}

TEST(Ks, EstimatedNullIgnoresLocationAndScale) {
  auto e = normals(300, 17);
  for (auto& x : e) x = 3.0 + 0.25 * x;
  EXPECT_LT(ks_normality(e, KsNull::standard).p_value, 1e-6);
  EXPECT_GT(ks_normality(e, KsNull::estimated).p_value, 0.05);
}

TEST(Ks, LillieforsTableValues) {
  // Asymptotic critical values c / sqrt(n) for levels 0.20, 0.05, 0.01.
  const double n = 500.0;
  EXPECT_NEAR(stats::lilliefors_p(0.736 / std::sqrt(n), 500), 0.20, 0.03);
  EXPECT_NEAR(stats::lilliefors_p(0.886 / std::sqrt(n), 500), 0.05, 0.012);
  EXPECT_NEAR(stats::lilliefors_p(1.031 / std::sqrt(n), 500), 0.01, 0.004);
  EXPECT_NEAR(stats::lilliefors_p(0.190, 20), 0.05, 0.012);
  EXPECT_DOUBLE_EQ(stats::lilliefors_p(0.0, 50), 1.0);
}

TEST(Ks, SizeOnNormalInput) {
  for (auto null : {KsNull::standard, KsNull::estimated}) {
    int rej = 0;
    for (int m = 0; m < 500; ++m) rej += ks_normality(normals(200, 1000 + m), null).p_value < 0.05 ? 1 : 0;
    EXPECT_NEAR(rej / 500.0, 0.05, 0.02);
  }
  EXPECT_THROW((void)ks_normality(normals(7, 1)), std::invalid_argument);
  const std::vector<double> flat(20, 0.3);
  EXPECT_THROW((void)ks_normality(flat), std::domain_error);
}

// On a true martingale difference the bootstrap p-value is close to uniform:
// an upper bound on the size alone would not catch an inflated bootstrap law.
TEST(Dl, CalibratedOnIidNoise) {
  DlOptions o;
  int rej_cp = 0;
  int rej_kp = 0;
  double sum_p = 0.0;
  const int R = 300;
  for (int m = 0; m < R; ++m) {
    const auto e = normals(300, 5000 + m);
    o.seed = static_cast<std::uint64_t>(m);
    const double p_cp = dl_test(e, DlStatistic::cp, o).p_value;
    rej_cp += p_cp < 0.05 ? 1 : 0;
    sum_p += p_cp;
    rej_kp += dl_test(e, DlStatistic::kp, o).p_value < 0.05 ? 1 : 0;
  }
  EXPECT_NEAR(rej_cp / static_cast<double>(R), 0.05, 0.03);
  EXPECT_NEAR(rej_kp / static_cast<double>(R), 0.05, 0.03);
  EXPECT_NEAR(sum_p / R, 0.5, 0.05);
}

TEST(Dl, DetectsAutocorrelation) {
  DlOptions o;
  int rej = 0;
  const int R = 50;
  for (int m = 0; m < R; ++m) {
    o.seed = static_cast<std::uint64_t>(m);
    rej += dl_test(ar1(500, 0.8, 7000 + m), DlStatistic::cp, o).p_value < 0.05 ? 1 : 0;
  }
  EXPECT_GT(rej / static_cast<double>(R), 0.9);
}

TEST(Dl, TwoLagConditioningDetectsAutocorrelation) {
  DlOptions o;
  o.lags = 2;
  o.B = 200;
  o.multiplier = Multiplier::normal;
  EXPECT_LT(dl_test(ar1(300, 0.8, 12), DlStatistic::kp, o).p_value, 0.05);
  EXPECT_GT(dl_test(normals(300, 13), DlStatistic::kp, o).p_value, 0.0);
}

TEST(Dl, ScaleInvariant) {
  const auto e = ar1(200, 0.2, 3);
  std::vector<double> scaled(e);
  for (auto& x : scaled) x *= 37.5;
  for (auto stat : {DlStatistic::cp, DlStatistic::kp}) {
    const auto a = dl_test(e, stat);
    const auto b = dl_test(scaled, stat);
    EXPECT_NEAR(a.statistic, b.statistic, 1e-12 * a.statistic);
    EXPECT_EQ(a.p_value, b.p_value);
  }
}

TEST(Dl, TiesAreGrouped) {
  // Lagged values take only three distinct levels.
  std::vector<double> e(60);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<double>(i % 3) - 1.0 + 0.01 * (i % 7);
  EXPECT_NO_THROW((void)dl_test(e, DlStatistic::cp));
}

TEST(Dl, RejectsDegenerateInput) {
  EXPECT_THROW((void)dl_test(std::vector<double>(50, 1.0), DlStatistic::cp), std::domain_error);
  EXPECT_THROW((void)dl_test(normals(15, 1), DlStatistic::cp), std::invalid_argument);
  DlOptions o;
  o.B = 99;
  EXPECT_THROW((void)dl_test(normals(50, 1), DlStatistic::cp, o), std::invalid_argument);
}

TEST(Residuals, MedianGivesZeroAndLengthsFollowDropFirst) {
  const auto spec = ModelSpec::make(0, 0);
  ParamVector g = ParamVector::zeros(spec);
  g.alpha = 0.4;
  const double mu = 1.0 / (1.0 + std::exp(-0.4));
  const double med = quantile(0.5, UnitLindleyParam(mu));
  const auto data = SeriesData::from_values({0.3, med, 0.7});
  const auto fm = fitted_model_at(spec, g, data);
  const auto r = residuals(fm, data, false);
  ASSERT_EQ(r.quantile.size(), 3u);
  EXPECT_NEAR(r.quantile[1], 0.0, 1e-12);
  EXPECT_NEAR(r.simple[0], 0.3 - mu, 1e-15);
  EXPECT_EQ(residuals(fm, data, true).simple.size(), 2u);
}

TEST(Residuals, QuantileResidualsLookNormal) {
  Scenario scn;
  scn.spec = ModelSpec::make(1, 1, 1);
  scn.gamma_true = ParamVector::from_flat(scn.spec, std::vector<double>{0.5, 0.5, 0.2, -0.4});
  scn.covariate_rule = CovariateRule::sinusoid;
  int pass = 0;
  const int R = 200;
  for (int m = 0; m < R; ++m) {
    const auto path = simulate_replica(scn, static_cast<std::size_t>(m));
    const auto fm = fit(scn.spec, path.data);
    pass += ks_normality(residuals(fm, path.data, true).quantile).p_value >= 0.05 ? 1 : 0;
  }
  EXPECT_NEAR(pass / static_cast<double>(R), 0.95, 0.03);
}
