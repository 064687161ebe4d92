#include "ularma/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ularma/parallel.hpp"
#include "ularma/random.hpp"
#include "ularma/stats.hpp"
#include "ularma/unit_lindley.hpp"

namespace ularma {
namespace {

void check_future_x(const ModelSpec& spec, std::size_t h, const RowMatrix& new_x) {
  if (h < 1) throw std::invalid_argument("forecast: horizon must be >= 1");
  if (spec.r == 0) {
    if (new_x.size() != 0) {
      throw std::invalid_argument("forecast: future covariates given for a model without covariates");
    }
    return;
  }
  if (new_x.cols() != static_cast<Eigen::Index>(spec.r) ||
      new_x.rows() < static_cast<Eigen::Index>(h)) {
    throw std::invalid_argument("forecast: need an h x " + std::to_string(spec.r) +
                                " matrix of future covariates");
  }
  if (!new_x.allFinite()) throw std::invalid_argument("forecast: future covariates not finite");
}

/// Predictor after absorbing the observed sample, identical to filter_forward.
LinearPredictor predictor_after_sample(const FittedModel& fit, const SeriesData& data) {
  data.validate(fit.spec);
  const auto bounds = eta_bounds(fit.spec.link);
  auto lp = LinearPredictor::for_series(fit.spec, fit.gamma_hat, data.X);
  for (std::size_t t = 0; t < data.size(); ++t) {
    const auto x = row_span(data.X, static_cast<Eigen::Index>(t));
    const double eta = lp.next_eta(x);
    if (!std::isfinite(eta)) throw std::domain_error("forecast: in-sample recursion is not finite");
    const double g_y = link_apply(fit.spec.link, data.y[t]);
    lp.push(g_y, x, g_y - std::clamp(eta, bounds.lower, bounds.upper));
  }
  return lp;
}

}  // namespace

std::vector<double> forecast_point(const FittedModel& fit, const SeriesData& data, std::size_t h,
                                   const RowMatrix& new_x) {
  check_future_x(fit.spec, h, new_x);
  auto lp = predictor_after_sample(fit, data);
  std::vector<double> out(h);
  for (std::size_t k = 0; k < h; ++k) {
    const auto x = row_span(new_x, static_cast<Eigen::Index>(k));
    const double mu = link_inverse(fit.spec.link, lp.next_eta(x));
    out[k] = mu;
    lp.push(link_apply(fit.spec.link, mu), x, 0.0);
  }
  return out;
}

RowMatrix bootstrap_paths(const FittedModel& fit, const SeriesData& data, std::size_t h,
                          std::size_t B, std::uint64_t seed, const RowMatrix& new_x,
                          std::size_t jobs) {
  check_future_x(fit.spec, h, new_x);
  if (B < 1) throw std::invalid_argument("bootstrap_paths: B must be >= 1");
  const auto base = predictor_after_sample(fit, data);
  const auto bounds = eta_bounds(fit.spec.link);
  const Link link = fit.spec.link;

  RowMatrix paths(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(h));
  parallel_for(B, jobs, [&](std::size_t m) {
    auto rng = Rng::stream(seed, m);
    auto lp = base;
    for (std::size_t k = 0; k < h; ++k) {
      const auto x = row_span(new_x, static_cast<Eigen::Index>(k));
      const double eta = lp.next_eta(x);
      const double y = sample(UnitLindleyParam(link_inverse(link, eta)), rng);
      const double g_y = link_apply(link, y);
      paths(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = y;
      lp.push(g_y, x, g_y - std::clamp(eta, bounds.lower, bounds.upper));
    }
  });
  return paths;
}

ForecastResult bootstrap_pi(const FittedModel& fit, const SeriesData& data, std::size_t h,
                            std::size_t B, double delta, std::uint64_t seed,
                            const RowMatrix& new_x, std::size_t jobs) {
  if (B < 50) throw std::invalid_argument("bootstrap_pi: B must be >= 50");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bootstrap_pi: delta in (0, 1)");
  ForecastResult res;
  res.horizon = h;
  res.point = forecast_point(fit, data, h, new_x);
  res.b_samples = B;
  res.delta = delta;
  const RowMatrix paths = bootstrap_paths(fit, data, h, B, seed, new_x, jobs);
  res.lower.resize(h);
  res.upper.resize(h);
  std::vector<double> col(B);
  for (std::size_t k = 0; k < h; ++k) {
    for (std::size_t m = 0; m < B; ++m) {
      col[m] = paths(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
    }
    std::sort(col.begin(), col.end());
    res.lower[k] = stats::quantile_type7(col, delta / 2.0);
    res.upper[k] = stats::quantile_type7(col, 1.0 - delta / 2.0);
  }
  return res;
}

}  // namespace ularma
