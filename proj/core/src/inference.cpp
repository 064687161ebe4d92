#include "ularma/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>

#include "ularma/stats.hpp"

namespace ularma {
namespace {

/// Position of full index j among the free coordinates.
std::size_t free_position(const ModelSpec& spec, std::size_t j) {
  const auto idx = spec.free_indices();
  const auto it = std::find(idx.begin(), idx.end(), j);
  if (it == idx.end()) {
    throw std::invalid_argument("coefficient " + spec.coef_name(j) + " is fixed");
  }
  return static_cast<std::size_t>(it - idx.begin());
}

void require_invertible(const FittedModel& fit) {
  if (!fit.information_invertible()) {
    throw std::domain_error("conditional information matrix is singular");
  }
}

double two_sided_z(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1]");
  }
  return delta == 1.0 ? 0.0 : stats::normal_quantile(1.0 - delta / 2.0);
}

std::optional<FittedModel> try_fit(const ModelSpec& spec, const SeriesData& data,
                                   const FitOptions& opts) {
  try {
    auto fm = fit(spec, data, opts);
    if (!fm.converged || !fm.information_invertible()) return std::nullopt;
    return fm;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

double wald_p(const FittedModel& fm, std::size_t j) { return wald_test(fm, j).p_value; }

}  // namespace

WaldResult wald_test(const FittedModel& fit, std::size_t j, double gamma_star) {
  if (j >= fit.spec.n_coef()) throw std::invalid_argument("wald_test: index out of range");
  const std::size_t pos = free_position(fit.spec, j);
  require_invertible(fit);
  const auto ip = static_cast<Eigen::Index>(pos);
  const double var = fit.covariance(ip, ip);
  if (!(var > 0.0)) throw std::domain_error("wald_test: non-positive variance");
  const double z = (fit.gamma_hat.flat()[j] - gamma_star) / std::sqrt(var);
  WaldResult w;
  w.statistic = z;
  w.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
  w.coefficient_index = j;
  w.null_value = gamma_star;
  return w;
}

std::vector<Interval> conf_int_params(const FittedModel& fit, double delta) {
  const double z = two_sided_z(delta);
  require_invertible(fit);
  const auto flat = fit.gamma_hat.flat();
  std::vector<Interval> out(flat.size(), Interval{0.0, 0.0});
  for (std::size_t j = 0; j < flat.size(); ++j) {
    if (!fit.spec.is_free(j)) continue;
    const double half = z * fit.std_err[j];
    out[j] = {flat[j] - half, flat[j] + half};
  }
  return out;
}

Interval conf_int_mu(const FittedModel& fit, const SeriesData& data, std::size_t t, double delta,
                     MuIntervalScaling scaling) {
  if (t < 1 || t > data.size()) throw std::invalid_argument("conf_int_mu: t outside [1, n]");
  const double z = two_sided_z(delta);
  require_invertible(fit);
  const auto fs = filter_forward(fit.spec, fit.gamma_hat, data);
  const auto dm = deriv_recursions(fit.spec, fit.gamma_hat, data, fs);
  const auto idx = fit.spec.free_indices();
  const auto row = static_cast<Eigen::Index>(t - 1);
  Eigen::VectorXd Z(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Z(static_cast<Eigen::Index>(i)) = dm.D(row, static_cast<Eigen::Index>(idx[i]));
  }
  const double mu = fs.mu[t - 1];
  const double gp = link_deriv(fit.spec.link, mu);
  double var = Z.dot(fit.covariance * Z) / (gp * gp);
  if (scaling == MuIntervalScaling::literal_paper) var /= static_cast<double>(data.size());
  // Saturated points have no sensitivity to gamma.
  if (fs.saturated[t - 1] != 0) var = 0.0;
  const double half = z * std::sqrt(std::max(var, 0.0));
  return {std::max(0.0, mu - half), std::min(1.0, mu + half)};
}

std::string SelectionEvent::to_string() const {
  const char* verb = action == Action::drop ? "drop" : action == Action::add ? "add" : "rollback";
  char buf[64];
  std::snprintf(buf, sizeof buf, " p=%.4f", p_value);
  return std::string(verb) + " " + name + buf;
}

SelectionResult stepwise_select(const SeriesData& data, std::size_t p_max, std::size_t q_max,
                                Link link, const StepwiseOptions& opts) {
  if (!(opts.drop > 0.0 && opts.drop < 1.0) || !(opts.add > 0.0 && opts.add < 1.0) ||
      opts.max_rounds < 1) {
    throw std::invalid_argument("stepwise_select: thresholds must lie in (0, 1), max_rounds >= 1");
  }
  ModelSpec spec = ModelSpec::make(p_max, q_max, data.n_covariates(), link);
  const int guard =
      2 * static_cast<int>(p_max + q_max + spec.r + 1) * opts.max_rounds;

  SelectionResult res;
  res.model = fit(spec, data, opts.fit);
  std::vector<bool> frozen(spec.n_coef(), false);
  if (opts.keep_intercept) frozen[ModelSpec::index_alpha()] = true;

  auto record = [&](SelectionEvent::Action a, std::size_t j, double p) {
    res.trace.push_back({a, j, spec.coef_name(j), p});
  };

  bool changed = true;
  while (changed) {
    changed = false;

    // Backward: fix the worst coefficient while its p-value exceeds `drop`.
    while (res.iterations < guard && res.model.information_invertible()) {
      std::size_t worst = spec.n_coef();
      double worst_p = opts.drop;
      for (std::size_t j : spec.free_indices()) {
        if (frozen[j]) continue;
        const double p = wald_p(res.model, j);
        if (p > worst_p) {
          worst_p = p;
          worst = j;
        }
      }
      if (worst == spec.n_coef()) break;
      ++res.iterations;
      ModelSpec cand = spec;
      cand.free_mask[worst] = false;
      FitOptions fo = opts.fit;
      fo.start_override = res.model.gamma_hat.masked(cand);
      if (auto fm = try_fit(cand, data, fo)) {
        spec = cand;
        res.model = std::move(*fm);
        record(SelectionEvent::Action::drop, worst, worst_p);
        changed = true;
      } else {
        frozen[worst] = true;
        record(SelectionEvent::Action::rollback, worst, worst_p);
      }
    }

    // Forward: re-admit the excluded coefficient with the smallest re-entry p-value.
    if (res.iterations < guard) {
      std::size_t best = spec.n_coef();
      double best_p = opts.add;
      std::optional<FittedModel> best_fit;
      for (std::size_t j = 0; j < spec.n_coef(); ++j) {
        if (spec.free_mask[j] || frozen[j]) continue;
        ModelSpec cand = spec;
        cand.free_mask[j] = true;
        FitOptions fo = opts.fit;
        fo.start_override = res.model.gamma_hat;
        auto fm = try_fit(cand, data, fo);
        if (!fm) continue;
        const double p = wald_p(*fm, j);
        if (p < best_p) {
          best_p = p;
          best = j;
          best_fit = std::move(fm);
        }
      }
      if (best_fit) {
        ++res.iterations;
        spec.free_mask[best] = true;
        res.model = std::move(*best_fit);
        record(SelectionEvent::Action::add, best, best_p);
        changed = true;
      }
    }

    if (res.iterations >= guard) {
      res.hit_cycle_guard = changed;
      break;
    }
  }
  if (res.hit_cycle_guard) {
    res.model.warnings.emplace_back("stepwise selection stopped by the cycle guard");
  }
  return res;
}

}  // namespace ularma
