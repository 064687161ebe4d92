#include "ularma/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ularma {

bool FilterState::any_saturated() const {
  return std::any_of(saturated.begin(), saturated.end(), [](std::uint8_t s) { return s != 0; });
}

LinearPredictor::LinearPredictor(const ModelSpec& spec, const ParamVector& gamma,
                                 std::span<const double> presample_x)
    : alpha_(gamma.alpha),
      beta_(gamma.beta),
      phi_(gamma.phi),
      theta_(gamma.theta),
      ar_lags_(spec.p, 0.0),
      ma_lags_(spec.q, 0.0) {
  gamma.check_dims(spec);
  if (spec.p > 0 && spec.r > 0) {
    if (presample_x.size() != spec.r) {
      throw std::invalid_argument("LinearPredictor: pre-sample covariate row has wrong length");
    }
    // g(Y_hat) = g(g^{-1}(0)) = 0 before the sample starts.
    std::fill(ar_lags_.begin(), ar_lags_.end(), -xbeta(presample_x));
  }
}

LinearPredictor LinearPredictor::for_series(const ModelSpec& spec, const ParamVector& gamma,
                                            const RowMatrix& X) {
  const auto xbar = presample_covariates(X, spec.p);
  return LinearPredictor(spec, gamma, xbar);
}

double LinearPredictor::xbeta(std::span<const double> x_row) const {
  double s = 0.0;
  for (std::size_t l = 0; l < beta_.size(); ++l) s += x_row[l] * beta_[l];
  return s;
}

double LinearPredictor::next_eta(std::span<const double> x_row) const {
  double eta = alpha_ + xbeta(x_row);
  for (std::size_t i = 0; i < phi_.size(); ++i) eta += phi_[i] * ar_lags_[i];
  for (std::size_t j = 0; j < theta_.size(); ++j) eta += theta_[j] * ma_lags_[j];
  return eta;
}

void LinearPredictor::push(double g_y, std::span<const double> x_row, double r) {
  if (!ar_lags_.empty()) {
    std::copy_backward(ar_lags_.begin(), ar_lags_.end() - 1, ar_lags_.end());
    ar_lags_[0] = g_y - xbeta(x_row);
  }
  if (!ma_lags_.empty()) {
    std::copy_backward(ma_lags_.begin(), ma_lags_.end() - 1, ma_lags_.end());
    ma_lags_[0] = r;
  }
}

std::vector<double> presample_covariates(const RowMatrix& X, std::size_t p) {
  std::vector<double> xbar(static_cast<std::size_t>(X.cols()), 0.0);
  const auto rows = std::min<Eigen::Index>(static_cast<Eigen::Index>(p), X.rows());
  if (rows == 0) return xbar;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    xbar[static_cast<std::size_t>(c)] = X.col(c).head(rows).mean();
  }
  return xbar;
}

FilterState filter_forward(const ModelSpec& spec, const ParamVector& gamma,
                           const SeriesData& data) {
  spec.validate();
  gamma.check_dims(spec);
  data.validate(spec);

  const std::size_t n = data.size();
  const auto bounds = eta_bounds(spec.link);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  FilterState fs;
  fs.eta.assign(n, nan);
  fs.mu.assign(n, nan);
  fs.resid_r.assign(n, nan);
  fs.saturated.assign(n, 0);

  auto lp = LinearPredictor::for_series(spec, gamma, data.X);
  for (std::size_t t = 0; t < n; ++t) {
    const auto x = row_span(data.X, static_cast<Eigen::Index>(t));
    const double eta = lp.next_eta(x);
    if (!std::isfinite(eta)) {
      fs.finite = false;
      break;
    }
    const double eta_eff = std::clamp(eta, bounds.lower, bounds.upper);
    const double g_y = link_apply(spec.link, data.y[t]);
    fs.eta[t] = eta;
    fs.mu[t] = link_inverse(spec.link, eta);
    fs.saturated[t] = eta_eff != eta;
    fs.resid_r[t] = g_y - eta_eff;
    lp.push(g_y, x, fs.resid_r[t]);
  }
  return fs;
}

DerivMatrices deriv_recursions(const ModelSpec& spec, const ParamVector& gamma,
                               const SeriesData& data, const FilterState& fs) {
  spec.validate();
  gamma.check_dims(spec);
  const std::size_t n = data.size();
  if (fs.eta.size() != n || fs.mu.size() != n) {
    throw std::invalid_argument("deriv_recursions: filter state does not match the data");
  }
  if (!fs.finite) {
    throw std::domain_error("deriv_recursions: filter state is not finite");
  }

  const std::size_t p = spec.p;
  const std::size_t q = spec.q;
  const std::size_t r = spec.r;
  const auto K = static_cast<Eigen::Index>(spec.n_coef());
  const auto xbar = presample_covariates(data.X, p);

  auto x_hat = [&](std::ptrdiff_t t, std::size_t l) {
    return t >= 0 ? data.X(t, static_cast<Eigen::Index>(l)) : xbar[l];
  };

  // Autoregressive bracket g(Y_t) - x_t'beta, with the pre-sample value -xbar'beta.
  std::vector<double> bracket(n);
  double presample_bracket = 0.0;
  for (std::size_t l = 0; l < r; ++l) presample_bracket -= xbar[l] * gamma.beta[l];
  for (std::size_t t = 0; t < n; ++t) {
    double xb = 0.0;
    for (std::size_t l = 0; l < r; ++l) {
      xb += data.X(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(l)) * gamma.beta[l];
    }
    bracket[t] = link_apply(spec.link, data.y[t]) - xb;
  }

  DerivMatrices dm;
  dm.D = RowMatrix::Zero(static_cast<Eigen::Index>(n), K);
  dm.T_diag.resize(n);
  dm.h.resize(n);

  for (std::size_t t = 0; t < n; ++t) {
    const auto ti = static_cast<std::ptrdiff_t>(t);
    auto row = dm.D.row(ti);
    row(0) = 1.0;
    for (std::size_t l = 0; l < r; ++l) {
      double v = data.X(ti, static_cast<Eigen::Index>(l));
      for (std::size_t i = 1; i <= p; ++i) v -= gamma.phi[i - 1] * x_hat(ti - static_cast<std::ptrdiff_t>(i), l);
      row(static_cast<Eigen::Index>(spec.index_beta(l))) = v;
    }
    for (std::size_t k = 1; k <= p; ++k) {
      const auto lag = ti - static_cast<std::ptrdiff_t>(k);
      row(static_cast<Eigen::Index>(spec.index_phi(k - 1))) =
          lag >= 0 ? bracket[static_cast<std::size_t>(lag)] : presample_bracket;
    }
    for (std::size_t s = 1; s <= q; ++s) {
      const auto lag = ti - static_cast<std::ptrdiff_t>(s);
      row(static_cast<Eigen::Index>(spec.index_theta(s - 1))) =
          lag >= 0 ? fs.resid_r[static_cast<std::size_t>(lag)] : 0.0;
    }
    // d r_{t-j} / d gamma = -d eta_{t-j} / d gamma unless mu_{t-j} was saturated.
    for (std::size_t j = 1; j <= q; ++j) {
      const auto lag = ti - static_cast<std::ptrdiff_t>(j);
      if (lag < 0 || fs.saturated[static_cast<std::size_t>(lag)]) continue;
      dm.D.row(ti) -= gamma.theta[j - 1] * dm.D.row(lag);
    }

    const double mu = fs.mu[t];
    const double y = data.y[t];
    dm.T_diag[t] = fs.saturated[t] ? 0.0 : 1.0 / link_deriv(spec.link, mu);
    dm.h[t] = -2.0 / (1.0 - mu) - 1.0 / mu + y / (mu * mu * (1.0 - y));
  }
  return dm;
}

}  // namespace ularma
