#include "ularma/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ularma/optimize.hpp"

namespace ularma {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double loglik_of(const FilterState& fs, const SeriesData& data) {
  if (!fs.finite) return kNegInf;
  double ll = 0.0;
  for (std::size_t t = 0; t < data.size(); ++t) {
    const double mu = fs.mu[t];
    const double y = data.y[t];
    ll += 2.0 * std::log1p(-mu) - std::log(mu) - 3.0 * std::log1p(-y) +
          y * (mu - 1.0) / (mu * (1.0 - y));
  }
  return std::isfinite(ll) ? ll : kNegInf;
}

Eigen::VectorXd score_of(const ModelSpec& spec, const DerivMatrices& dm) {
  const auto n = dm.D.rows();
  Eigen::VectorXd th(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    th(t) = dm.T_diag[static_cast<std::size_t>(t)] * dm.h[static_cast<std::size_t>(t)];
  }
  const Eigen::VectorXd full = dm.D.transpose() * th;
  const auto idx = spec.free_indices();
  Eigen::VectorXd u(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    u(static_cast<Eigen::Index>(i)) = full(static_cast<Eigen::Index>(idx[i]));
  }
  return u;
}

Eigen::MatrixXd info_of(const ModelSpec& spec, const FilterState& fs, const DerivMatrices& dm) {
  const auto idx = spec.free_indices();
  const auto n = dm.D.rows();
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd Df(n, k);
  for (Eigen::Index c = 0; c < k; ++c) Df.col(c) = dm.D.col(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
  Eigen::VectorXd w(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    w(t) = dm.T_diag[ts] * dm.T_diag[ts] * expected_curvature(fs.mu[ts]);
  }
  Eigen::MatrixXd K = Df.transpose() * w.asDiagonal() * Df;
  // Symmetrize against rounding in the triple product.
  return 0.5 * (K + K.transpose());
}

ParamVector intercept_only_start(const ModelSpec& spec, const SeriesData& data) {
  ParamVector g = ParamVector::zeros(spec);
  if (spec.free_mask[0]) {
    const double ybar = std::accumulate(data.y.begin(), data.y.end(), 0.0) /
                        static_cast<double>(data.size());
    g.alpha = link_apply(spec.link, ybar);
  }
  return g;
}

}  // namespace

double expected_curvature(double mu) {
  const double om = 1.0 - mu;
  return (2.0 - om * om) / (mu * mu * om * om);
}

double log_likelihood(const ModelSpec& spec, const ParamVector& gamma, const SeriesData& data) {
  return loglik_of(filter_forward(spec, gamma, data), data);
}

Eigen::VectorXd score(const ModelSpec& spec, const ParamVector& gamma, const SeriesData& data) {
  const auto fs = filter_forward(spec, gamma, data);
  return score_of(spec, deriv_recursions(spec, gamma, data, fs));
}

Eigen::MatrixXd cond_info(const ModelSpec& spec, const ParamVector& gamma,
                          const SeriesData& data) {
  const auto fs = filter_forward(spec, gamma, data);
  return info_of(spec, fs, deriv_recursions(spec, gamma, data, fs));
}

InfoCriteria information_criteria(double loglik, std::size_t k, std::size_t n) {
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  return {-2.0 * loglik + 2.0 * kk, -2.0 * loglik + kk * std::log(nn),
          -2.0 * loglik + 2.0 * kk * std::log(std::log(nn))};
}

Eigen::VectorXd free_coordinates(const ModelSpec& spec, const ParamVector& gamma) {
  const auto flat = gamma.flat();
  const auto idx = spec.free_indices();
  Eigen::VectorXd x(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) x(static_cast<Eigen::Index>(i)) = flat[idx[i]];
  return x;
}

ParamVector from_free_coordinates(const ModelSpec& spec, const Eigen::VectorXd& x) {
  const auto idx = spec.free_indices();
  if (static_cast<std::size_t>(x.size()) != idx.size()) {
    throw std::invalid_argument("from_free_coordinates: wrong number of coordinates");
  }
  std::vector<double> flat(spec.n_coef(), 0.0);
  for (std::size_t i = 0; i < idx.size(); ++i) flat[idx[i]] = x(static_cast<Eigen::Index>(i));
  return ParamVector::from_flat(spec, flat);
}

ParamVector start_values(const ModelSpec& spec, const SeriesData& data) {
  spec.validate();
  data.validate(spec);
  const std::size_t n = data.size();
  const std::size_t p = spec.p;
  const std::size_t r = spec.r;

  // Regression columns: alpha, beta_1..r, phi_1..p (full indices 0..r+p).
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < 1 + r + p; ++j) {
    if (spec.free_mask[j]) cols.push_back(j);
  }
  if (cols.empty() || n <= p + cols.size()) return intercept_only_start(spec, data);

  std::vector<double> gy(n);
  for (std::size_t t = 0; t < n; ++t) gy[t] = link_apply(spec.link, data.y[t]);

  const auto rows = static_cast<Eigen::Index>(n - p);
  Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(cols.size()));
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::size_t t = static_cast<std::size_t>(i) + p;
    b(i) = gy[t];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::size_t j = cols[c];
      double v = 1.0;
      if (j >= 1 && j < 1 + r) {
        v = data.X(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j - 1));
      } else if (j >= 1 + r) {
        v = gy[t - (j - r)];
      }
      A(i, static_cast<Eigen::Index>(c)) = v;
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < static_cast<Eigen::Index>(cols.size())) return intercept_only_start(spec, data);
  const Eigen::VectorXd coef = qr.solve(b);
  if (!coef.allFinite()) return intercept_only_start(spec, data);

  std::vector<double> flat(spec.n_coef(), 0.0);
  for (std::size_t c = 0; c < cols.size(); ++c) flat[cols[c]] = coef(static_cast<Eigen::Index>(c));
  return ParamVector::from_flat(spec, flat);
}

FittedModel fitted_model_at(const ModelSpec& spec, const ParamVector& gamma,
                            const SeriesData& data, bool converged) {
  const ParamVector g = gamma.masked(spec);
  const auto fs = filter_forward(spec, g, data);
  if (!fs.finite) {
    throw std::domain_error("fitted_model_at: recursion is not finite at these coefficients");
  }
  const auto dm = deriv_recursions(spec, g, data, fs);

  FittedModel fm;
  fm.spec = spec;
  fm.gamma_hat = g;
  fm.loglik = loglik_of(fs, data);
  fm.K_n = info_of(spec, fs, dm);
  fm.fitted_mu = fs.mu;
  fm.fitted_eta = fs.eta;
  fm.resid_r = fs.resid_r;
  fm.converged = converged;
  fm.n_obs = data.size();
  fm.criteria = information_criteria(fm.loglik, spec.n_free(), data.size());
  fm.clamp_active = fs.any_saturated();
  if (fm.clamp_active) {
    fm.warnings.emplace_back("mu_t saturated at the link bounds for some t");
  }

  fm.std_err.assign(spec.n_coef(), std::numeric_limits<double>::quiet_NaN());
  if (fm.K_n.size() > 0 && fm.K_n.allFinite()) {
    Eigen::LLT<Eigen::MatrixXd> llt(fm.K_n);
    if (llt.info() == Eigen::Success) {
      const auto k = fm.K_n.rows();
      fm.covariance = llt.solve(Eigen::MatrixXd::Identity(k, k));
      const auto idx = spec.free_indices();
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const double v = fm.covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        fm.std_err[idx[i]] = v > 0.0 ? std::sqrt(v) : std::numeric_limits<double>::quiet_NaN();
      }
    } else {
      fm.warnings.emplace_back("conditional information matrix is not positive definite");
    }
  }
  return fm;
}

FittedModel fit(const ModelSpec& spec, const SeriesData& data, const FitOptions& opts) {
  spec.validate();
  data.validate(spec);
  if (opts.max_iterations < 1 || !(opts.rel_tol > 0.0)) {
    throw std::invalid_argument("fit: max_iterations must be >= 1 and rel_tol > 0");
  }
  const std::size_t min_n = spec.n_coef() + 5;
  if (data.size() < min_n) {
    throw std::invalid_argument("fit: need at least " + std::to_string(min_n) +
                                " observations, got " + std::to_string(data.size()));
  }

  optim::Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const ParamVector g = from_free_coordinates(spec, x);
    const auto fs = filter_forward(spec, g, data);
    const double ll = loglik_of(fs, data);
    if (!std::isfinite(ll)) return std::numeric_limits<double>::infinity();
    if (grad != nullptr) *grad = -score_of(spec, deriv_recursions(spec, g, data, fs));
    return -ll;
  };

  ParamVector start = opts.start_override ? opts.start_override->masked(spec)
                                          : start_values(spec, data);
  Eigen::VectorXd x0 = free_coordinates(spec, start);
  if (!std::isfinite(objective(x0, nullptr))) {
    start = intercept_only_start(spec, data);
    x0 = free_coordinates(spec, start);
  }

  optim::LbfgsOptions lopts;
  lopts.max_iterations = opts.max_iterations;
  lopts.rel_tol = opts.rel_tol;
  lopts.grad_tol = opts.score_tol;

  auto res = optim::lbfgs(objective, x0, lopts);
  std::string method = "L-BFGS";
  int iterations = res.iterations;
  std::vector<double> trace = res.trace;

  if (!res.converged && opts.fallback_enabled && std::isfinite(res.value)) {
    optim::SimplexOptions sopts;
    sopts.max_evaluations = std::max(2000, 200 * static_cast<int>(x0.size() + 1));
    const auto nm = optim::nelder_mead(objective, res.x, sopts);
    auto polish = optim::lbfgs(objective, nm.x, lopts);
    iterations += nm.iterations + polish.iterations;
    trace.insert(trace.end(), nm.trace.begin(), nm.trace.end());
    trace.insert(trace.end(), polish.trace.begin(), polish.trace.end());
    method = "L-BFGS + Nelder-Mead";
    if (polish.value <= res.value || polish.converged) res = std::move(polish);
  }

  FittedModel fm = fitted_model_at(spec, from_free_coordinates(spec, res.x), data, res.converged);
  fm.iterations = iterations;
  fm.method = method;
  fm.loglik_trace.reserve(trace.size());
  for (double v : trace) fm.loglik_trace.push_back(-v);
  if (!res.converged) fm.warnings.push_back("optimizer did not converge: " + res.message);
  return fm;
}

}  // namespace ularma
