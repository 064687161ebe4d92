#include "ularma/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ularma {

ModelSpec ModelSpec::make(std::size_t p, std::size_t q, std::size_t r, Link link) {
  ModelSpec spec;
  spec.p = p;
  spec.q = q;
  spec.r = r;
  spec.link = link;
  spec.free_mask.assign(spec.n_coef(), true);
  return spec;
}

std::size_t ModelSpec::n_free() const {
  return static_cast<std::size_t>(std::count(free_mask.begin(), free_mask.end(), true));
}

std::vector<std::size_t> ModelSpec::free_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < free_mask.size(); ++j) {
    if (free_mask[j]) idx.push_back(j);
  }
  return idx;
}

std::string ModelSpec::coef_name(std::size_t j) const {
  if (j == 0) return "alpha";
  if (j < 1 + r) return "beta_" + std::to_string(j);
  if (j < 1 + r + p) return "phi_" + std::to_string(j - r);
  if (j < n_coef()) return "theta_" + std::to_string(j - r - p);
  throw std::out_of_range("coef_name: index " + std::to_string(j) + " out of range");
}

std::size_t ModelSpec::coef_index(const std::string& name) const {
  for (std::size_t j = 0; j < n_coef(); ++j) {
    if (coef_name(j) == name) return j;
  }
  throw std::invalid_argument("unknown coefficient '" + name + "'");
}

void ModelSpec::validate() const {
  if (free_mask.size() != n_coef()) {
    throw std::invalid_argument("ModelSpec: free_mask has " + std::to_string(free_mask.size()) +
                                " entries, expected " + std::to_string(n_coef()));
  }
}

ParamVector ParamVector::zeros(const ModelSpec& spec) {
  ParamVector g;
  g.beta.assign(spec.r, 0.0);
  g.phi.assign(spec.p, 0.0);
  g.theta.assign(spec.q, 0.0);
  return g;
}

ParamVector ParamVector::from_flat(const ModelSpec& spec, std::span<const double> flat) {
  if (flat.size() != spec.n_coef()) {
    throw std::invalid_argument("ParamVector::from_flat: expected " +
                                std::to_string(spec.n_coef()) + " values, got " +
                                std::to_string(flat.size()));
  }
  ParamVector g;
  g.alpha = flat[0];
  auto it = flat.begin() + 1;
  g.beta.assign(it, it + static_cast<std::ptrdiff_t>(spec.r));
  it += static_cast<std::ptrdiff_t>(spec.r);
  g.phi.assign(it, it + static_cast<std::ptrdiff_t>(spec.p));
  it += static_cast<std::ptrdiff_t>(spec.p);
  g.theta.assign(it, it + static_cast<std::ptrdiff_t>(spec.q));
  return g;
}

std::vector<double> ParamVector::flat() const {
  std::vector<double> v;
  v.reserve(1 + beta.size() + phi.size() + theta.size());
  v.push_back(alpha);
  v.insert(v.end(), beta.begin(), beta.end());
  v.insert(v.end(), phi.begin(), phi.end());
  v.insert(v.end(), theta.begin(), theta.end());
  return v;
}

ParamVector ParamVector::masked(const ModelSpec& spec) const {
  check_dims(spec);
  auto v = flat();
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!spec.free_mask[j]) v[j] = 0.0;
  }
  return from_flat(spec, v);
}

void ParamVector::check_dims(const ModelSpec& spec) const {
  if (beta.size() != spec.r || phi.size() != spec.p || theta.size() != spec.q) {
    throw std::invalid_argument("ParamVector: dimensions (r=" + std::to_string(beta.size()) +
                                ", p=" + std::to_string(phi.size()) +
                                ", q=" + std::to_string(theta.size()) +
                                ") do not match the model spec");
  }
}

SeriesData SeriesData::from_values(std::vector<double> y) {
  SeriesData d;
  d.X = RowMatrix(static_cast<Eigen::Index>(y.size()), 0);
  d.y = std::move(y);
  return d;
}

void SeriesData::validate() const {
  if (y.empty()) throw std::invalid_argument("SeriesData: empty series");
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw std::invalid_argument("SeriesData: covariate matrix has " + std::to_string(X.rows()) +
                                " rows for " + std::to_string(y.size()) + " observations");
  }
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (!(y[t] > 0.0 && y[t] < 1.0)) {
      throw std::invalid_argument("SeriesData: y[" + std::to_string(t + 1) +
                                  "] = " + std::to_string(y[t]) + " is outside (0, 1)");
    }
  }
  if (!X.allFinite()) throw std::invalid_argument("SeriesData: non-finite covariate value");
}

void SeriesData::validate(const ModelSpec& spec) const {
  validate();
  if (n_covariates() != spec.r) {
    throw std::invalid_argument("SeriesData: " + std::to_string(n_covariates()) +
                                " covariates supplied, model expects " + std::to_string(spec.r));
  }
}

}  // namespace ularma
