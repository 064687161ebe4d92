#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's distribution code, so agreement is evidence rather than tautology.

#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Dense>

namespace oracle {

/// Density of X / (1 + X) for X ~ Lindley(rate), rate = (1 - mu) / mu, by the
/// change of variables x = y / (1 - y).
inline double ul_pdf(double y, double mu) {
  const double rate = (1.0 - mu) / mu;
  const double x = y / (1.0 - y);
  const double lindley = rate * rate / (1.0 + rate) * (1.0 + x) * std::exp(-rate * x);
  return lindley / ((1.0 - y) * (1.0 - y));
}

/// P(Y <= y) by adaptive quadrature of ul_pdf.
inline double ul_cdf(double y, double mu) {
  if (y <= 0.0) return 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([mu](double t) { return ul_pdf(t, mu); }, 0.0, y, 1e-14);
}

/// Integral of ul_pdf over (0, 1).
inline double ul_total_mass(double mu) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([mu](double t) { return t >= 1.0 ? 0.0 : ul_pdf(t, mu); }, 0.0, 1.0, 1e-15);
}

/// Central-difference gradient of f at x with relative step h.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x(i)));
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp(i) += step;
    xm(i) -= step;
    g(i) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return g;
}

/// Second-difference Hessian of f at x with absolute step h.
inline Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double h = 1e-4) {
  const auto k = x.size();
  Eigen::MatrixXd H(k, k);
  const double f0 = f(x);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      double v = 0.0;
      if (i == j) {
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp(i) += h;
        xm(i) -= h;
        v = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
      } else {
        auto at = [&](double si, double sj) {
          Eigen::VectorXd y = x;
          y(i) += si * h;
          y(j) += sj * h;
          return f(y);
        };
        v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
      }
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

/// Standard normal distribution function via erfc.
inline double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace oracle
