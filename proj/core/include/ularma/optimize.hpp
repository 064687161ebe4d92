#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ularma::optim {

/// Function to minimize. Writes the gradient when `grad` is non-null.
/// Returns +infinity (or NaN) for points outside the usable domain.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct Result {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd grad;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
  /// Objective value after every accepted step, starting with x0.
  std::vector<double> trace;
};

struct LbfgsOptions {
  int max_iterations = 1000;
  /// Relative change of the objective between accepted steps.
  double rel_tol = 1e-8;
  /// Max-norm of the gradient.
  double grad_tol = 1e-4;
  int memory = 10;
};

/// Limited-memory BFGS with Armijo backtracking. Converged means both the
/// relative objective change and the gradient max-norm are below tolerance.
[[nodiscard]] Result lbfgs(const Objective& f, Eigen::VectorXd x0, const LbfgsOptions& opts = {});

struct SimplexOptions {
  int max_evaluations = 20000;
  /// Relative spread of simplex values at which the search stops.
  double f_tol = 1e-12;
  /// Initial edge length is max(step * |x_i|, min_step).
  double step = 0.1;
  double min_step = 0.05;
};

/// Nelder-Mead simplex search (no gradient). `converged` reports the simplex
/// collapse criterion only; callers check stationarity themselves.
[[nodiscard]] Result nelder_mead(const Objective& f, Eigen::VectorXd x0,
                                 const SimplexOptions& opts = {});

}  // namespace ularma::optim
