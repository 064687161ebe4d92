#include "ularma/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

namespace ularma::optim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_value(double v) { return std::isfinite(v) ? v : kInf; }

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

// Two-loop recursion: returns -H g.
Eigen::VectorXd search_direction(const Eigen::VectorXd& g, const std::deque<CurvaturePair>& mem) {
  Eigen::VectorXd d = -g;
  std::vector<double> a(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    a[i] = mem[i].rho * mem[i].s.dot(d);
    d -= a[i] * mem[i].y;
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    d *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double b = mem[i].rho * mem[i].y.dot(d);
    d += (a[i] - b) * mem[i].s;
  }
  return d;
}

}  // namespace

Result lbfgs(const Objective& f, Eigen::VectorXd x0, const LbfgsOptions& opts) {
  Result res;
  const auto n = x0.size();
  res.x = std::move(x0);
  res.grad = Eigen::VectorXd::Zero(n);
  res.value = safe_value(f(res.x, &res.grad));
  res.evaluations = 1;
  if (!std::isfinite(res.value) || !res.grad.allFinite()) {
    res.message = "objective is not finite at the starting point";
    return res;
  }
  res.trace.push_back(res.value);
  if (n == 0) {
    res.converged = true;
    res.message = "no free parameters";
    return res;
  }

  constexpr double c1 = 1e-4;
  std::deque<CurvaturePair> memory;
  Eigen::VectorXd g_new(n);
  bool restarted = false;

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    res.iterations = iter;
    Eigen::VectorXd d = search_direction(res.grad, memory);
    double slope = d.dot(res.grad);
    if (!(slope < 0.0)) {
      memory.clear();
      d = -res.grad;
      slope = d.dot(res.grad);
    }

    double step = 1.0;
    if (memory.empty()) step = std::min(1.0, 1.0 / std::max(d.lpNorm<Eigen::Infinity>(), 1e-12));

    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = kInf;
    for (int bt = 0; bt < 60; ++bt) {
      x_new = res.x + step * d;
      f_new = safe_value(f(x_new, &g_new));
      ++res.evaluations;
      if (std::isfinite(f_new) && g_new.allFinite() && f_new <= res.value + c1 * step * slope) {
        accepted = true;
        break;
      }
      if (std::isfinite(f_new)) {
        // Minimizer of the quadratic through f(0), f'(0) and f(step), safeguarded.
        const double denom = 2.0 * (f_new - res.value - slope * step);
        double trial = denom > 0.0 ? -slope * step * step / denom : 0.5 * step;
        step = std::clamp(trial, 0.1 * step, 0.5 * step);
      } else {
        step *= 0.25;
      }
    }

    if (!accepted) {
      if (res.grad.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
        res.converged = true;
        res.message = "converged (no further decrease possible)";
        return res;
      }
      if (!memory.empty() || !restarted) {
        memory.clear();
        restarted = true;
        continue;
      }
      res.message = "line search failed";
      return res;
    }
    restarted = false;

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - res.grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      memory.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(memory.size()) > opts.memory) memory.pop_front();
    }

    const double rel_change = std::abs(res.value - f_new) / std::max(1.0, std::abs(f_new));
    res.x = std::move(x_new);
    res.value = f_new;
    res.grad = g_new;
    res.trace.push_back(res.value);

    if (rel_change < opts.rel_tol && res.grad.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
      res.converged = true;
      res.message = "converged";
      return res;
    }
  }
  res.message = "iteration limit reached";
  return res;
}

Result nelder_mead(const Objective& f, Eigen::VectorXd x0, const SimplexOptions& opts) {
  Result res;
  const auto n = x0.size();
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    return safe_value(f(x, nullptr));
  };

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> vals(static_cast<std::size_t>(n + 1));
  vals[0] = eval(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& p = pts[static_cast<std::size_t>(i + 1)];
    p(i) += std::max(opts.step * std::abs(x0(i)), opts.min_step);
    vals[static_cast<std::size_t>(i + 1)] = eval(p);
  }

  std::vector<std::size_t> order(pts.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
  };

  sort_simplex();
  res.trace.push_back(vals[order[0]]);
  while (res.evaluations < opts.max_evaluations) {
    ++res.iterations;
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    const double spread = vals[worst] - vals[best];
    if (std::isfinite(spread) && spread <= opts.f_tol * (std::abs(vals[best]) + 1e-12)) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                         : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          vals[i] = eval(pts[i]);
        }
      }
    }
    sort_simplex();
    res.trace.push_back(vals[order[0]]);
  }

  res.x = pts[order[0]];
  res.value = vals[order[0]];
  res.message = res.converged ? "simplex collapsed" : "evaluation limit reached";
  return res;
}

}  // namespace ularma::optim
