#include "ularma/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ularma/parallel.hpp"
#include "ularma/stats.hpp"
#include "ularma/unit_lindley.hpp"

namespace ularma {
namespace {

CoefSummary summarize(std::vector<double> v) {
  CoefSummary s;
  if (v.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  s.mean = stats::mean(v);
  s.sd = v.size() > 1 ? stats::stddev(v) : 0.0;
  s.median = stats::median(std::move(v));
  return s;
}

}  // namespace

void Scenario::validate() const {
  spec.validate();
  gamma_true.check_dims(spec);
  if (n < 1) throw std::invalid_argument("scenario: n must be >= 1");
  if (n_replicas < 1) throw std::invalid_argument("scenario: n_replicas must be >= 1");
  const std::size_t want_r = covariate_rule == CovariateRule::sinusoid ? 1 : 0;
  if (spec.r != want_r) {
    throw std::invalid_argument("scenario: covariate rule implies r = " + std::to_string(want_r));
  }
}

RowMatrix sinusoid_covariate(std::size_t n, std::size_t burnin) {
  RowMatrix X(static_cast<Eigen::Index>(n + burnin), 1);
  for (std::size_t i = 0; i < n + burnin; ++i) {
    const double t = static_cast<double>(i) - static_cast<double>(burnin) + 1.0;
    X(static_cast<Eigen::Index>(i), 0) = std::sin(std::numbers::pi * t / 50.0);
  }
  return X;
}

RowMatrix scenario_covariates(const Scenario& scn) {
  if (scn.covariate_rule == CovariateRule::sinusoid) return sinusoid_covariate(scn.n, scn.burnin);
  return RowMatrix(static_cast<Eigen::Index>(scn.n + scn.burnin), 0);
}

SimulatedPath simulate_path(const ModelSpec& spec, const ParamVector& gamma, std::size_t n,
                            std::size_t burnin, const RowMatrix& X, Rng& rng) {
  spec.validate();
  gamma.check_dims(spec);
  const std::size_t total = n + burnin;
  if (n < 1) throw std::invalid_argument("simulate_path: n must be >= 1");
  RowMatrix Xs = spec.r == 0 ? RowMatrix(static_cast<Eigen::Index>(total), 0) : X;
  if (Xs.rows() != static_cast<Eigen::Index>(total) ||
      Xs.cols() != static_cast<Eigen::Index>(spec.r)) {
    throw std::invalid_argument("simulate_path: X must be (n + burnin) x r");
  }

  const auto bounds = eta_bounds(spec.link);
  auto lp = LinearPredictor::for_series(spec, gamma, Xs);
  SimulatedPath out;
  out.data.y.reserve(n);
  out.mu.reserve(n);
  out.eta.reserve(n);
  for (std::size_t t = 0; t < total; ++t) {
    const auto x = row_span(Xs, static_cast<Eigen::Index>(t));
    const double eta = lp.next_eta(x);
    if (!std::isfinite(eta)) {
      throw std::runtime_error("simulate_path: eta is not finite at step " + std::to_string(t + 1));
    }
    const double mu = link_inverse(spec.link, eta);
    const double y = sample(UnitLindleyParam(mu), rng);
    const double g_y = link_apply(spec.link, y);
    lp.push(g_y, x, g_y - std::clamp(eta, bounds.lower, bounds.upper));
    if (t >= burnin) {
      out.data.y.push_back(y);
      out.mu.push_back(mu);
      out.eta.push_back(eta);
    }
  }
  out.data.X = Xs.bottomRows(static_cast<Eigen::Index>(n));
  return out;
}

SimulatedPath simulate_replica(const Scenario& scn, std::size_t replica) {
  auto rng = Rng::stream(scn.seed, replica);
  return simulate_path(scn.spec, scn.gamma_true, scn.n, scn.burnin, scenario_covariates(scn), rng);
}

PointMcSummary run_point_mc(const Scenario& scn, std::size_t jobs, const FitOptions& fit_opts) {
  scn.validate();
  const auto idx = scn.spec.free_indices();
  const auto k = static_cast<Eigen::Index>(idx.size());
  const std::size_t R = scn.n_replicas;

  PointMcSummary s;
  s.replicas = R;
  const auto truth = scn.gamma_true.flat();
  for (std::size_t j : idx) {
    s.names.push_back(scn.spec.coef_name(j));
    s.truth.push_back(truth[j]);
  }
  s.estimates = RowMatrix::Constant(static_cast<Eigen::Index>(R), k,
                                    std::numeric_limits<double>::quiet_NaN());
  s.converged.assign(R, 0);
  std::vector<std::uint8_t> failed(R, 0);

  parallel_for(R, jobs, [&](std::size_t m) {
    try {
      const auto path = simulate_replica(scn, m);
      const auto fm = fit(scn.spec, path.data, fit_opts);
      s.estimates.row(static_cast<Eigen::Index>(m)) = free_coordinates(scn.spec, fm.gamma_hat).transpose();
      s.converged[m] = fm.converged ? 1 : 0;
    } catch (const std::exception&) {
      failed[m] = 1;
    }
  });

  for (std::size_t m = 0; m < R; ++m) {
    s.n_failed += failed[m];
    s.n_converged += s.converged[m];
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    std::vector<double> all;
    std::vector<double> conv;
    for (std::size_t m = 0; m < R; ++m) {
      if (failed[m] != 0) continue;
      const double v = s.estimates(static_cast<Eigen::Index>(m), c);
      all.push_back(v);
      if (s.converged[m] != 0) conv.push_back(v);
    }
    s.all.push_back(summarize(std::move(all)));
    s.converged_only.push_back(summarize(std::move(conv)));
  }
  return s;
}

std::string to_string(GofTest test) {
  switch (test) {
    case GofTest::dl_cp:
      return "DL-Cp";
    case GofTest::dl_kp:
      return "DL-KS";
    case GofTest::ks_normality:
      return "KS";
  }
  return "?";
}

GofTest parse_gof_test(const std::string& name) {
  std::string key;
  for (char c : name) {
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "dlcp") return GofTest::dl_cp;
  if (key == "dlks" || key == "dlkp") return GofTest::dl_kp;
  if (key == "ks" || key == "ksnormality") return GofTest::ks_normality;
  throw std::invalid_argument("unknown goodness-of-fit test '" + name + "'");
}

GofMcSummary run_gof_mc(const Scenario& scn, const std::vector<GofTest>& tests, std::size_t jobs,
                        const GofMcOptions& opts) {
  scn.validate();
  if (tests.empty()) throw std::invalid_argument("run_gof_mc: no tests requested");
  if (!(opts.level > 0.0 && opts.level < 1.0)) throw std::invalid_argument("run_gof_mc: level in (0, 1)");
  const std::size_t R = scn.n_replicas;
  const std::size_t T = tests.size();
  // 0 = accept, 1 = reject, 2 = not evaluated.
  std::vector<std::uint8_t> outcome(R * T, 2);
  std::vector<std::uint8_t> evaluated(R, 0);
  const std::uint64_t dl_seed = splitmix64(scn.seed);

  parallel_for(R, jobs, [&](std::size_t m) {
    try {
      const auto path = simulate_replica(scn, m);
      const auto fm = fit(scn.spec, path.data);
      const auto res = residuals(fm, path.data, opts.drop_first);
      for (std::size_t i = 0; i < T; ++i) {
        double p = 1.0;
        if (tests[i] == GofTest::ks_normality) {
          p = ks_normality(res.quantile).p_value;
        } else {
          DlOptions dl;
          dl.B = opts.dl_bootstrap;
          dl.seed = stream_seed(dl_seed, m);
          p = dl_test(res.simple, tests[i] == GofTest::dl_cp ? DlStatistic::cp : DlStatistic::kp, dl)
                  .p_value;
        }
        outcome[m * T + i] = p < opts.level ? 1 : 0;
      }
      evaluated[m] = 1;
    } catch (const std::exception&) {
      evaluated[m] = 0;
    }
  });

  GofMcSummary s;
  s.tests = tests;
  s.replicas = R;
  s.rejections.assign(T, 0);
  for (std::size_t m = 0; m < R; ++m) {
    if (evaluated[m] == 0) continue;
    ++s.evaluated;
    for (std::size_t i = 0; i < T; ++i) s.rejections[i] += outcome[m * T + i] == 1 ? 1 : 0;
  }
  for (std::size_t i = 0; i < T; ++i) {
    s.rejection_rate.push_back(s.evaluated > 0 ? static_cast<double>(s.rejections[i]) /
                                                     static_cast<double>(s.evaluated)
                                               : std::numeric_limits<double>::quiet_NaN());
  }
  return s;
}

}  // namespace ularma
