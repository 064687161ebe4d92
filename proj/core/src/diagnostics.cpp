#include "ularma/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "ularma/random.hpp"
#include "ularma/stats.hpp"
#include "ularma/unit_lindley.hpp"

namespace ularma {
namespace {

/// Conditioning vectors and marks for the marked empirical process.
struct MarkedSample {
  std::size_t n = 0;
  std::size_t lags = 0;
  std::vector<double> x;  // n x lags, row-major
  std::vector<double> marks;
};

MarkedSample marked_sample(std::span<const double> e, std::size_t lags) {
  MarkedSample s;
  s.lags = lags;
  s.n = e.size() - lags;
  s.x.resize(s.n * lags);
  s.marks.resize(s.n);
  for (std::size_t t = 0; t < s.n; ++t) {
    for (std::size_t l = 0; l < lags; ++l) s.x[t * lags + l] = e[t + lags - 1 - l];
    s.marks[t] = e[t + lags];
  }
  const double mbar = stats::mean(s.marks);
  for (double& m : s.marks) m -= mbar;
  return s;
}

/// Evaluates sum_t m_t 1{x_t <= x_j} at every j and reduces to Cp or Kp.
class DlProcess {
 public:
  explicit DlProcess(const MarkedSample& s) : s_(s), centered_(s.n), cum_(s.n), sums_(s.n) {
    if (s.lags == 1) {
      order_.resize(s.n);
      std::iota(order_.begin(), order_.end(), std::size_t{0});
      std::stable_sort(order_.begin(), order_.end(),
                       [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
      // group_end_[k]: last sorted position sharing the value at position k.
      group_end_.resize(s.n);
      std::size_t k = s.n;
      while (k > 0) {
        const std::size_t end = k - 1;
        std::size_t start = end;
        while (start > 0 && s.x[order_[start - 1]] == s.x[order_[end]]) --start;
        for (std::size_t i = start; i <= end; ++i) group_end_[i] = end;
        k = start;
      }
    } else {
      below_.resize(s.n * s.n);
      for (std::size_t t = 0; t < s.n; ++t) {
        for (std::size_t j = 0; j < s.n; ++j) {
          bool le = true;
          for (std::size_t l = 0; l < s.lags && le; ++l) {
            le = s.x[t * s.lags + l] <= s.x[j * s.lags + l];
          }
          below_[j * s.n + t] = le ? 1 : 0;
        }
      }
    }
  }

  // Marks are re-centered here so bootstrap marks m_t * w_t get the same pinned
  // (bridge) process as the observed ones; without it p-values are inflated.
  double statistic(std::span<const double> raw, DlStatistic stat) {
    const std::size_t n = s_.n;
    const double mbar = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) centered_[t] = raw[t] - mbar;
    const std::vector<double>& marks = centered_;
    double var = 0.0;
    for (double m : marks) var += m * m;
    var /= static_cast<double>(n);
    if (!(var > 0.0)) return 0.0;

    if (s_.lags == 1) {
      double run = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        run += marks[order_[k]];
        cum_[k] = run;
      }
      for (std::size_t k = 0; k < n; ++k) sums_[k] = cum_[group_end_[k]];
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        const std::uint8_t* row = below_.data() + j * n;
        for (std::size_t t = 0; t < n; ++t) {
          if (row[t] != 0) acc += marks[t];
        }
        sums_[j] = acc;
      }
    }

    const double nn = static_cast<double>(n);
    if (stat == DlStatistic::cp) {
      double ss = 0.0;
      for (double v : sums_) ss += v * v;
      return ss / (var * nn * nn);
    }
    double mx = 0.0;
    for (double v : sums_) mx = std::max(mx, std::abs(v));
    return mx / std::sqrt(var * nn);
  }

 private:
  const MarkedSample& s_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> group_end_;
  std::vector<std::uint8_t> below_;
  std::vector<double> centered_;
  std::vector<double> cum_;
  std::vector<double> sums_;
};

double mammen_weight(Rng& rng) {
  static const double s5 = std::sqrt(5.0);
  static const double p_low = (s5 + 1.0) / (2.0 * s5);
  return rng.uniform() < p_low ? (1.0 - s5) / 2.0 : (1.0 + s5) / 2.0;
}

}  // namespace

ResidualSet residuals(const FittedModel& fit, const SeriesData& data, bool drop_first) {
  const std::size_t n = data.size();
  if (fit.fitted_mu.size() != n) {
    throw std::invalid_argument("residuals: fitted model does not match the data");
  }
  ResidualSet rs;
  rs.drop_first = drop_first;
  const std::size_t start = drop_first && n > 0 ? 1 : 0;
  for (std::size_t t = start; t < n; ++t) {
    const double y = data.y[t];
    const UnitLindleyParam par(fit.fitted_mu[t]);
    rs.simple.push_back(y - par.mu());
    const double lo = cdf(y, par);
    double q = 0.0;
    if (lo < 0.5) {
      q = lo > 0.0 ? stats::normal_quantile(lo) : -kQuantileResidualCap;
    } else {
      const double hi = ccdf(y, par);
      q = hi > 0.0 ? -stats::normal_quantile(hi) : kQuantileResidualCap;
    }
    if (std::abs(q) >= kQuantileResidualCap) {
      q = std::copysign(kQuantileResidualCap, q);
      ++rs.capped;
    }
    rs.quantile.push_back(q);
  }
  return rs;
}

DlResult dl_test(std::span<const double> e, DlStatistic statistic, const DlOptions& opts) {
  if (opts.lags < 1) throw std::invalid_argument("dl_test: lags must be >= 1");
  if (e.size() < 20 || e.size() < opts.lags + 20) {
    throw std::invalid_argument("dl_test: need at least 20 residuals beyond the lags");
  }
  if (opts.B < 100) throw std::invalid_argument("dl_test: B must be >= 100");
  if (!std::all_of(e.begin(), e.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("dl_test: residuals must be finite");
  }

  const MarkedSample s = marked_sample(e, opts.lags);
  const bool degenerate =
      std::all_of(s.marks.begin(), s.marks.end(), [](double m) { return m == 0.0; });
  if (degenerate) throw std::domain_error("dl_test: residuals have zero variance");

  DlProcess proc(s);
  DlResult res;
  res.statistic = proc.statistic(s.marks, statistic);

  std::vector<double> star(s.n);
  std::size_t exceed = 0;
  for (std::size_t b = 0; b < opts.B; ++b) {
    auto rng = Rng::stream(opts.seed, b);
    for (std::size_t t = 0; t < s.n; ++t) {
      const double w = opts.multiplier == Multiplier::mammen ? mammen_weight(rng) : rng.normal();
      star[t] = s.marks[t] * w;
    }
    if (proc.statistic(star, statistic) >= res.statistic) ++exceed;
  }
  res.p_value = static_cast<double>(1 + exceed) / static_cast<double>(opts.B + 1);
  return res;
}

KsResult ks_normality(std::span<const double> e, KsNull null) {
  if (e.size() < 8) throw std::invalid_argument("ks_normality: need at least 8 values");
  std::vector<double> x(e.begin(), e.end());
  if (!std::all_of(x.begin(), x.end(), [](double v) { return !std::isnan(v); })) {
    throw std::invalid_argument("ks_normality: NaN input");
  }
  const double n = static_cast<double>(x.size());
  if (null == KsNull::estimated) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) throw std::domain_error("ks_normality: zero-variance input");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    for (double& v : x) v = (v - mean) / sd;
  }
  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = stats::normal_cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double p = null == KsNull::estimated ? stats::lilliefors_p(d, x.size())
                                             : stats::kolmogorov_sf(std::sqrt(n) * d);
  return {d, p};
}

AccuracyMetrics accuracy_metrics(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size() || actual.empty()) {
    throw std::invalid_argument("accuracy_metrics: series must be non-empty and equally long");
  }
  const std::size_t n = actual.size();
  double sq = 0.0;
  double ape = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (actual[t] == 0.0) throw std::domain_error("accuracy_metrics: MAPE undefined for zero actual");
    const double err = actual[t] - predicted[t];
    sq += err * err;
    ape += std::abs(err / actual[t]);
  }
  AccuracyMetrics m;
  m.rmse = std::sqrt(sq / static_cast<double>(n));
  m.mape = ape / static_cast<double>(n);
  if (n < 2) {
    m.mda = std::numeric_limits<double>::quiet_NaN();
  } else {
    auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
    std::size_t hits = 0;
    for (std::size_t t = 1; t < n; ++t) {
      hits += sgn(predicted[t] - actual[t - 1]) == sgn(actual[t] - actual[t - 1]) ? 1 : 0;
    }
    m.mda = static_cast<double>(hits) / static_cast<double>(n - 1);
  }
  return m;
}

std::complex<double> ar_polynomial(std::span<const double> phi, std::complex<double> z) {
  // Horner on 1 - phi_1 z - ... - phi_p z^p.
  std::complex<double> acc = 0.0;
  for (std::size_t i = phi.size(); i > 0; --i) acc = acc * z - phi[i - 1];
  return 1.0 + acc * z;
}

SrcpResult srcp(std::span<const double> phi) {
  std::size_t d = phi.size();
  while (d > 0 && phi[d - 1] == 0.0) --d;
  if (d == 0) throw std::invalid_argument("srcp: all autoregressive coefficients are zero");
  const auto coefs = phi.first(d);

  // Roots are reciprocals of the eigenvalues of the AR companion matrix.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) C(0, static_cast<Eigen::Index>(i)) = coefs[i];
  for (std::size_t i = 1; i < d; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("srcp: eigenvalue iteration failed");

  auto derivative = [&](std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = d; i > 0; --i) acc = acc * z - static_cast<double>(i) * coefs[i - 1];
    return acc;
  };

  SrcpResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    std::complex<double> z = 1.0 / es.eigenvalues()(k);
    double res = std::abs(ar_polynomial(coefs, z));
    for (int it = 0; it < 20 && res > 0.0; ++it) {
      const auto dz = derivative(z);
      if (dz == 0.0) break;
      const auto cand = z - ar_polynomial(coefs, z) / dz;
      const double cres = std::abs(ar_polynomial(coefs, cand));
      if (!(cres < res)) break;
      z = cand;
      res = cres;
    }
    if (std::abs(z) < best.value) {
      best.value = std::abs(z);
      best.root = z;
      best.residual = res;
    }
  }
  best.near_unit_root = best.value < kSrcpAdvisoryThreshold;
  return best;
}

}  // namespace ularma
