#include "nozzlelog/features/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nozzlelog::features {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::ArrayXd forward_diff(const Eigen::ArrayXd& x) {
  return x.tail(x.size() - 1) - x.head(x.size() - 1);
}

}  // namespace

LinearTrend linear_trend(Series x) {
  const Eigen::Index n = x.size();
  if (n < 2) return {kNaN, kNaN, kNaN, kNaN};
  const double xmin = x.minCoeff();
  if (xmin == x.maxCoeff()) return {0.0, x[0], 0.0, 0.0};

  Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
  const double tm = t.mean();
  const double xm = x.mean();
  const double stt = ((t - tm) * (t - tm)).sum();
  const double stx = ((t - tm) * (x - xm)).sum();
  const double sxx = ((x - xm) * (x - xm)).sum();

  const double slope = stx / stt;
  const double intercept = xm - slope * tm;
  const double rvalue = stx / std::sqrt(stt * sxx);

  double se;
  if (n == 2) {
    se = 0.0;  // exact fit, zero residual
  } else {
    const Eigen::ArrayXd resid = x - (intercept + slope * t);
    const double rss = (resid * resid).sum();
    se = std::sqrt(rss / (static_cast<double>(n - 2) * stt));
  }
  return {slope, intercept, rvalue, se};
}

double autocorrelation(Series x, int lag) {
  const Eigen::Index n = x.size();
  if (lag < 1 || lag >= n) return kNaN;
  const double mu = x.mean();
  const double var = (x - mu).square().mean();
  if (var == 0.0) return 0.0;
  const Eigen::Index m = n - lag;
  double acc = 0.0;
  for (Eigen::Index t = 0; t < m; ++t) acc += (x[t] - mu) * (x[t + lag] - mu);
  return acc / (static_cast<double>(m) * var);
}

double cid_ce(Series x, bool normalize) {
  const Eigen::Index n = x.size();
  if (n < 2) return kNaN;
  if (!normalize) {
    const Eigen::ArrayXd d = forward_diff(x);
    return std::sqrt((d * d).sum());
  }
  const double mu = x.mean();
  const double sigma = std::sqrt((x - mu).square().mean());
  if (sigma == 0.0) return 0.0;
  const Eigen::ArrayXd z = (x - mu) / sigma;
  const Eigen::ArrayXd d = forward_diff(z);
  return std::sqrt((d * d).sum());
}

DerivStats derivative_stats(Series x, int order) {
  const Eigen::Index n = x.size();
  if (n < order + 1) return {kNaN, kNaN, kNaN, kNaN};
  Eigen::ArrayXd d = forward_diff(x);
  for (int k = 1; k < order; ++k) d = forward_diff(d);
  const double m = d.mean();
  const double sd = std::sqrt((d - m).square().mean());
  return {m, sd, d.minCoeff(), d.maxCoeff()};
}

StepStats step_features(Series x) {
  const Eigen::Index n = x.size();
  StepStats s{x[n - 1], 0.0, 0.0, 0.0};
  if (n >= 2) {
    const Eigen::ArrayXd d = forward_diff(x);
    s.max_step = d.abs().maxCoeff();
    s.mean_abs_change = d.abs().mean();
    s.mean_change = d.mean();
  }
  return s;
}

double mean(Series x) { return x.mean(); }

double median(Series x) {
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double population_variance(Series x) {
  const double mu = x.mean();
  return (x - mu).square().mean();
}

double population_std(Series x) { return std::sqrt(population_variance(x)); }

double minimum(Series x) { return x.minCoeff(); }
double maximum(Series x) { return x.maxCoeff(); }

double skewness(Series x) {
  const Eigen::Index n = x.size();
  if (n < 3) return kNaN;
  const double mu = x.mean();
  const double m2 = (x - mu).square().mean();
  if (m2 == 0.0) return kNaN;
  const double m3 = (x - mu).cube().mean();
  const double g1 = m3 / std::pow(m2, 1.5);
  const double dn = static_cast<double>(n);
  return g1 * std::sqrt(dn * (dn - 1.0)) / (dn - 2.0);
}

double kurtosis(Series x) {
  const Eigen::Index n = x.size();
  if (n < 4) return kNaN;
  const double mu = x.mean();
  const double m2 = (x - mu).square().mean();
  if (m2 == 0.0) return kNaN;
  const double m4 = (x - mu).square().square().mean();
  const double g2 = m4 / (m2 * m2) - 3.0;
  const double dn = static_cast<double>(n);
  return ((dn + 1.0) * g2 + 6.0) * (dn - 1.0) / ((dn - 2.0) * (dn - 3.0));
}

double quantile(Series x, double q) {
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double abs_energy(Series x) { return (x * x).sum(); }

double count_above_mean(Series x) {
  const double mu = x.mean();
  return static_cast<double>((x > mu).count());
}

double count_below_mean(Series x) {
  const double mu = x.mean();
  return static_cast<double>((x < mu).count());
}

namespace {

double longest_run(Series x, bool above) {
  const double mu = x.mean();
  Eigen::Index best = 0, cur = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const bool hit = above ? (x[i] > mu) : (x[i] < mu);
    cur = hit ? cur + 1 : 0;
    best = std::max(best, cur);
  }
  return static_cast<double>(best);
}

}  // namespace

double longest_strike_above_mean(Series x) { return longest_run(x, true); }
double longest_strike_below_mean(Series x) { return longest_run(x, false); }

double number_peaks(Series x, int n) {
  const Eigen::Index len = x.size();
  int peaks = 0;
  for (Eigen::Index i = n; i + n < len; ++i) {
    bool is_peak = true;
    for (int j = 1; j <= n && is_peak; ++j) {
      is_peak = x[i] > x[i - j] && x[i] > x[i + j];
    }
    peaks += is_peak ? 1 : 0;
  }
  return static_cast<double>(peaks);
}

double binned_entropy(Series x, int bins) {
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  if (lo == hi) return 0.0;
  std::vector<Eigen::Index> hist(static_cast<std::size_t>(bins), 0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    int b = static_cast<int>((x[i] - lo) / (hi - lo) * bins);
    if (b >= bins) b = bins - 1;  // x == max lands in the last bin
    hist[static_cast<std::size_t>(b)] += 1;
  }
  const double dn = static_cast<double>(x.size());
  double h = 0.0;
  for (Eigen::Index c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / dn;
    h -= p * std::log(p);
  }
  return h;
}

double ratio_beyond_r_sigma(Series x, double r) {
  const double mu = x.mean();
  const double sigma = std::sqrt((x - mu).square().mean());
  return static_cast<double>(((x - mu).abs() > r * sigma).count()) /
         static_cast<double>(x.size());
}

double sum_values(Series x) { return x.sum(); }

double count_nonzero(Series x) { return static_cast<double>((x != 0.0).count()); }

double first_nonzero_fraction(Series x) {
  const Eigen::Index n = x.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] != 0.0) {
      if (n == 1) return 0.0;
      return static_cast<double>(i) / static_cast<double>(n - 1);
    }
  }
  return kNaN;
}

double value_range(Series x) { return x.maxCoeff() - x.minCoeff(); }

double spatial_avg_position(const NozzleGrid& grid, NfcState nfc) {
  long sum = 0;
  int count = 0;
  for (int r = 0; r < kGridRows; ++r) {
    for (int c = 0; c < kGridCols; ++c) {
      if (grid.at(r, c) == nfc) {
        sum += c;
        ++count;
      }
    }
  }
  if (count == 0) return kNaN;
  return static_cast<double>(sum) / static_cast<double>(count);
}

double nf4_edge_run(const NozzleGrid& grid) {
  int best = 0;
  for (int r = 0; r < kGridRows; ++r) {
    int left = 0;
    while (left < kGridCols && grid.at(r, left) == NfcState::NF4) ++left;
    int right = 0;
    while (right < kGridCols && grid.at(r, kGridCols - 1 - right) == NfcState::NF4) ++right;
    best = std::max({best, left, right});
  }
  return static_cast<double>(best);
}

}  // namespace nozzlelog::features
