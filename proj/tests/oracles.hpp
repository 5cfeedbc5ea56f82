#pragma once

// Brute-force reference implementations used as test oracles. Plain loops
// over std::vector<double>, written independently of the library kernels, so
// a defect would have to be introduced twice to slip through. Contracts:
// population variance, NaN for undefined values, no infinities.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double sum(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

inline double mean(const std::vector<double>& x) { return sum(x) / double(x.size()); }

inline double pvariance(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / double(x.size());
}

inline double pstd(const std::vector<double>& x) { return std::sqrt(pvariance(x)); }

inline double minimum(const std::vector<double>& x) {
  double m = x[0];
  for (double v : x) m = std::min(m, v);
  return m;
}

inline double maximum(const std::vector<double>& x) {
  double m = x[0];
  for (double v : x) m = std::max(m, v);
  return m;
}

inline double median(const std::vector<double>& x) {
  std::vector<double> v = x;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double quantile(const std::vector<double>& x, double q) {
  std::vector<double> v = x;
  std::sort(v.begin(), v.end());
  const double pos = q * double(v.size() - 1);
  const std::size_t lo = std::size_t(pos);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (pos - double(lo)) * (v[lo + 1] - v[lo]);
}

struct Trend {
  double slope, intercept, rvalue, stderr_;
};

inline Trend linear_trend(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) return {kNaN, kNaN, kNaN, kNaN};
  if (minimum(x) == maximum(x)) return {0.0, x[0], 0.0, 0.0};
  double tm = 0.0;
  for (std::size_t i = 0; i < n; ++i) tm += double(i);
  tm /= double(n);
  const double xm = mean(x);
  double stt = 0.0, stx = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = double(i) - tm;
    const double dx = x[i] - xm;
    stt += dt * dt;
    stx += dt * dx;
    sxx += dx * dx;
  }
  const double slope = stx / stt;
  const double intercept = xm - slope * tm;
  const double rvalue = stx / std::sqrt(stt * sxx);
  double se = 0.0;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = x[i] - (intercept + slope * double(i));
      rss += r * r;
    }
    se = std::sqrt(rss / (double(n - 2) * stt));
  }
  return {slope, intercept, rvalue, se};
}

inline double autocorrelation(const std::vector<double>& x, int lag) {
  const std::size_t n = x.size();
  if (lag < 1 || std::size_t(lag) >= n) return kNaN;
  const double mu = mean(x);
  const double var = pvariance(x);
  if (var == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t t = 0; t + std::size_t(lag) < n; ++t)
    acc += (x[t] - mu) * (x[t + std::size_t(lag)] - mu);
  return acc / (double(n - std::size_t(lag)) * var);
}

inline std::vector<double> diff(const std::vector<double>& x) {
  std::vector<double> d;
  for (std::size_t i = 1; i < x.size(); ++i) d.push_back(x[i] - x[i - 1]);
  return d;
}

inline double cid_ce(const std::vector<double>& x, bool normalize) {
  if (x.size() < 2) return kNaN;
  std::vector<double> z = x;
  if (normalize) {
    const double mu = mean(x);
    const double sd = pstd(x);
    if (sd == 0.0) return 0.0;
    for (double& v : z) v = (v - mu) / sd;
  }
  double s = 0.0;
  for (double d : diff(z)) s += d * d;
  return std::sqrt(s);
}

struct Deriv {
  double mean, std, min, max;
};

inline Deriv derivative_stats(const std::vector<double>& x, int order) {
  if (x.size() < std::size_t(order) + 1) return {kNaN, kNaN, kNaN, kNaN};
  std::vector<double> d = diff(x);
  for (int k = 1; k < order; ++k) d = diff(d);
  return {mean(d), pstd(d), minimum(d), maximum(d)};
}

struct Steps {
  double final_value, max_step, mean_abs_change, mean_change;
};

inline Steps step_features(const std::vector<double>& x) {
  Steps s{x.back(), 0.0, 0.0, 0.0};
  if (x.size() >= 2) {
    const std::vector<double> d = diff(x);
    double mx = 0.0, sa = 0.0, sc = 0.0;
    for (double v : d) {
      mx = std::max(mx, std::fabs(v));
      sa += std::fabs(v);
      sc += v;
    }
    s.max_step = mx;
    s.mean_abs_change = sa / double(d.size());
    s.mean_change = sc / double(d.size());
  }
  return s;
}

inline double skewness(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 3) return kNaN;
  const double mu = mean(x);
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    m2 += (v - mu) * (v - mu);
    m3 += (v - mu) * (v - mu) * (v - mu);
  }
  m2 /= double(n);
  m3 /= double(n);
  if (m2 == 0.0) return kNaN;
  const double g1 = m3 / std::pow(m2, 1.5);
  return g1 * std::sqrt(double(n) * double(n - 1)) / double(n - 2);
}

inline double kurtosis(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 4) return kNaN;
  const double mu = mean(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d2 = (v - mu) * (v - mu);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= double(n);
  m4 /= double(n);
  if (m2 == 0.0) return kNaN;
  const double g2 = m4 / (m2 * m2) - 3.0;
  const double dn = double(n);
  return ((dn + 1.0) * g2 + 6.0) * (dn - 1.0) / ((dn - 2.0) * (dn - 3.0));
}

inline double abs_energy(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

inline double count_above_mean(const std::vector<double>& x) {
  const double mu = mean(x);
  int c = 0;
  for (double v : x) c += v > mu ? 1 : 0;
  return double(c);
}

inline double count_below_mean(const std::vector<double>& x) {
  const double mu = mean(x);
  int c = 0;
  for (double v : x) c += v < mu ? 1 : 0;
  return double(c);
}

inline double longest_strike(const std::vector<double>& x, bool above) {
  const double mu = mean(x);
  int best = 0, cur = 0;
  for (double v : x) {
    cur = (above ? v > mu : v < mu) ? cur + 1 : 0;
    best = std::max(best, cur);
  }
  return double(best);
}

inline double number_peaks(const std::vector<double>& x, int n) {
  int peaks = 0;
  for (std::size_t i = std::size_t(n); i + std::size_t(n) < x.size(); ++i) {
    bool peak = true;
    for (int j = 1; j <= n; ++j)
      peak = peak && x[i] > x[i - std::size_t(j)] && x[i] > x[i + std::size_t(j)];
    peaks += peak ? 1 : 0;
  }
  return double(peaks);
}

inline double binned_entropy(const std::vector<double>& x, int bins) {
  const double lo = minimum(x), hi = maximum(x);
  if (lo == hi) return 0.0;
  std::vector<int> hist(std::size_t(bins), 0);
  for (double v : x) {
    int b = int((v - lo) / (hi - lo) * bins);
    if (b >= bins) b = bins - 1;
    hist[std::size_t(b)] += 1;
  }
  double h = 0.0;
  for (int c : hist) {
    if (c == 0) continue;
    const double p = double(c) / double(x.size());
    h -= p * std::log(p);
  }
  return h;
}

inline double ratio_beyond_r_sigma(const std::vector<double>& x, double r) {
  const double mu = mean(x);
  const double sd = pstd(x);
  int c = 0;
  for (double v : x) c += std::fabs(v - mu) > r * sd ? 1 : 0;
  return double(c) / double(x.size());
}

inline double count_nonzero(const std::vector<double>& x) {
  int c = 0;
  for (double v : x) c += v != 0.0 ? 1 : 0;
  return double(c);
}

inline double first_nonzero_fraction(const std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) return x.size() == 1 ? 0.0 : double(i) / double(x.size() - 1);
  return kNaN;
}

inline double value_range(const std::vector<double>& x) { return maximum(x) - minimum(x); }

// ---------------------------------------------------------------------------
// Multi-label metric oracles over 6-bit label masks (bit k = class k).

struct Prf {
  std::array<long, 6> tp{}, fp{}, fn{};
  std::array<double, 6> precision{}, recall{}, f1{};
  double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
};

inline Prf prf(const std::vector<unsigned>& truth, const std::vector<unsigned>& pred,
               unsigned exclude_mask) {
  Prf r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (int k = 0; k < 6; ++k) {
      const bool t = (truth[i] >> k) & 1u;
      const bool p = (pred[i] >> k) & 1u;
      if (t && p) r.tp[std::size_t(k)] += 1;
      if (!t && p) r.fp[std::size_t(k)] += 1;
      if (t && !p) r.fn[std::size_t(k)] += 1;
    }
  }
  double wsum = 0.0;
  for (int k = 0; k < 6; ++k) {
    const auto i = std::size_t(k);
    const double tp = double(r.tp[i]), fp = double(r.fp[i]), fn = double(r.fn[i]);
    r.precision[i] = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
    r.recall[i] = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
    r.f1[i] = r.precision[i] + r.recall[i] > 0.0
                  ? 2.0 * r.precision[i] * r.recall[i] / (r.precision[i] + r.recall[i])
                  : 0.0;
    if ((exclude_mask >> k) & 1u) continue;
    const double support = tp + fn;
    wsum += support;
    r.weighted_precision += support * r.precision[i];
    r.weighted_recall += support * r.recall[i];
    r.weighted_f1 += support * r.f1[i];
  }
  if (wsum > 0.0) {
    r.weighted_precision /= wsum;
    r.weighted_recall /= wsum;
    r.weighted_f1 /= wsum;
  } else {
    r.weighted_precision = r.weighted_recall = r.weighted_f1 = 0.0;
  }
  return r;
}

/// confusion[t][p] += 1 for every (t, p) pair of a sample's sets.
inline std::array<std::array<int, 6>, 6> confusion(const std::vector<unsigned>& truth,
                                                   const std::vector<unsigned>& pred) {
  std::array<std::array<int, 6>, 6> m{};
  for (std::size_t i = 0; i < truth.size(); ++i)
    for (int t = 0; t < 6; ++t)
      for (int p = 0; p < 6; ++p)
        if (((truth[i] >> t) & 1u) && ((pred[i] >> p) & 1u)) m[std::size_t(t)][std::size_t(p)] += 1;
  return m;
}

}  // namespace oracle
