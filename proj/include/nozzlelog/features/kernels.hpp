#pragma once

#include <Eigen/Dense>

#include "nozzlelog/core/types.hpp"

namespace nozzlelog::features {

using Series = Eigen::Ref<const Eigen::ArrayXd>;

/// NaN marks an undefined feature value; the pipeline imputes it later.
/// Kernels never produce infinities. Variance is population (1/n) throughout.

struct LinearTrend {
  double slope;
  double intercept;
  double rvalue;
  double stderr_;
};

/// Ordinary least squares of x against t = 0..n-1. Constant series yields
/// (0, x0, 0, 0); n < 2 yields NaNs.
LinearTrend linear_trend(Series x);

/// R(lag) = sum_{t<n-lag} (x_t-mu)(x_{t+lag}-mu) / ((n-lag) * sigma^2) with
/// full-series mean and population variance. 0 when sigma^2 = 0; NaN when the
/// lag is out of range.
double autocorrelation(Series x, int lag);

/// sqrt(sum of squared consecutive differences); the normalized variant
/// z-scores first (population sigma) and is 0 for constant series.
double cid_ce(Series x, bool normalize);

struct DerivStats {
  double mean;
  double std;
  double min;
  double max;
};

/// Statistics of the order-th forward difference (order 1 or 2). Population
/// std. NaN tuple when the series is too short.
DerivStats derivative_stats(Series x, int order);

struct StepStats {
  double final_value;
  double max_step;          // max |x_{t+1} - x_t|, 0 for singletons
  double mean_abs_change;   // 0 for singletons
  double mean_change;       // 0 for singletons
};

StepStats step_features(Series x);

double mean(Series x);
double median(Series x);
double population_variance(Series x);
double population_std(Series x);
double minimum(Series x);
double maximum(Series x);

/// Adjusted Fisher-Pearson skewness; NaN when n < 3 or sigma = 0.
double skewness(Series x);
/// Bias-corrected excess kurtosis; NaN when n < 4 or sigma = 0.
double kurtosis(Series x);

/// Linear interpolation at sorted position (n-1)*q.
double quantile(Series x, double q);

double abs_energy(Series x);
double count_above_mean(Series x);
double count_below_mean(Series x);
double longest_strike_above_mean(Series x);
double longest_strike_below_mean(Series x);

/// Interior points strictly greater than all n neighbors on each side.
double number_peaks(Series x, int n);

/// Shannon entropy (natural log) of an equal-width histogram over [min, max];
/// 0 for constant series.
double binned_entropy(Series x, int bins);

/// Fraction of values with |x - mu| > r * sigma.
double ratio_beyond_r_sigma(Series x, double r);

double sum_values(Series x);
double count_nonzero(Series x);

/// Index of the first nonzero sample divided by n-1 (0 for a nonzero
/// singleton); NaN when the series is all zero.
double first_nonzero_fraction(Series x);

double value_range(Series x);

// ---------------------------------------------------------------------------
// Spatial features on the terminal grid

/// Mean 0-based column index over cells in the given state; NaN when absent.
double spatial_avg_position(const NozzleGrid& grid, NfcState nfc);

/// Longest NF4 run starting at a row edge: 8 candidates (4 rows x 2 edges),
/// maximum returned; 0 when no edge cell is NF4.
double nf4_edge_run(const NozzleGrid& grid);

}  // namespace nozzlelog::features
