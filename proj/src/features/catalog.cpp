#include "nozzlelog/features/catalog.hpp"

#include <cstdio>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/features/kernels.hpp"
#include "nozzlelog/util/hash.hpp"

namespace nozzlelog::features {

namespace {

using SeriesFn = std::function<double(const Eigen::ArrayXd&)>;

void add_series_family(FeatureCatalog& cat, int ch, const std::string& name, SeriesFn fn) {
  CatalogEntry e;
  e.name = "ch" + std::to_string(ch) + "__" + name;
  e.channel = ch;
  e.series_fn = std::move(fn);
  cat.add(std::move(e));
}

}  // namespace

void FeatureCatalog::add(CatalogEntry entry) {
  if (column_index(entry.name) >= 0) throw ConfigError("duplicate catalog column: " + entry.name);
  entries_.push_back(std::move(entry));
}

std::vector<std::string> FeatureCatalog::column_names() const {
  std::vector<std::string> names;
  names.reserve(entries_.size());
  for (const auto& e : entries_) names.push_back(e.name);
  return names;
}

std::string FeatureCatalog::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& e : entries_) {
    h = fnv1a64(e.name, h);
    h = fnv1a64(",", h);
  }
  return to_hex(h);
}

int FeatureCatalog::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

FeatureCatalog FeatureCatalog::default_catalog() {
  FeatureCatalog cat;
  for (int ch = 0; ch < kNumChannels; ++ch) {
    add_series_family(cat, ch, "linear_trend__slope",
                      [](const Eigen::ArrayXd& x) { return linear_trend(x).slope; });
    add_series_family(cat, ch, "linear_trend__intercept",
                      [](const Eigen::ArrayXd& x) { return linear_trend(x).intercept; });
    add_series_family(cat, ch, "linear_trend__rvalue",
                      [](const Eigen::ArrayXd& x) { return linear_trend(x).rvalue; });
    add_series_family(cat, ch, "linear_trend__stderr",
                      [](const Eigen::ArrayXd& x) { return linear_trend(x).stderr_; });
    for (int lag : {1, 2, 3, 5}) {
      add_series_family(cat, ch, "autocorrelation__lag_" + std::to_string(lag),
                        [lag](const Eigen::ArrayXd& x) { return autocorrelation(x, lag); });
    }
    add_series_family(cat, ch, "cid_ce__raw",
                      [](const Eigen::ArrayXd& x) { return cid_ce(x, false); });
    add_series_family(cat, ch, "cid_ce__normalized",
                      [](const Eigen::ArrayXd& x) { return cid_ce(x, true); });
    for (int order : {1, 2}) {
      const std::string prefix = "derivative__order" + std::to_string(order) + "_";
      add_series_family(cat, ch, prefix + "mean",
                        [order](const Eigen::ArrayXd& x) { return derivative_stats(x, order).mean; });
      add_series_family(cat, ch, prefix + "std",
                        [order](const Eigen::ArrayXd& x) { return derivative_stats(x, order).std; });
      add_series_family(cat, ch, prefix + "min",
                        [order](const Eigen::ArrayXd& x) { return derivative_stats(x, order).min; });
      add_series_family(cat, ch, prefix + "max",
                        [order](const Eigen::ArrayXd& x) { return derivative_stats(x, order).max; });
    }
    add_series_family(cat, ch, "final_value",
                      [](const Eigen::ArrayXd& x) { return step_features(x).final_value; });
    add_series_family(cat, ch, "max_step",
                      [](const Eigen::ArrayXd& x) { return step_features(x).max_step; });
    add_series_family(cat, ch, "mean_abs_change",
                      [](const Eigen::ArrayXd& x) { return step_features(x).mean_abs_change; });
    add_series_family(cat, ch, "mean_change",
                      [](const Eigen::ArrayXd& x) { return step_features(x).mean_change; });
    add_series_family(cat, ch, "mean", [](const Eigen::ArrayXd& x) { return mean(x); });
    add_series_family(cat, ch, "median", [](const Eigen::ArrayXd& x) { return median(x); });
    add_series_family(cat, ch, "std", [](const Eigen::ArrayXd& x) { return population_std(x); });
    add_series_family(cat, ch, "variance",
                      [](const Eigen::ArrayXd& x) { return population_variance(x); });
    add_series_family(cat, ch, "minimum", [](const Eigen::ArrayXd& x) { return minimum(x); });
    add_series_family(cat, ch, "maximum", [](const Eigen::ArrayXd& x) { return maximum(x); });
    add_series_family(cat, ch, "skewness", [](const Eigen::ArrayXd& x) { return skewness(x); });
    add_series_family(cat, ch, "kurtosis", [](const Eigen::ArrayXd& x) { return kurtosis(x); });
    for (double q : {0.05, 0.25, 0.75, 0.95}) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "q_%.2f", q);
      add_series_family(cat, ch, std::string("quantile__") + buf,
                        [q](const Eigen::ArrayXd& x) { return quantile(x, q); });
    }
    add_series_family(cat, ch, "abs_energy", [](const Eigen::ArrayXd& x) { return abs_energy(x); });
    add_series_family(cat, ch, "count_above_mean",
                      [](const Eigen::ArrayXd& x) { return count_above_mean(x); });
    add_series_family(cat, ch, "count_below_mean",
                      [](const Eigen::ArrayXd& x) { return count_below_mean(x); });
    add_series_family(cat, ch, "longest_strike_above_mean",
                      [](const Eigen::ArrayXd& x) { return longest_strike_above_mean(x); });
    add_series_family(cat, ch, "longest_strike_below_mean",
                      [](const Eigen::ArrayXd& x) { return longest_strike_below_mean(x); });
    for (int np : {1, 3, 5}) {
      add_series_family(cat, ch, "number_peaks__n_" + std::to_string(np),
                        [np](const Eigen::ArrayXd& x) { return number_peaks(x, np); });
    }
    for (int bins : {5, 10}) {
      add_series_family(cat, ch, "binned_entropy__bins_" + std::to_string(bins),
                        [bins](const Eigen::ArrayXd& x) { return binned_entropy(x, bins); });
    }
    for (int r : {1, 2}) {
      add_series_family(cat, ch, "ratio_beyond_r_sigma__r_" + std::to_string(r),
                        [r](const Eigen::ArrayXd& x) { return ratio_beyond_r_sigma(x, r); });
    }
    add_series_family(cat, ch, "sum_values", [](const Eigen::ArrayXd& x) { return sum_values(x); });
    add_series_family(cat, ch, "count_nonzero",
                      [](const Eigen::ArrayXd& x) { return count_nonzero(x); });
    add_series_family(cat, ch, "first_nonzero_fraction",
                      [](const Eigen::ArrayXd& x) { return first_nonzero_fraction(x); });
    add_series_family(cat, ch, "value_range",
                      [](const Eigen::ArrayXd& x) { return value_range(x); });
  }

  for (int k = 0; k < kNumChannels; ++k) {
    CatalogEntry e;
    e.name = "spatial__avg_position__NF" + std::to_string(k + 1);
    e.channel = -1;
    const NfcState state = static_cast<NfcState>(k + 1);
    e.grid_fn = [state](const NozzleGrid& g) { return spatial_avg_position(g, state); };
    cat.add(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "spatial__nf4_edge_run";
    e.channel = -1;
    e.grid_fn = [](const NozzleGrid& g) { return nf4_edge_run(g); };
    cat.add(std::move(e));
  }
  return cat;
}

}  // namespace nozzlelog::features
