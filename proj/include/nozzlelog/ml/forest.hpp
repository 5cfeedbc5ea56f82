#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nozzlelog/ml/tree.hpp"

namespace nozzlelog::ml {

struct ForestParams {
  int n_trees = 50;
  int max_depth = 20;
  int min_samples_split = 2;
  /// Columns per split; < 0 derives ceil(sqrt(p)) at fit time.
  int max_features = -1;
  /// true = random forest (bootstrap rows, midpoint thresholds);
  /// false = extra trees (full sample, uniform random thresholds).
  bool bootstrap = true;
};

/// Bagged tree ensemble. Tree t draws its bootstrap rows and split
/// randomness from mix_seed(seed, t), so results are identical for any
/// worker count and fitting order.
class Forest {
public:
  Forest() = default;
  Forest(std::vector<DecisionTree> trees, ForestParams params, int n_classes,
         Eigen::Index n_features, std::uint64_t seed);

  static Forest fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                    const ForestParams& params, std::uint64_t seed, unsigned workers = 1);

  /// Mean of per-tree leaf class frequencies; rows sum to 1.
  Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;

  /// Mean decrease in impurity, weighted by node sample fraction, averaged
  /// over trees and normalized to sum to 1. Unused features get exactly 0.
  Eigen::VectorXd gini_importance() const;

  const std::vector<DecisionTree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }
  int n_classes() const { return n_classes_; }
  Eigen::Index n_features() const { return n_features_; }
  std::uint64_t seed() const { return seed_; }

private:
  std::vector<DecisionTree> trees_;
  ForestParams params_;
  int n_classes_ = 0;
  Eigen::Index n_features_ = 0;
  std::uint64_t seed_ = 0;
};

}  // namespace nozzlelog::ml
