#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace nozzlelog::ml {

struct TreeParams {
  int max_depth = 20;
  int min_samples_split = 2;
  /// Columns considered per split; <= 0 means all columns.
  int max_features = 0;
  /// Extra-trees splitting: one uniform threshold per candidate column
  /// instead of exhaustive midpoints.
  bool random_thresholds = false;
};

struct TreeNode {
  int column = -1;  ///< -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  Eigen::VectorXd counts;  ///< per-class training rows that reached the node

  bool is_leaf() const { return column < 0; }
};

/// Gini impurity 1 - sum((c_k / N)^2). Throws DomainError on negative or
/// all-zero counts.
double gini(const Eigen::Ref<const Eigen::VectorXd>& counts);

/// CART-style classification tree. Greedy best split by weighted Gini
/// decrease; candidate thresholds are midpoints of sorted distinct values
/// (or one uniform draw per column in extra-trees mode). Ties are broken by
/// lowest column index, then lowest threshold. Zero-gain splits are taken:
/// an impure node splits whenever any candidate exists, which is what lets
/// depth-2 trees solve XOR-like data.
class DecisionTree {
public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, int n_classes);

  /// Fits on all rows of x. Labels must lie in [0, n_classes).
  static DecisionTree fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                          const TreeParams& params, std::uint64_t seed);

  /// Fits on an explicit row multiset (bootstrap samples pass duplicates).
  static DecisionTree fit_rows(const Eigen::MatrixXd& x, const std::vector<int>& y,
                               std::vector<int> rows, int n_classes, const TreeParams& params,
                               std::uint64_t seed);

  /// Leaf class frequencies for one row of x.
  Eigen::VectorXd row_proba(const Eigen::MatrixXd& x, Eigen::Index row) const;
  Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& x) const;
  /// Argmax of row_proba with lowest-class-index tie break.
  std::vector<int> predict(const Eigen::MatrixXd& x) const;

  /// Adds this tree's impurity decrease per column, weighted by node sample
  /// fraction, into acc (length >= any split column index).
  void accumulate_importance(Eigen::Ref<Eigen::VectorXd> acc) const;

  int depth() const;
  int n_classes() const { return n_classes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

private:
  std::vector<TreeNode> nodes_;
  int n_classes_ = 0;
};

/// Lowest-index argmax over a score row; shared tie rule for every model.
int argmax_class(const Eigen::Ref<const Eigen::VectorXd>& scores);

}  // namespace nozzlelog::ml
