#include "nozzlelog/ml/forest.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/parallel.hpp"
#include "nozzlelog/util/rng.hpp"

namespace nozzlelog::ml {

Forest::Forest(std::vector<DecisionTree> trees, ForestParams params, int n_classes,
               Eigen::Index n_features, std::uint64_t seed)
    : trees_(std::move(trees)),
      params_(params),
      n_classes_(n_classes),
      n_features_(n_features),
      seed_(seed) {}

Forest Forest::fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                   const ForestParams& params, std::uint64_t seed, unsigned workers) {
  if (params.n_trees <= 0) throw ConfigError("forest: n_trees must be positive");
  if (x.rows() == 0) throw FitError("forest: empty training set");

  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_samples_split = params.min_samples_split;
  tp.max_features = params.max_features >= 0
                        ? params.max_features
                        : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));
  tp.random_thresholds = !params.bootstrap;

  const std::size_t n = static_cast<std::size_t>(x.rows());
  std::vector<DecisionTree> trees(static_cast<std::size_t>(params.n_trees));
  parallel_for(trees.size(), workers, [&](std::size_t t) {
    const std::uint64_t tree_seed = mix_seed(seed, t);
    std::vector<int> rows;
    if (params.bootstrap) {
      Rng boot(mix_seed(tree_seed, 0));
      rows.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        rows[i] = static_cast<int>(boot.uniform_int(0, static_cast<std::int64_t>(n) - 1));
      }
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), 0);
    }
    trees[t] = DecisionTree::fit_rows(x, y, std::move(rows), n_classes, tp, mix_seed(tree_seed, 1));
  });
  return Forest(std::move(trees), params, n_classes, x.cols(), seed);
}

Eigen::MatrixXd Forest::predict_proba(const Eigen::MatrixXd& x) const {
  if (trees_.empty()) throw DomainError("forest: not fitted");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), n_classes_);
  for (const DecisionTree& tree : trees_) out += tree.predict_proba(x);
  out /= static_cast<double>(trees_.size());
  return out;
}

std::vector<int> Forest::predict(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd proba = predict_proba(x);
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = argmax_class(proba.row(i).transpose());
  }
  return out;
}

Eigen::VectorXd Forest::gini_importance() const {
  if (trees_.empty()) throw DomainError("forest: not fitted");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n_features_);
  for (const DecisionTree& tree : trees_) tree.accumulate_importance(acc);
  acc /= static_cast<double>(trees_.size());
  const double total = acc.sum();
  if (total > 0.0) acc /= total;
  return acc;
}

}  // namespace nozzlelog::ml
