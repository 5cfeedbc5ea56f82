#include "nozzlelog/ml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/rng.hpp"

namespace nozzlelog::ml {

namespace {

// Impurity for a node known to hold `total` > 0 rows.
double gini_unchecked(const Eigen::VectorXd& counts, double total) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < counts.size(); ++k) {
    const double f = counts[k] / total;
    acc += f * f;
  }
  return 1.0 - acc;
}

struct SplitChoice {
  int column = -1;
  double threshold = 0.0;
  double gain = -std::numeric_limits<double>::infinity();
};

struct Builder {
  const Eigen::MatrixXd& x;
  const std::vector<int>& y;
  int n_classes;
  const TreeParams& params;
  Rng rng;
  std::vector<TreeNode> nodes;

  Builder(const Eigen::MatrixXd& x_, const std::vector<int>& y_, int n_classes_,
          const TreeParams& params_, std::uint64_t seed)
      : x(x_), y(y_), n_classes(n_classes_), params(params_), rng(seed) {}

  // Candidate columns for one split: either every column or a partial
  // Fisher-Yates draw of max_features of them. Sorted ascending so the
  // lowest-column tie break is independent of draw order.
  std::vector<int> sample_columns() {
    const int p = static_cast<int>(x.cols());
    std::vector<int> cols(static_cast<std::size_t>(p));
    std::iota(cols.begin(), cols.end(), 0);
    const int m = params.max_features;
    if (m <= 0 || m >= p) return cols;
    for (int i = 0; i < m; ++i) {
      const auto j = rng.uniform_int(i, p - 1);
      std::swap(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    }
    cols.resize(static_cast<std::size_t>(m));
    std::sort(cols.begin(), cols.end());
    return cols;
  }

  SplitChoice best_split(const std::vector<int>& rows, const Eigen::VectorXd& counts,
                         double node_gini) {
    SplitChoice best;
    const double n = static_cast<double>(rows.size());
    Eigen::VectorXd left(n_classes);
    Eigen::VectorXd right(n_classes);
    std::vector<int> order;
    for (int col : sample_columns()) {
      if (params.random_thresholds) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int r : rows) {
          const double v = x(r, col);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (!(lo < hi)) continue;  // constant column
        const double thr = rng.uniform(lo, hi);
        left.setZero();
        double nl = 0.0;
        for (int r : rows) {
          if (x(r, col) <= thr) {
            left[y[static_cast<std::size_t>(r)]] += 1.0;
            nl += 1.0;
          }
        }
        const double nr = n - nl;
        right = counts - left;
        const double gain =
            node_gini - (nl / n) * gini_unchecked(left, nl) - (nr / n) * gini_unchecked(right, nr);
        if (gain > best.gain) best = {col, thr, gain};
      } else {
        order = rows;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return x(a, col) < x(b, col); });
        left.setZero();
        right = counts;
        double nl = 0.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
          const int r = order[i];
          left[y[static_cast<std::size_t>(r)]] += 1.0;
          right[y[static_cast<std::size_t>(r)]] -= 1.0;
          nl += 1.0;
          const double v = x(r, col);
          const double next = x(order[i + 1], col);
          if (!(v < next)) continue;  // threshold only between distinct values
          const double thr = 0.5 * (v + next);
          const double nr = n - nl;
          const double gain = node_gini - (nl / n) * gini_unchecked(left, nl) -
                              (nr / n) * gini_unchecked(right, nr);
          if (gain > best.gain) best = {col, thr, gain};
        }
      }
    }
    return best;
  }

  int build(std::vector<int>&& rows, int depth) {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_classes);
    for (int r : rows) counts[y[static_cast<std::size_t>(r)]] += 1.0;
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{});
    nodes[static_cast<std::size_t>(id)].counts = counts;
    const double n = static_cast<double>(rows.size());
    const double g = gini_unchecked(counts, n);
    if (depth >= params.max_depth || g <= 0.0 ||
        rows.size() < static_cast<std::size_t>(params.min_samples_split)) {
      return id;
    }
    const SplitChoice s = best_split(rows, counts, g);
    if (s.column < 0) return id;  // every candidate column was constant
    std::vector<int> lrows;
    std::vector<int> rrows;
    for (int r : rows) {
      (x(r, s.column) <= s.threshold ? lrows : rrows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left = build(std::move(lrows), depth + 1);
    const int right = build(std::move(rrows), depth + 1);
    auto& node = nodes[static_cast<std::size_t>(id)];
    node.column = s.column;
    node.threshold = s.threshold;
    node.left = left;
    node.right = right;
    return id;
  }
};

}  // namespace

double gini(const Eigen::Ref<const Eigen::VectorXd>& counts) {
  if (counts.size() == 0) throw DomainError("gini: empty count vector");
  double total = 0.0;
  for (Eigen::Index k = 0; k < counts.size(); ++k) {
    if (counts[k] < 0.0) throw DomainError("gini: negative count");
    total += counts[k];
  }
  if (total <= 0.0) throw DomainError("gini: all-zero counts");
  double acc = 0.0;
  for (Eigen::Index k = 0; k < counts.size(); ++k) {
    const double f = counts[k] / total;
    acc += f * f;
  }
  return 1.0 - acc;
}

int argmax_class(const Eigen::Ref<const Eigen::VectorXd>& scores) {
  if (scores.size() == 0) throw DomainError("argmax_class: empty scores");
  int best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = static_cast<int>(k);
  }
  return best;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, int n_classes)
    : nodes_(std::move(nodes)), n_classes_(n_classes) {}

DecisionTree DecisionTree::fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                               const TreeParams& params, std::uint64_t seed) {
  std::vector<int> rows(y.size());
  std::iota(rows.begin(), rows.end(), 0);
  return fit_rows(x, y, std::move(rows), n_classes, params, seed);
}

DecisionTree DecisionTree::fit_rows(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                    std::vector<int> rows, int n_classes, const TreeParams& params,
                                    std::uint64_t seed) {
  if (rows.empty() || x.rows() == 0) throw FitError("decision tree: empty training set");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw SchemaError("decision tree: row/label count mismatch");
  }
  if (n_classes < 1) throw DomainError("decision tree: n_classes must be positive");
  if (params.min_samples_split < 2) {
    throw ConfigError("decision tree: min_samples_split must be >= 2");
  }
  if (params.max_depth < 0) throw ConfigError("decision tree: max_depth must be >= 0");
  for (int r : rows) {
    if (r < 0 || r >= static_cast<int>(y.size())) {
      throw DomainError("decision tree: row index out of range");
    }
    const int label = y[static_cast<std::size_t>(r)];
    if (label < 0 || label >= n_classes) throw FitError("decision tree: label out of range");
  }
  Builder builder(x, y, n_classes, params, seed);
  builder.build(std::move(rows), 0);
  return DecisionTree(std::move(builder.nodes), n_classes);
}

Eigen::VectorXd DecisionTree::row_proba(const Eigen::MatrixXd& x, Eigen::Index row) const {
  if (nodes_.empty()) throw DomainError("decision tree: not fitted");
  const TreeNode* node = &nodes_[0];
  while (!node->is_leaf()) {
    const int next = x(row, node->column) <= node->threshold ? node->left : node->right;
    node = &nodes_[static_cast<std::size_t>(next)];
  }
  return node->counts / node->counts.sum();
}

Eigen::MatrixXd DecisionTree::predict_proba(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd out(x.rows(), n_classes_);
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = row_proba(x, i).transpose();
  return out;
}

std::vector<int> DecisionTree::predict(const Eigen::MatrixXd& x) const {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = argmax_class(row_proba(x, i));
  }
  return out;
}

void DecisionTree::accumulate_importance(Eigen::Ref<Eigen::VectorXd> acc) const {
  if (nodes_.empty()) return;
  const double n_root = nodes_[0].counts.sum();
  for (const TreeNode& node : nodes_) {
    if (node.is_leaf()) continue;
    const auto& left = nodes_[static_cast<std::size_t>(node.left)];
    const auto& right = nodes_[static_cast<std::size_t>(node.right)];
    const double n = node.counts.sum();
    const double nl = left.counts.sum();
    const double nr = right.counts.sum();
    const double decrease = n * gini_unchecked(node.counts, n) -
                            nl * gini_unchecked(left.counts, nl) -
                            nr * gini_unchecked(right.counts, nr);
    acc[node.column] += decrease / n_root;
  }
}

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  int max_depth = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [id, d] = stack.back();
    stack.pop_back();
    const TreeNode& node = nodes_[static_cast<std::size_t>(id)];
    max_depth = std::max(max_depth, d);
    if (!node.is_leaf()) {
      stack.emplace_back(node.left, d + 1);
      stack.emplace_back(node.right, d + 1);
    }
  }
  return max_depth;
}

}  // namespace nozzlelog::ml
