#include "nozzlelog/ml/knn.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/ml/tree.hpp"
#include "nozzlelog/util/parallel.hpp"

namespace nozzlelog::ml {

Knn::Knn(Eigen::MatrixXd train, std::vector<int> y, int n_classes, KnnParams params)
    : train_(std::move(train)), y_(std::move(y)), n_classes_(n_classes), params_(params) {}

Knn Knn::fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
             const KnnParams& params) {
  if (params.k <= 0) throw ConfigError("knn: k must be positive");
  if (x.rows() == 0) throw FitError("knn: empty training set");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw SchemaError("knn: row/label count mismatch");
  }
  if (params.k > static_cast<int>(x.rows())) throw ConfigError("knn: k exceeds training rows");
  for (int label : y) {
    if (label < 0 || label >= n_classes) throw FitError("knn: label out of range");
  }
  return Knn(x, y, n_classes, params);
}

Eigen::MatrixXd Knn::predict_proba(const Eigen::MatrixXd& q, unsigned workers) const {
  if (train_.rows() == 0) throw DomainError("knn: not fitted");
  if (q.cols() != train_.cols()) throw SchemaError("knn: query column count mismatch");
  const int k = params_.k;
  Eigen::MatrixXd out(q.rows(), n_classes_);
  parallel_for(static_cast<std::size_t>(q.rows()), workers, [&](std::size_t qi) {
    const Eigen::Index i = static_cast<Eigen::Index>(qi);
    // Squared distances order identically to Euclidean ones.
    const Eigen::VectorXd d2 =
        (train_.rowwise() - q.row(i)).rowwise().squaredNorm();
    std::vector<int> idx(static_cast<std::size_t>(train_.rows()));
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
      if (d2[a] != d2[b]) return d2[a] < d2[b];
      return a < b;
    });
    Eigen::VectorXd votes = Eigen::VectorXd::Zero(n_classes_);
    for (int j = 0; j < k; ++j) votes[y_[static_cast<std::size_t>(idx[j])]] += 1.0;
    out.row(i) = (votes / static_cast<double>(k)).transpose();
  });
  return out;
}

std::vector<int> Knn::predict(const Eigen::MatrixXd& q, unsigned workers) const {
  const Eigen::MatrixXd proba = predict_proba(q, workers);
  std::vector<int> out(static_cast<std::size_t>(q.rows()));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = argmax_class(proba.row(i).transpose());
  }
  return out;
}

}  // namespace nozzlelog::ml
