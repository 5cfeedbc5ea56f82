#pragma once

#include <vector>

#include <Eigen/Dense>

namespace nozzlelog::ml {

struct KnnParams {
  int k = 5;
};

/// Brute-force k-nearest-neighbour classifier. Euclidean metric; distance
/// ties break by training-row index, vote ties by lowest class index.
class Knn {
public:
  Knn() = default;
  Knn(Eigen::MatrixXd train, std::vector<int> y, int n_classes, KnnParams params);

  static Knn fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                 const KnnParams& params);

  /// Vote fractions among the k nearest; rows sum to 1.
  Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& q, unsigned workers = 1) const;
  std::vector<int> predict(const Eigen::MatrixXd& q, unsigned workers = 1) const;

  const Eigen::MatrixXd& train() const { return train_; }
  const std::vector<int>& labels() const { return y_; }
  const KnnParams& params() const { return params_; }
  int n_classes() const { return n_classes_; }

private:
  Eigen::MatrixXd train_;
  std::vector<int> y_;
  int n_classes_ = 0;
  KnnParams params_;
};

}  // namespace nozzlelog::ml
