#pragma once

#include <vector>

#include <Eigen/Dense>

namespace nozzlelog::ml {

struct LogRegParams {
  double l2 = 1e-4;
  int epochs = 500;
  double lr = 1.0;
  double tol = 1e-8;
};

/// Mean log-loss plus 0.5 * l2 * ||w||^2 (bias unregularized). Computed with
/// the softplus form, stable for large |margins|.
double logreg_loss(const Eigen::MatrixXd& x, const std::vector<int>& y,
                   const Eigen::Ref<const Eigen::VectorXd>& w, double b, double l2);

/// Gradient of logreg_loss in (w, b).
void logreg_gradient(const Eigen::MatrixXd& x, const std::vector<int>& y,
                     const Eigen::Ref<const Eigen::VectorXd>& w, double b, double l2,
                     Eigen::VectorXd& grad_w, double& grad_b);

/// Binary logistic regression fitted by full-batch gradient descent with
/// step halving, so the loss never increases across epochs. Deterministic:
/// zero initialization, fixed epoch budget, tolerance on the loss delta.
class LogReg {
public:
  LogReg() = default;
  LogReg(Eigen::VectorXd w, double b, LogRegParams params);

  /// y must be 0/1. Throws FitError on non-finite input.
  static LogReg fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                    const LogRegParams& params);

  /// sigmoid(x w + b) per row.
  Eigen::VectorXd scores(const Eigen::MatrixXd& x) const;
  /// Two columns: [1 - score, score].
  Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& x) const;

  const Eigen::VectorXd& weights() const { return w_; }
  double bias() const { return b_; }
  const LogRegParams& params() const { return params_; }

private:
  Eigen::VectorXd w_;
  double b_ = 0.0;
  LogRegParams params_;
};

}  // namespace nozzlelog::ml
