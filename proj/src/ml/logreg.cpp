#include "nozzlelog/ml/logreg.hpp"

#include <cmath>
#include <utility>

#include "nozzlelog/errors.hpp"

namespace nozzlelog::ml {

namespace {

double softplus(double u) {
  // log(1 + exp(u)) without overflow.
  return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_inputs(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (x.rows() == 0) throw FitError("logreg: empty training set");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw SchemaError("logreg: row/label count mismatch");
  }
  if (!x.allFinite()) throw FitError("logreg: non-finite input");
  for (int v : y) {
    if (v != 0 && v != 1) throw FitError("logreg: labels must be 0/1");
  }
}

}  // namespace

double logreg_loss(const Eigen::MatrixXd& x, const std::vector<int>& y,
                   const Eigen::Ref<const Eigen::VectorXd>& w, double b, double l2) {
  const Eigen::VectorXd z = (x * w).array() + b;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    // y=1 contributes softplus(-z), y=0 softplus(z).
    acc += softplus(y[static_cast<std::size_t>(i)] == 1 ? -z[i] : z[i]);
  }
  return acc / static_cast<double>(z.size()) + 0.5 * l2 * w.squaredNorm();
}

void logreg_gradient(const Eigen::MatrixXd& x, const std::vector<int>& y,
                     const Eigen::Ref<const Eigen::VectorXd>& w, double b, double l2,
                     Eigen::VectorXd& grad_w, double& grad_b) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd resid(n);
  const Eigen::VectorXd z = (x * w).array() + b;
  for (Eigen::Index i = 0; i < n; ++i) {
    resid[i] = sigmoid(z[i]) - static_cast<double>(y[static_cast<std::size_t>(i)]);
  }
  grad_w = x.transpose() * resid / static_cast<double>(n) + l2 * w;
  grad_b = resid.mean();
}

LogReg::LogReg(Eigen::VectorXd w, double b, LogRegParams params)
    : w_(std::move(w)), b_(b), params_(params) {}

LogReg LogReg::fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                   const LogRegParams& params) {
  check_inputs(x, y);
  if (params.epochs <= 0) throw ConfigError("logreg: epochs must be positive");
  if (!(params.lr > 0.0)) throw ConfigError("logreg: lr must be positive");

  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  double b = 0.0;
  double loss = logreg_loss(x, y, w, b, params.l2);
  double lr = params.lr;
  Eigen::VectorXd grad_w(x.cols());
  double grad_b = 0.0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    logreg_gradient(x, y, w, b, params.l2, grad_w, grad_b);
    // Halve the step until the loss is non-increasing; keep the shrunken
    // rate for later epochs.
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      const Eigen::VectorXd w_trial = w - lr * grad_w;
      const double b_trial = b - lr * grad_b;
      const double trial = logreg_loss(x, y, w_trial, b_trial, params.l2);
      if (trial <= loss) {
        w = w_trial;
        b = b_trial;
        const double delta = loss - trial;
        loss = trial;
        accepted = true;
        if (delta < params.tol) return LogReg(std::move(w), b, params);
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) break;  // no descent step left at any rate
  }
  return LogReg(std::move(w), b, params);
}

Eigen::VectorXd LogReg::scores(const Eigen::MatrixXd& x) const {
  if (x.cols() != w_.size()) throw SchemaError("logreg: column count mismatch");
  Eigen::VectorXd z = (x * w_).array() + b_;
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigmoid(z[i]);
  return z;
}

Eigen::MatrixXd LogReg::predict_proba(const Eigen::MatrixXd& x) const {
  const Eigen::VectorXd s = scores(x);
  Eigen::MatrixXd out(x.rows(), 2);
  out.col(0) = (1.0 - s.array()).matrix();
  out.col(1) = s;
  return out;
}

}  // namespace nozzlelog::ml
