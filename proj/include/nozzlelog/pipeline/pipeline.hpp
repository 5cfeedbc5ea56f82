#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nozzlelog/core/types.hpp"
#include "nozzlelog/features/extract.hpp"

namespace nozzlelog::pipeline {

using features::FeatureMatrix;

/// Imputation + standard-scaling statistics, fitted on training rows only.
struct ImputeScaleState {
  Eigen::VectorXd impute_mean;  // NaN-ignoring column mean; all-NaN column -> 0
  Eigen::VectorXd scale_mean;   // mean of the imputed training column
  Eigen::VectorXd scale_std;    // population std; exactly 0 is kept as-is and treated as 1
};

ImputeScaleState fit_impute_scale(const FeatureMatrix& train);

/// L1-penalized squared-hinge binary classifier, the selector's work-horse:
///   minimize ||w||_1 + strength * sum_i max(0, 1 - y_i (x_i . w + b))^2
/// Deterministic cyclic coordinate descent with a Newton step, soft threshold
/// and halving line search. y entries must be +-1.
std::pair<Eigen::VectorXd, double> l1_hinge_fit(const Eigen::MatrixXd& X,
                                                const Eigen::VectorXd& y, double strength,
                                                int max_epochs = 1000, double tol = 1e-6);

double l1_hinge_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w, double b, double strength);

struct SelectorResult {
  std::vector<Eigen::Index> selected;  // ascending column indices, never empty
  Eigen::MatrixXd coefficients;        // kNumLabels x p; zero rows for absent classes
  Eigen::VectorXd bias;                // per class
  bool fallback = false;               // true when the nonzero union was empty
};

/// One binary model per class (one-vs-rest targets from the label sets);
/// keeps columns with a nonzero coefficient in any model. Empty union falls
/// back to the 32 columns with the largest |coefficient| sums.
SelectorResult fit_l1_selector(const Eigen::MatrixXd& scaled,
                               const std::vector<LabelSet>& labels, double strength = 0.01);

struct FittedPipeline {
  ImputeScaleState stats;
  std::vector<Eigen::Index> selected;
  std::vector<std::string> columns;  // fit-time column names, order included
  std::string catalog_digest;        // header digest of the fit-time matrix
  std::uint64_t seed = 0;
  bool selector_fallback = false;

  /// impute -> scale -> project onto the selected columns. Throws SchemaError
  /// when x's columns differ from the fit-time columns.
  FeatureMatrix transform(const FeatureMatrix& x) const;
};

/// labels run parallel to train.head_ids.
FittedPipeline fit_pipeline(const FeatureMatrix& train, const std::vector<LabelSet>& labels,
                            double strength = 0.01, std::uint64_t seed = 0);

/// Versioned text artifact; read(write(p)) reproduces p bit-exactly.
void write_pipeline(const FittedPipeline& p, const std::string& path);
FittedPipeline read_pipeline(const std::string& path);

}  // namespace nozzlelog::pipeline
