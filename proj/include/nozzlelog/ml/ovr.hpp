#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nozzlelog/core/types.hpp"
#include "nozzlelog/ml/forest.hpp"
#include "nozzlelog/ml/knn.hpp"
#include "nozzlelog/ml/logreg.hpp"
#include "nozzlelog/ml/tree.hpp"

namespace nozzlelog::ml {

enum class BaseModel { Dt, Rf, Et, Knn, Logreg };

/// Accepts "dt" or "ovr-dt" (and so on); throws UnsupportedModelError.
BaseModel base_model_from_name(std::string_view name);
std::string_view base_model_name(BaseModel base);  // "dt", "rf", ...
std::string ovr_model_name(BaseModel base);        // "ovr-dt", ...

struct OvrParams {
  BaseModel base = BaseModel::Rf;
  TreeParams tree;      // dt
  ForestParams forest;  // rf/et; bootstrap is forced from `base` at fit time
  KnnParams knn;
  LogRegParams logreg;
};

/// Degenerate binary problem stand-in: a fixed score for every row.
struct ConstantScorer {
  double value = 0.0;
};

using BinaryScorer = std::variant<ConstantScorer, DecisionTree, Forest, Knn, LogReg>;

/// P(class = 1) per row of x under one binary scorer.
Eigen::VectorXd scorer_scores(const BinaryScorer& scorer, const Eigen::MatrixXd& x,
                              unsigned workers = 1);

/// One-vs-rest multi-label wrapper over the fixed six-class label universe.
/// Class k's binary target is "k is in the row's label set"; dual-labeled
/// rows are positives for every class they carry. Scorer k is seeded with
/// mix_seed(seed, k).
class OvrClassifier {
public:
  OvrClassifier() = default;
  OvrClassifier(std::vector<BinaryScorer> scorers, OvrParams params, std::uint64_t seed);

  /// strict=true throws FitError when a class has no positive training row;
  /// strict=false substitutes a constant-0 scorer and appends a note.
  static OvrClassifier fit(const Eigen::MatrixXd& x, const std::vector<LabelSet>& labels,
                           const OvrParams& params, std::uint64_t seed, bool strict = true,
                           unsigned workers = 1, std::vector<std::string>* notes = nullptr);

  /// Per-class scores, n x kNumLabels in Label order.
  Eigen::MatrixXd scores(const Eigen::MatrixXd& x, unsigned workers = 1) const;
  std::vector<LabelSet> predict(const Eigen::MatrixXd& x, unsigned workers = 1) const;

  /// Threshold at 0.5; if nothing clears it, the argmax class (lowest index
  /// on ties). Other is dropped whenever a pattern is also predicted, so the
  /// result is always canonical and never empty.
  static LabelSet decide(const Eigen::Ref<const Eigen::VectorXd>& score_row);

  const std::vector<BinaryScorer>& scorers() const { return scorers_; }
  const OvrParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

private:
  std::vector<BinaryScorer> scorers_;  // one per Label, in Label order
  OvrParams params_;
  std::uint64_t seed_ = 0;
};

}  // namespace nozzlelog::ml
