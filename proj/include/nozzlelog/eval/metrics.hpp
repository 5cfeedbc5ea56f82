#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "nozzlelog/core/types.hpp"

namespace nozzlelog::eval {

struct ClassScores {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;  // 0 when tp + fp == 0
  double recall = 0.0;     // 0 when tp + fn == 0
  double f1 = 0.0;         // 0 when precision == recall == 0

  long support() const { return tp + fn; }
};

struct PrfResult {
  std::array<ClassScores, kNumLabels> per_class;
  /// Support-weighted averages over the non-excluded classes.
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  LabelSet excluded;  ///< classes left out of the weighted averages
};

/// Per-class multi-label precision/recall/F1 with support weighting.
/// Zero denominators score 0 so the weighted averages stay defined.
/// Throws EvalError on length mismatch.
PrfResult multilabel_prf(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred,
                         const LabelSet& exclude = LabelSet());

using ConfusionMatrix = Eigen::Matrix<int, kNumLabels, kNumLabels>;

/// Rows = true class, columns = predicted class. Per sample every
/// (t in true, p in pred) pair increments (t, p); dual-labeled heads can
/// therefore push row sums above the class support.
ConfusionMatrix confusion_matrix(const std::vector<LabelSet>& truth,
                                 const std::vector<LabelSet>& pred);

}  // namespace nozzlelog::eval
