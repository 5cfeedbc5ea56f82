#include "nozzlelog/eval/metrics.hpp"

#include "nozzlelog/errors.hpp"

namespace nozzlelog::eval {

PrfResult multilabel_prf(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred,
                         const LabelSet& exclude) {
  if (truth.size() != pred.size()) {
    throw EvalError("multilabel_prf: truth and prediction lengths differ");
  }
  PrfResult out;
  out.excluded = exclude;
  for (int k = 0; k < kNumLabels; ++k) {
    const Label cls = all_labels()[static_cast<std::size_t>(k)];
    ClassScores& s = out.per_class[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool t = truth[i].contains(cls);
      const bool p = pred[i].contains(cls);
      if (t && p) ++s.tp;
      else if (!t && p) ++s.fp;
      else if (t && !p) ++s.fn;
    }
    s.precision = s.tp + s.fp > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp)
                                  : 0.0;
    s.recall = s.tp + s.fn > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn)
                               : 0.0;
    s.f1 = s.precision + s.recall > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
  }
  double wsum = 0.0;
  for (int k = 0; k < kNumLabels; ++k) {
    const Label cls = all_labels()[static_cast<std::size_t>(k)];
    if (exclude.contains(cls)) continue;
    const ClassScores& s = out.per_class[static_cast<std::size_t>(k)];
    const double w = static_cast<double>(s.support());
    out.weighted_precision += w * s.precision;
    out.weighted_recall += w * s.recall;
    out.weighted_f1 += w * s.f1;
    wsum += w;
  }
  if (wsum > 0.0) {
    out.weighted_precision /= wsum;
    out.weighted_recall /= wsum;
    out.weighted_f1 /= wsum;
  }
  return out;
}

ConfusionMatrix confusion_matrix(const std::vector<LabelSet>& truth,
                                 const std::vector<LabelSet>& pred) {
  if (truth.size() != pred.size()) {
    throw EvalError("confusion_matrix: truth and prediction lengths differ");
  }
  ConfusionMatrix m = ConfusionMatrix::Zero();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (Label t : truth[i].labels()) {
      for (Label p : pred[i].labels()) {
        m(static_cast<int>(t), static_cast<int>(p)) += 1;
      }
    }
  }
  return m;
}

}  // namespace nozzlelog::eval
