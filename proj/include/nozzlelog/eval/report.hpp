#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nozzlelog/eval/metrics.hpp"

namespace nozzlelog::eval {

/// One evaluation run. Carries the per-head truth/prediction pairs (in
/// canonical sorted-head order) so the report is self-contained: metrics can
/// be re-weighted and models compared without re-running folds.
struct EvalReport {
  std::string model;           // "ovr-rf", "rules", ...
  std::uint64_t seed = 0;
  std::string catalog_digest;  // feature-matrix header digest
  std::string dataset_digest;  // feature-matrix content digest
  LabelSet excluded;           // classes excluded from weighted averages

  std::vector<std::string> head_ids;
  std::vector<LabelSet> truth;
  std::vector<LabelSet> predictions;

  PrfResult scores;
  ConfusionMatrix confusion = ConfusionMatrix::Zero();
  int misclassified = 0;  // heads with predicted set != true set
  std::vector<std::string> warnings;

  int heads() const { return static_cast<int>(head_ids.size()); }
  std::vector<std::string> misclassified_heads() const;
};

/// Scores predictions against truth and assembles the full report.
EvalReport score_predictions(std::string model, const std::vector<std::string>& head_ids,
                             const std::vector<LabelSet>& truth,
                             const std::vector<LabelSet>& predictions, const LabelSet& exclude,
                             std::uint64_t seed, std::string catalog_digest,
                             std::string dataset_digest);

/// Human-readable artifact: metadata, per-class table, weighted row,
/// confusion matrix, misclassified heads, warnings.
std::string report_markdown(const EvalReport& r);

/// Machine-readable `key,value` table; report_from_csv(report_csv(r))
/// reproduces r exactly (doubles in shortest round-trip form). Values must
/// not contain commas.
std::string report_csv(const EvalReport& r);
EvalReport report_from_csv(const std::string& text);

void write_report_files(const EvalReport& r, const std::string& dir, const std::string& stem);
EvalReport read_report_file(const std::string& path);  // the .csv artifact

/// Confusion heatmap, white-to-red fill scaled by the largest cell.
/// Byte-deterministic: integer-only geometry and colors.
std::string confusion_svg(const ConfusionMatrix& m);

}  // namespace nozzlelog::eval
