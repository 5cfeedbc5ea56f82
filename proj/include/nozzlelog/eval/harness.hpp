#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nozzlelog/eval/report.hpp"
#include "nozzlelog/features/extract.hpp"
#include "nozzlelog/ml/ovr.hpp"
#include "nozzlelog/rules/rules.hpp"

namespace nozzlelog::eval {

struct EvalOptions {
  std::uint64_t seed = 42;
  unsigned workers = 1;
  LabelSet exclude;                 ///< classes excluded from weighted averages
  double selector_strength = 0.01;  ///< L1 selector strength per fold
};

/// Leave-one-out cross-validation: per fold, the impute/scale/select
/// pipeline and the OVR model are fitted on the n-1 training heads only
/// (fold seed = mix_seed(seed, fold)), then the held-out head is predicted.
/// Rows are canonicalized to sorted head_id order first, so file order never
/// matters. Folds run in parallel; a class missing from a fold's training
/// data degrades to a constant-0 scorer with a recorded warning.
EvalReport loocv(const features::FeatureMatrix& fm, const std::vector<LabelSet>& labels,
                 const ml::OvrParams& params, const EvalOptions& opts);

/// Scores a static rule set on every head (no training, no folds).
EvalReport rules_baseline(const features::FeatureMatrix& fm, const std::vector<LabelSet>& labels,
                          const rules::RuleSet& rs, const LabelSet& exclude = LabelSet());

struct GridEntry {
  std::string name;  ///< human-readable parameter summary
  ml::OvrParams params;
};

struct TuneCell {
  std::string name;
  std::vector<double> fold_f1;  ///< weighted F1 per fold, Other excluded
  double mean_f1 = 0.0;
};

struct TuneResult {
  int k = 0;
  std::size_t best_index = 0;
  ml::OvrParams best_params;
  std::vector<TuneCell> table;
  std::vector<std::string> warnings;
};

/// Stratified k-fold tuning. Folds stratify on each head's primary label
/// (lowest class index in its set): members of a class are shuffled
/// deterministically, then dealt round-robin over folds. The objective is
/// the mean weighted F1 with Other excluded; grid ties break toward the
/// earliest entry. Pipelines are fitted once per fold and shared across the
/// grid.
TuneResult kfold_tune(const features::FeatureMatrix& fm, const std::vector<LabelSet>& labels,
                      const std::vector<GridEntry>& grid, int k, const EvalOptions& opts);

std::string tune_markdown(const TuneResult& t);

/// Per-class top-n features by forest Gini importance, as a markdown table.
/// Requires a forest base model (rf/et); constant scorers are noted and
/// skipped. Throws UnsupportedModelError otherwise.
std::string importance_report(const ml::OvrClassifier& model,
                              const std::vector<std::string>& columns, int top_n = 10);

/// Side-by-side per-class table, weighted rows, misclassified counts and
/// per-class F1 winner flags. Both reports must carry the same dataset
/// digest (EvalError otherwise).
std::string compare_reports(const EvalReport& a, const EvalReport& b);

}  // namespace nozzlelog::eval
