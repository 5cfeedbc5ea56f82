#include "nozzlelog/eval/harness.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <utility>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/pipeline/pipeline.hpp"
#include "nozzlelog/util/parallel.hpp"
#include "nozzlelog/util/rng.hpp"
#include "nozzlelog/util/text.hpp"

namespace nozzlelog::eval {

namespace {

// Sub-stream index for the fold-assignment shuffle, distinct from the
// per-fold indices 0..n-1.
constexpr std::uint64_t kAssignStream = 0x6b666f6c64ULL;  // "kfold"

struct CanonicalData {
  features::FeatureMatrix fm;
  std::vector<LabelSet> labels;
};

// Sorted head_id order defines the row index everywhere downstream.
CanonicalData canonicalize(const features::FeatureMatrix& fm,
                           const std::vector<LabelSet>& labels) {
  if (static_cast<std::size_t>(fm.rows()) != labels.size()) {
    throw EvalError("evaluation: feature rows and labels differ in length");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(fm.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return fm.head_ids[static_cast<std::size_t>(a)] < fm.head_ids[static_cast<std::size_t>(b)];
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (fm.head_ids[static_cast<std::size_t>(order[i - 1])] ==
        fm.head_ids[static_cast<std::size_t>(order[i])]) {
      throw EvalError("evaluation: duplicate head id '" +
                      fm.head_ids[static_cast<std::size_t>(order[i])] + "'");
    }
  }
  CanonicalData out;
  out.fm = fm.select_rows(order);
  out.labels.reserve(order.size());
  for (Eigen::Index idx : order) out.labels.push_back(labels[static_cast<std::size_t>(idx)]);
  return out;
}

std::vector<LabelSet> subset(const std::vector<LabelSet>& labels,
                             const std::vector<Eigen::Index>& idx) {
  std::vector<LabelSet> out;
  out.reserve(idx.size());
  for (Eigen::Index i : idx) out.push_back(labels[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

EvalReport loocv(const features::FeatureMatrix& fm, const std::vector<LabelSet>& labels,
                 const ml::OvrParams& params, const EvalOptions& opts) {
  const CanonicalData data = canonicalize(fm, labels);
  const std::size_t n = data.labels.size();
  if (n < 2) throw EvalError("loocv: needs at least 2 heads");

  std::vector<LabelSet> preds(n);
  std::vector<std::vector<std::string>> fold_warnings(n);
  parallel_for(n, opts.workers, [&](std::size_t i) {
    std::vector<Eigen::Index> train_idx;
    train_idx.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) train_idx.push_back(static_cast<Eigen::Index>(j));
    }
    const features::FeatureMatrix train = data.fm.select_rows(train_idx);
    const std::vector<LabelSet> train_labels = subset(data.labels, train_idx);
    const std::uint64_t fold_seed = mix_seed(opts.seed, i);
    const pipeline::FittedPipeline pipe =
        pipeline::fit_pipeline(train, train_labels, opts.selector_strength, fold_seed);
    const Eigen::MatrixXd xt = pipe.transform(train).values;
    std::vector<std::string> notes;
    const ml::OvrClassifier model =
        ml::OvrClassifier::fit(xt, train_labels, params, fold_seed, /*strict=*/false, 1, &notes);
    const features::FeatureMatrix test =
        data.fm.select_rows({static_cast<Eigen::Index>(i)});
    preds[i] = model.predict(pipe.transform(test).values)[0];
    for (const auto& note : notes) {
      fold_warnings[i].push_back("fold " + data.fm.head_ids[i] + ": " + note);
    }
  });

  EvalReport r = score_predictions(ml::ovr_model_name(params.base), data.fm.head_ids, data.labels,
                                   preds, opts.exclude, opts.seed, data.fm.header_digest(),
                                   data.fm.content_digest());
  for (auto& w : fold_warnings) {
    for (auto& msg : w) r.warnings.push_back(std::move(msg));
  }
  return r;
}

EvalReport rules_baseline(const features::FeatureMatrix& fm, const std::vector<LabelSet>& labels,
                          const rules::RuleSet& rs, const LabelSet& exclude) {
  const CanonicalData data = canonicalize(fm, labels);
  const std::vector<LabelSet> preds = rules::evaluate_rules(rs, data.fm);
  return score_predictions("rules", data.fm.head_ids, data.labels, preds, exclude, 0,
                           data.fm.header_digest(), data.fm.content_digest());
}

TuneResult kfold_tune(const features::FeatureMatrix& fm, const std::vector<LabelSet>& labels,
                      const std::vector<GridEntry>& grid, int k, const EvalOptions& opts) {
  if (grid.empty()) throw EvalError("kfold_tune: empty parameter grid");
  const CanonicalData data = canonicalize(fm, labels);
  const std::size_t n = data.labels.size();
  if (k < 2) throw EvalError("kfold_tune: k must be at least 2");
  if (static_cast<std::size_t>(k) > n) throw EvalError("kfold_tune: k exceeds head count");

  TuneResult result;
  result.k = k;

  // Stratified assignment: group by primary label, shuffle each group
  // deterministically, deal round-robin.
  std::array<std::vector<std::size_t>, kNumLabels> groups;
  for (std::size_t i = 0; i < n; ++i) {
    groups[static_cast<std::size_t>(data.labels[i].labels().front())].push_back(i);
  }
  std::vector<int> fold_of(n, 0);
  Rng assign(mix_seed(opts.seed, kAssignStream));
  for (int c = 0; c < kNumLabels; ++c) {
    auto& g = groups[static_cast<std::size_t>(c)];
    if (!g.empty() && g.size() < static_cast<std::size_t>(k)) {
      result.warnings.push_back("class " + label_name(all_labels()[static_cast<std::size_t>(c)]) +
                                " has fewer heads than folds; round-robin within the class");
    }
    for (std::size_t i = g.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(assign.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(g[i - 1], g[j]);
    }
    for (std::size_t j = 0; j < g.size(); ++j) {
      fold_of[g[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
    }
  }

  // Per-fold pipelines are independent of the grid entry; fit them once.
  struct Fold {
    Eigen::MatrixXd x_train;
    Eigen::MatrixXd x_test;
    std::vector<LabelSet> y_train;
    std::vector<LabelSet> y_test;
    bool empty = false;
  };
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  std::vector<std::vector<std::string>> fold_notes(static_cast<std::size_t>(k));
  parallel_for(static_cast<std::size_t>(k), opts.workers, [&](std::size_t f) {
    std::vector<Eigen::Index> train_idx;
    std::vector<Eigen::Index> test_idx;
    for (std::size_t i = 0; i < n; ++i) {
      (fold_of[i] == static_cast<int>(f) ? test_idx : train_idx)
          .push_back(static_cast<Eigen::Index>(i));
    }
    Fold& fold = folds[f];
    if (test_idx.empty()) {
      fold.empty = true;
      fold_notes[f].push_back("fold " + std::to_string(f) + " is empty; skipped");
      return;
    }
    const features::FeatureMatrix train = data.fm.select_rows(train_idx);
    fold.y_train = subset(data.labels, train_idx);
    fold.y_test = subset(data.labels, test_idx);
    const pipeline::FittedPipeline pipe =
        pipeline::fit_pipeline(train, fold.y_train, opts.selector_strength, mix_seed(opts.seed, f));
    fold.x_train = pipe.transform(train).values;
    fold.x_test = pipe.transform(data.fm.select_rows(test_idx)).values;
  });
  for (auto& notes : fold_notes) {
    for (auto& msg : notes) result.warnings.push_back(std::move(msg));
  }

  LabelSet objective_exclude = opts.exclude;
  objective_exclude.add(Label::Other);

  result.table.resize(grid.size());
  std::vector<std::vector<std::string>> entry_warnings(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    TuneCell& cell = result.table[g];
    cell.name = grid[g].name;
    cell.fold_f1.assign(static_cast<std::size_t>(k), 0.0);
    std::vector<std::vector<std::string>> notes(static_cast<std::size_t>(k));
    std::vector<char> scored(static_cast<std::size_t>(k), 0);
    parallel_for(static_cast<std::size_t>(k), opts.workers, [&](std::size_t f) {
      const Fold& fold = folds[f];
      if (fold.empty) return;
      std::vector<std::string> fit_notes;
      const ml::OvrClassifier model = ml::OvrClassifier::fit(
          fold.x_train, fold.y_train, grid[g].params, mix_seed(opts.seed, f), false, 1, &fit_notes);
      const std::vector<LabelSet> preds = model.predict(fold.x_test);
      cell.fold_f1[f] = multilabel_prf(fold.y_test, preds, objective_exclude).weighted_f1;
      scored[f] = 1;
      for (const auto& note : fit_notes) {
        notes[f].push_back("entry '" + grid[g].name + "' fold " + std::to_string(f) + ": " + note);
      }
    });
    double total = 0.0;
    int counted = 0;
    for (std::size_t f = 0; f < static_cast<std::size_t>(k); ++f) {
      if (scored[f]) {
        total += cell.fold_f1[f];
        ++counted;
      }
      for (auto& msg : notes[f]) entry_warnings[g].push_back(std::move(msg));
    }
    cell.mean_f1 = counted > 0 ? total / counted : 0.0;
  }
  for (auto& w : entry_warnings) {
    for (auto& msg : w) result.warnings.push_back(std::move(msg));
  }

  result.best_index = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (result.table[g].mean_f1 > result.table[result.best_index].mean_f1) result.best_index = g;
  }
  result.best_params = grid[result.best_index].params;
  return result;
}

std::string tune_markdown(const TuneResult& t) {
  std::string out;
  out += "# Cross-validation tuning (k=" + std::to_string(t.k) + ")\n\n";
  out += "Objective: mean weighted F1 across folds, Other excluded.\n\n";
  out += "| Parameters | Mean F1 |";
  for (int f = 0; f < t.k; ++f) out += " Fold " + std::to_string(f) + " |";
  out += "\n|---|---:|";
  for (int f = 0; f < t.k; ++f) out += "---:|";
  out += "\n";
  for (std::size_t g = 0; g < t.table.size(); ++g) {
    const TuneCell& cell = t.table[g];
    out += "| " + cell.name + (g == t.best_index ? " **(best)**" : "") + " | " +
           format_double(cell.mean_f1) + " |";
    for (double f1 : cell.fold_f1) out += " " + format_double(f1) + " |";
    out += "\n";
  }
  if (!t.warnings.empty()) {
    out += "\n## Warnings\n\n";
    for (const auto& w : t.warnings) out += "- " + w + "\n";
  }
  return out;
}

std::string importance_report(const ml::OvrClassifier& model,
                              const std::vector<std::string>& columns, int top_n) {
  if (top_n <= 0) throw ConfigError("importance_report: top_n must be positive");
  std::string out;
  out += "# Feature importance (forest Gini importance per class)\n\n";
  for (int k = 0; k < kNumLabels; ++k) {
    const Label cls = all_labels()[static_cast<std::size_t>(k)];
    out += "## " + label_name(cls) + "\n\n";
    const ml::BinaryScorer& scorer = model.scorers()[static_cast<std::size_t>(k)];
    if (std::holds_alternative<ml::ConstantScorer>(scorer)) {
      out += "(no fitted scorer: class absent from training data)\n\n";
      continue;
    }
    const auto* forest = std::get_if<ml::Forest>(&scorer);
    if (forest == nullptr) {
      throw UnsupportedModelError("importance report requires a forest base model (rf or et)");
    }
    if (forest->n_features() != static_cast<Eigen::Index>(columns.size())) {
      throw SchemaError("importance_report: column list does not match the fitted model");
    }
    const Eigen::VectorXd imp = forest->gini_importance();
    std::vector<int> order(columns.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return imp[a] > imp[b]; });
    const std::size_t rows = std::min<std::size_t>(order.size(), static_cast<std::size_t>(top_n));
    out += "| Rank | Feature | Weight |\n|---:|---|---:|\n";
    for (std::size_t i = 0; i < rows; ++i) {
      out += "| " + std::to_string(i + 1) + " | " + columns[static_cast<std::size_t>(order[i])] +
             " | " + format_double(imp[order[i]]) + " |\n";
    }
    out += "\n";
  }
  return out;
}

std::string compare_reports(const EvalReport& a, const EvalReport& b) {
  if (a.dataset_digest != b.dataset_digest) {
    throw EvalError("compare_reports: reports come from different datasets");
  }
  std::string out;
  out += "# Model comparison: " + a.model + " vs " + b.model + "\n\n";
  out += "- dataset digest: `" + a.dataset_digest + "`\n";
  out += "- heads: " + std::to_string(a.heads()) + "\n";
  out += "- misclassified heads: " + a.model + " " + std::to_string(a.misclassified) + ", " +
         b.model + " " + std::to_string(b.misclassified) + "\n\n";
  out += "| Class | Model | Precision | Recall | F1 | Support | Winner |\n";
  out += "|---|---|---:|---:|---:|---:|---|\n";
  for (int k = 0; k < kNumLabels; ++k) {
    const Label cls = all_labels()[static_cast<std::size_t>(k)];
    const ClassScores& sa = a.scores.per_class[static_cast<std::size_t>(k)];
    const ClassScores& sb = b.scores.per_class[static_cast<std::size_t>(k)];
    const std::string winner = sa.f1 > sb.f1 ? a.model : (sb.f1 > sa.f1 ? b.model : "=");
    out += "| " + label_name(cls) + " | " + a.model + " | " + format_double(sa.precision) +
           " | " + format_double(sa.recall) + " | " + format_double(sa.f1) + " | " +
           std::to_string(sa.support()) + " | " + winner + " |\n";
    out += "| " + label_name(cls) + " | " + b.model + " | " + format_double(sb.precision) +
           " | " + format_double(sb.recall) + " | " + format_double(sb.f1) + " | " +
           std::to_string(sb.support()) + " | |\n";
  }
  const std::string wwinner = a.scores.weighted_f1 > b.scores.weighted_f1
                                  ? a.model
                                  : (b.scores.weighted_f1 > a.scores.weighted_f1 ? b.model : "=");
  out += "| weighted | " + a.model + " | " + format_double(a.scores.weighted_precision) + " | " +
         format_double(a.scores.weighted_recall) + " | " + format_double(a.scores.weighted_f1) +
         " | | " + wwinner + " |\n";
  out += "| weighted | " + b.model + " | " + format_double(b.scores.weighted_precision) + " | " +
         format_double(b.scores.weighted_recall) + " | " + format_double(b.scores.weighted_f1) +
         " | | |\n";
  return out;
}

}  // namespace nozzlelog::eval
