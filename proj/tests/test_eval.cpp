#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "nozzlelog/core/types.hpp"
#include "nozzlelog/errors.hpp"
#include "nozzlelog/eval/harness.hpp"
#include "nozzlelog/eval/metrics.hpp"
#include "nozzlelog/eval/report.hpp"
#include "oracles.hpp"

using namespace nozzlelog;
using namespace nozzlelog::eval;
using nozzlelog::ml::OvrParams;

namespace {

LabelSet from_mask(unsigned mask) {
  LabelSet s;
  for (int k = 0; k < kNumLabels; ++k)
    if ((mask >> k) & 1u) s.add(static_cast<Label>(k));
  return s;
}

std::pair<std::vector<LabelSet>, std::vector<unsigned>> random_sets(std::mt19937_64& gen, int n) {
  std::vector<LabelSet> sets;
  std::vector<unsigned> masks;
  for (int i = 0; i < n; ++i) {
    unsigned mask = static_cast<unsigned>(gen() % 63u) + 1u;  // non-empty
    sets.push_back(from_mask(mask));
    masks.push_back(mask);
  }
  return {sets, masks};
}

/// Feature matrix with two informative columns; labels alternate over three
/// classes so folds always contain every class.
std::pair<features::FeatureMatrix, std::vector<LabelSet>> toy(int rows, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.5);
  features::FeatureMatrix fm;
  fm.values.resize(rows, 6);
  std::vector<LabelSet> labels;
  for (int r = 0; r < rows; ++r) {
    const int cls = r % 3;
    for (int c = 0; c < 6; ++c) fm.values(r, c) = noise(gen) + (c == cls ? 4.0 : 0.0);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "H%03d", r);
    fm.head_ids.push_back(buf);
    labels.push_back(LabelSet(cls == 2 ? Label::Other : static_cast<Label>(cls)));
  }
  for (int c = 0; c < 6; ++c) fm.columns.push_back("col" + std::to_string(c));
  return {fm, labels};
}

}  // namespace

TEST_CASE("the weighted F1 fixture scores two thirds") {
  const std::vector<LabelSet> truth = {LabelSet(Label::Pattern1), LabelSet(Label::Pattern1),
                                       LabelSet(Label::Pattern2)};
  const std::vector<LabelSet> pred = {LabelSet(Label::Pattern1), LabelSet(Label::Pattern2),
                                      LabelSet(Label::Pattern2)};
  const PrfResult r = multilabel_prf(truth, pred);
  CHECK(r.weighted_precision == doctest::Approx(5.0 / 6.0));
  CHECK(r.weighted_recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.weighted_f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[0].tp == 1);
  CHECK(r.per_class[0].fn == 1);
  CHECK(r.per_class[1].fp == 1);
}

TEST_CASE("metrics match the brute-force oracle on random instances") {
  std::mt19937_64 gen(606);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 40);
    auto [truth, tmask] = random_sets(gen, n);
    auto [pred, pmask] = random_sets(gen, n);
    const unsigned exclude_mask = trial % 3 == 0 ? 0x20u : 0u;  // sometimes drop Other

    const PrfResult got = multilabel_prf(truth, pred, from_mask(exclude_mask));
    const oracle::Prf want = oracle::prf(tmask, pmask, exclude_mask);

    for (int k = 0; k < kNumLabels; ++k) {
      const auto i = static_cast<std::size_t>(k);
      CHECK(got.per_class[i].tp == want.tp[i]);
      CHECK(got.per_class[i].fp == want.fp[i]);
      CHECK(got.per_class[i].fn == want.fn[i]);
      CHECK(got.per_class[i].precision == want.precision[i]);
      CHECK(got.per_class[i].recall == want.recall[i]);
      CHECK(got.per_class[i].f1 == want.f1[i]);
    }
    CHECK(got.weighted_precision == want.weighted_precision);
    CHECK(got.weighted_recall == want.weighted_recall);
    CHECK(got.weighted_f1 == want.weighted_f1);

    const ConfusionMatrix cm = confusion_matrix(truth, pred);
    const auto ocm = oracle::confusion(tmask, pmask);
    for (int t = 0; t < kNumLabels; ++t)
      for (int p = 0; p < kNumLabels; ++p)
        CHECK(cm(t, p) == ocm[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
  }

  CHECK_THROWS_AS(multilabel_prf({LabelSet(Label::Other)}, {}), EvalError);
}

TEST_CASE("confusion matrix counts every true/pred pair") {
  LabelSet p12;
  p12.add(Label::Pattern1);
  p12.add(Label::Pattern2);
  const ConfusionMatrix a =
      confusion_matrix({LabelSet(Label::Pattern1)}, {LabelSet(Label::Pattern1)});
  CHECK(a(0, 0) == 1);
  CHECK(a.sum() == 1);

  const ConfusionMatrix b = confusion_matrix({p12}, {LabelSet(Label::Pattern1)});
  CHECK(b(0, 0) == 1);
  CHECK(b(1, 0) == 1);
  CHECK(b.sum() == 2);

  const ConfusionMatrix c = confusion_matrix({LabelSet(Label::Pattern1)}, {p12});
  CHECK(c(0, 0) == 1);
  CHECK(c(0, 1) == 1);
  CHECK(c.sum() == 2);

  const ConfusionMatrix d =
      confusion_matrix({LabelSet(Label::Other)}, {LabelSet(Label::Pattern3)});
  CHECK(d(5, 2) == 1);
  CHECK(d.sum() == 1);
}

TEST_CASE("reports round-trip losslessly through CSV") {
  std::mt19937_64 gen(17);
  auto [truth, tm] = random_sets(gen, 25);
  auto [pred, pm] = random_sets(gen, 25);
  std::vector<std::string> heads;
  for (int i = 0; i < 25; ++i) heads.push_back("H" + std::to_string(100 + i));

  EvalReport r = score_predictions("ovr-et", heads, truth, pred, LabelSet(Label::Other), 99,
                                   "cataloghash", "datahash");
  r.warnings = {"fold H101: class Pattern4 absent from training data", "second warning"};

  const std::string csv = report_csv(r);
  const EvalReport back = report_from_csv(csv);
  CHECK(back.model == r.model);
  CHECK(back.seed == r.seed);
  CHECK(back.catalog_digest == r.catalog_digest);
  CHECK(back.dataset_digest == r.dataset_digest);
  CHECK(back.excluded == r.excluded);
  CHECK(back.head_ids == r.head_ids);
  CHECK(back.misclassified == r.misclassified);
  CHECK(back.warnings == r.warnings);
  for (std::size_t i = 0; i < r.truth.size(); ++i) {
    CHECK(back.truth[i] == r.truth[i]);
    CHECK(back.predictions[i] == r.predictions[i]);
  }
  for (int k = 0; k < kNumLabels; ++k) {
    const auto i = static_cast<std::size_t>(k);
    CHECK(back.scores.per_class[i].tp == r.scores.per_class[i].tp);
    CHECK(back.scores.per_class[i].precision == r.scores.per_class[i].precision);
    CHECK(back.scores.per_class[i].f1 == r.scores.per_class[i].f1);
  }
  CHECK(back.scores.weighted_f1 == r.scores.weighted_f1);
  CHECK(back.confusion == r.confusion);
  CHECK(report_csv(back) == csv);

  CHECK_THROWS_AS(report_from_csv("not,a,report\n"), Error);
}

TEST_CASE("report markdown and svg are pure functions of the report") {
  auto [fm, labels] = toy(18, 5);
  OvrParams params;
  params.base = ml::BaseModel::Dt;
  EvalOptions opts;
  opts.seed = 4;
  const EvalReport r = loocv(fm, labels, params, opts);

  const std::string md1 = report_markdown(r);
  const std::string md2 = report_markdown(r);
  CHECK(md1 == md2);
  CHECK(md1.find("| Class |") != std::string::npos);
  CHECK(md1.find("ovr-dt") != std::string::npos);

  const std::string svg1 = confusion_svg(r.confusion);
  CHECK(svg1 == confusion_svg(r.confusion));
  CHECK(svg1.find("<svg") != std::string::npos);
  CHECK(svg1.find("rgb(255,") != std::string::npos);

  ConfusionMatrix hot = ConfusionMatrix::Zero();
  hot(0, 0) = 100;  // saturated cell renders white text on dark red
  const std::string svg2 = confusion_svg(hot);
  CHECK(svg2.find("rgb(255,50,50)") != std::string::npos);
  CHECK(svg2.find("fill=\"#fff\"") != std::string::npos);
}

TEST_CASE("loocv canonicalizes row order and rejects duplicate heads") {
  auto [fm, labels] = toy(15, 8);
  OvrParams params;
  params.base = ml::BaseModel::Knn;
  params.knn.k = 3;
  EvalOptions opts;
  opts.seed = 11;

  const EvalReport sorted_run = loocv(fm, labels, params, opts);

  // Reverse the row order: the report must not change.
  features::FeatureMatrix rev;
  rev.columns = fm.columns;
  std::vector<LabelSet> rev_labels;
  for (Eigen::Index r = fm.rows() - 1; r >= 0; --r) {
    rev.head_ids.push_back(fm.head_ids[static_cast<std::size_t>(r)]);
    rev_labels.push_back(labels[static_cast<std::size_t>(r)]);
  }
  rev.values = fm.values.colwise().reverse();
  const EvalReport rev_run = loocv(rev, rev_labels, params, opts);

  CHECK(rev_run.head_ids == sorted_run.head_ids);
  CHECK(rev_run.misclassified == sorted_run.misclassified);
  CHECK(rev_run.scores.weighted_f1 == sorted_run.scores.weighted_f1);
  for (std::size_t i = 0; i < sorted_run.predictions.size(); ++i)
    CHECK(rev_run.predictions[i] == sorted_run.predictions[i]);

  features::FeatureMatrix dup = fm;
  dup.head_ids[1] = dup.head_ids[0];
  CHECK_THROWS_AS(loocv(dup, labels, params, opts), EvalError);
}

TEST_CASE("loocv records missing-class warnings instead of failing") {
  auto [fm, labels] = toy(9, 21);
  // Give Pattern2 a single head: its fold must warn and degrade.
  for (auto& l : labels)
    if (l == LabelSet(Label::Pattern2)) l = LabelSet(Label::Pattern1);
  labels[1] = LabelSet(Label::Pattern2);

  OvrParams params;
  params.base = ml::BaseModel::Dt;
  EvalOptions opts;
  opts.seed = 3;
  const EvalReport r = loocv(fm, labels, params, opts);
  REQUIRE_FALSE(r.warnings.empty());
  bool mentions = false;
  for (const auto& w : r.warnings)
    mentions = mentions || w.find("Pattern2") != std::string::npos;
  CHECK(mentions);
}

TEST_CASE("kfold tuning fills the table and prefers earlier ties") {
  auto [fm, labels] = toy(30, 31);
  OvrParams base;
  base.base = ml::BaseModel::Knn;
  std::vector<GridEntry> grid;
  for (int k : {1, 3}) {
    GridEntry e{"k=" + std::to_string(k), base};
    e.params.knn.k = k;
    grid.push_back(e);
  }
  EvalOptions opts;
  opts.seed = 77;
  const TuneResult t = kfold_tune(fm, labels, grid, 3, opts);
  CHECK(t.k == 3);
  REQUIRE(t.table.size() == 2);
  CHECK(t.best_index < 2);
  for (const auto& cell : t.table) {
    CHECK(cell.fold_f1.size() == 3);
    double acc = 0.0;
    for (double f : cell.fold_f1) acc += f;
    CHECK(cell.mean_f1 == doctest::Approx(acc / 3.0));
  }
  if (t.table[0].mean_f1 == t.table[1].mean_f1) CHECK(t.best_index == 0);
  CHECK(t.best_params.knn.k == grid[t.best_index].params.knn.k);

  const std::string md = tune_markdown(t);
  CHECK(md.find("k=1") != std::string::npos);
  CHECK(md.find("(best)") != std::string::npos);

  CHECK_THROWS_AS(kfold_tune(fm, labels, grid, 1, opts), EvalError);
  CHECK_THROWS_AS(kfold_tune(fm, labels, {}, 3, opts), EvalError);
}

TEST_CASE("compare_reports refuses mismatched datasets and flags winners") {
  std::mt19937_64 gen(44);
  auto [truth, tm] = random_sets(gen, 10);
  auto [pred, pm] = random_sets(gen, 10);
  std::vector<std::string> heads;
  for (int i = 0; i < 10; ++i) heads.push_back("H" + std::to_string(i));

  const EvalReport a =
      score_predictions("rules", heads, truth, pred, LabelSet(), 1, "cat", "digestA");
  const EvalReport b =
      score_predictions("ovr-rf", heads, truth, truth, LabelSet(), 1, "cat", "digestA");
  const std::string md = compare_reports(a, b);
  CHECK(md.find("rules") != std::string::npos);
  CHECK(md.find("ovr-rf") != std::string::npos);
  CHECK(md.find("misclassified heads") != std::string::npos);

  const EvalReport c =
      score_predictions("ovr-rf", heads, truth, truth, LabelSet(), 1, "cat", "digestB");
  CHECK_THROWS_AS(compare_reports(a, c), EvalError);
}

TEST_CASE("exclusion removes a class from the weighted average only") {
  const std::vector<LabelSet> truth = {LabelSet(Label::Pattern1), LabelSet(Label::Other)};
  const std::vector<LabelSet> pred = {LabelSet(Label::Pattern1), LabelSet(Label::Pattern2)};
  const PrfResult all = multilabel_prf(truth, pred);
  const PrfResult excl = multilabel_prf(truth, pred, LabelSet(Label::Other));
  CHECK(all.weighted_f1 == doctest::Approx(0.5));
  CHECK(excl.weighted_f1 == doctest::Approx(1.0));
  CHECK(excl.per_class[5].fn == 1);  // per-class rows still reported
}
