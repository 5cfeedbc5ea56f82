// Acceptance gate. Runs the eight release criteria end to end on the
// benchmark dataset and prints one [PASS]/[FAIL] line per criterion.
// Exit code = number of failed criteria.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nozzlelog/core/types.hpp"
#include "nozzlelog/eval/harness.hpp"
#include "nozzlelog/eval/metrics.hpp"
#include "nozzlelog/eval/report.hpp"
#include "nozzlelog/features/catalog.hpp"
#include "nozzlelog/features/extract.hpp"
#include "nozzlelog/features/kernels.hpp"
#include "nozzlelog/ml/logreg.hpp"
#include "nozzlelog/ml/model_io.hpp"
#include "nozzlelog/ml/ovr.hpp"
#include "nozzlelog/pipeline/pipeline.hpp"
#include "nozzlelog/rules/rules.hpp"
#include "nozzlelog/synth/generator.hpp"
#include "nozzlelog/synth/params.hpp"
#include "nozzlelog/util/text.hpp"
#include "oracles.hpp"

using namespace nozzlelog;
namespace nf = nozzlelog::features;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail = "") {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
  if (!detail.empty()) std::cout << "  -- " << detail;
  std::cout << "\n" << std::flush;
  failures += ok ? 0 : 1;
}

double secs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) { return format_double(std::round(v * 1e4) / 1e4); }

bool close(double a, double b, double tol = 1e-9) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::fabs(a - b) <= tol;
}

Eigen::ArrayXd to_arr(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// --- criterion 1: feature kernels vs brute-force oracles --------------------

std::vector<std::vector<double>> series_corpus() {
  std::vector<std::vector<double>> corpus;
  std::mt19937_64 gen(424242);
  std::uniform_int_distribution<int> len(1, 220);
  std::uniform_int_distribution<int> count(0, 60);
  std::uniform_real_distribution<double> real(-40.0, 40.0);
  for (int i = 0; i < 130; ++i) {
    std::vector<double> s(static_cast<std::size_t>(len(gen)));
    for (double& v : s) v = count(gen);
    corpus.push_back(std::move(s));
  }
  for (int i = 0; i < 90; ++i) {
    std::vector<double> s(static_cast<std::size_t>(len(gen)));
    for (double& v : s) v = real(gen);
    corpus.push_back(std::move(s));
  }
  for (int n : {1, 2, 3, 5}) {
    corpus.push_back(std::vector<double>(static_cast<std::size_t>(n), 7.0));
    corpus.push_back(std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }
  return corpus;
}

int kernel_mismatches(const std::vector<double>& v) {
  const Eigen::ArrayXd x = to_arr(v);
  int bad = 0;
  const auto chk = [&](double a, double b) { bad += close(a, b) ? 0 : 1; };

  const auto lt = nf::linear_trend(x);
  const auto olt = oracle::linear_trend(v);
  chk(lt.slope, olt.slope);
  chk(lt.intercept, olt.intercept);
  chk(lt.rvalue, olt.rvalue);
  chk(lt.stderr_, olt.stderr_);
  for (int lag : {1, 2, 3, 5}) chk(nf::autocorrelation(x, lag), oracle::autocorrelation(v, lag));
  chk(nf::cid_ce(x, false), oracle::cid_ce(v, false));
  chk(nf::cid_ce(x, true), oracle::cid_ce(v, true));
  for (int order : {1, 2}) {
    const auto d = nf::derivative_stats(x, order);
    const auto od = oracle::derivative_stats(v, order);
    chk(d.mean, od.mean);
    chk(d.std, od.std);
    chk(d.min, od.min);
    chk(d.max, od.max);
  }
  const auto st = nf::step_features(x);
  const auto ost = oracle::step_features(v);
  chk(st.final_value, ost.final_value);
  chk(st.max_step, ost.max_step);
  chk(st.mean_abs_change, ost.mean_abs_change);
  chk(st.mean_change, ost.mean_change);
  chk(nf::mean(x), oracle::mean(v));
  chk(nf::median(x), oracle::median(v));
  chk(nf::population_variance(x), oracle::pvariance(v));
  chk(nf::population_std(x), oracle::pstd(v));
  chk(nf::minimum(x), oracle::minimum(v));
  chk(nf::maximum(x), oracle::maximum(v));
  chk(nf::skewness(x), oracle::skewness(v));
  chk(nf::kurtosis(x), oracle::kurtosis(v));
  for (double q : {0.05, 0.25, 0.75, 0.95}) chk(nf::quantile(x, q), oracle::quantile(v, q));
  chk(nf::abs_energy(x), oracle::abs_energy(v));
  chk(nf::count_above_mean(x), oracle::count_above_mean(v));
  chk(nf::count_below_mean(x), oracle::count_below_mean(v));
  chk(nf::longest_strike_above_mean(x), oracle::longest_strike(v, true));
  chk(nf::longest_strike_below_mean(x), oracle::longest_strike(v, false));
  for (int n : {1, 3, 5}) chk(nf::number_peaks(x, n), oracle::number_peaks(v, n));
  for (int bins : {5, 10}) chk(nf::binned_entropy(x, bins), oracle::binned_entropy(v, bins));
  for (int r : {1, 2}) chk(nf::ratio_beyond_r_sigma(x, r), oracle::ratio_beyond_r_sigma(v, r));
  chk(nf::sum_values(x), oracle::sum(v));
  chk(nf::count_nonzero(x), oracle::count_nonzero(v));
  chk(nf::first_nonzero_fraction(x), oracle::first_nonzero_fraction(v));
  chk(nf::value_range(x), oracle::value_range(v));
  return bad;
}

bool worked_examples_hold() {
  bool ok = true;
  ok = ok && close(nf::autocorrelation(to_arr({1, 2, 3, 4}), 1), 1.0 / 3.0);
  ok = ok && close(nf::quantile(to_arr({1, 2, 3, 4}), 0.25), 1.75);
  ok = ok && close(nf::binned_entropy(to_arr({0, 0, 0, 1}), 2), 0.5623351446188083);
  ok = ok && close(nf::ratio_beyond_r_sigma(to_arr({0, 0, 0, 10}), 1.0), 0.25);
  ok = ok && close(nf::longest_strike_above_mean(to_arr({1, 1, 5, 5, 5, 1})), 3.0);
  const auto d = nf::derivative_stats(to_arr({0, 1, 3, 6}), 1);
  ok = ok && close(d.mean, 2.0) && close(d.std, std::sqrt(2.0 / 3.0)) && close(d.min, 1.0) &&
       close(d.max, 3.0);
  ok = ok && close(nf::cid_ce(to_arr({0, 1, 2}), false), std::sqrt(2.0));
  ok = ok && close(nf::autocorrelation(to_arr({1, -1, 1, -1}), 1), -1.0);
  return ok;
}

// --- criterion 2: metric oracles --------------------------------------------

LabelSet from_mask(unsigned mask) {
  LabelSet s;
  for (int k = 0; k < kNumLabels; ++k)
    if ((mask >> k) & 1u) s.add(static_cast<Label>(k));
  return s;
}

bool metrics_match_oracle() {
  std::mt19937_64 gen(909);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 30);
    std::vector<LabelSet> truth, pred;
    std::vector<unsigned> tm, pm;
    for (int i = 0; i < n; ++i) {
      tm.push_back(static_cast<unsigned>(gen() % 63u) + 1u);
      pm.push_back(static_cast<unsigned>(gen() % 63u) + 1u);
      truth.push_back(from_mask(tm.back()));
      pred.push_back(from_mask(pm.back()));
    }
    const unsigned ex = trial % 4 == 0 ? 0x20u : 0u;
    const eval::PrfResult got = eval::multilabel_prf(truth, pred, from_mask(ex));
    const oracle::Prf want = oracle::prf(tm, pm, ex);
    for (int k = 0; k < kNumLabels; ++k) {
      const auto i = static_cast<std::size_t>(k);
      if (got.per_class[i].tp != want.tp[i] || got.per_class[i].fp != want.fp[i] ||
          got.per_class[i].fn != want.fn[i] || got.per_class[i].precision != want.precision[i] ||
          got.per_class[i].recall != want.recall[i] || got.per_class[i].f1 != want.f1[i])
        return false;
    }
    if (got.weighted_precision != want.weighted_precision ||
        got.weighted_recall != want.weighted_recall || got.weighted_f1 != want.weighted_f1)
      return false;
    const eval::ConfusionMatrix cm = eval::confusion_matrix(truth, pred);
    const auto ocm = oracle::confusion(tm, pm);
    for (int t = 0; t < kNumLabels; ++t)
      for (int p = 0; p < kNumLabels; ++p)
        if (cm(t, p) != ocm[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]) return false;
  }
  const eval::PrfResult fx = eval::multilabel_prf(
      {LabelSet(Label::Pattern1), LabelSet(Label::Pattern1), LabelSet(Label::Pattern2)},
      {LabelSet(Label::Pattern1), LabelSet(Label::Pattern2), LabelSet(Label::Pattern2)});
  return close(fx.weighted_precision, 5.0 / 6.0) && close(fx.weighted_recall, 2.0 / 3.0) &&
         close(fx.weighted_f1, 2.0 / 3.0);
}

double f1_excluding_other(const eval::EvalReport& r) {
  return eval::multilabel_prf(r.truth, r.predictions, LabelSet(Label::Other)).weighted_f1;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;

  // Criterion 1: feature kernels against independent oracles.
  {
    const auto t0 = clock::now();
    const auto corpus = series_corpus();
    int bad = 0;
    for (const auto& v : corpus) bad += kernel_mismatches(v);
    const bool ok =
        corpus.size() >= 200 && bad == 0 && worked_examples_hold() && secs(t0) <= 10.0;
    report(ok, "C1 feature kernels match brute-force oracles",
           std::to_string(corpus.size()) + " series, " + std::to_string(bad) +
               " mismatches, tol 1e-9, " + fmt(secs(t0)) + "s");
  }

  // Criterion 2: metric implementations against independent oracles.
  {
    const bool ok = metrics_match_oracle();
    report(ok, "C2 multi-label metrics match brute-force oracles",
           "1000 random instances exact + weighted-F1 fixture 2/3");
  }

  // Shared benchmark state.
  const synth::DatasetSpec spec = synth::DatasetSpec::default_spec(42);
  const synth::Dataset ds = synth::generate_dataset(spec, 2);
  const auto catalog = nf::FeatureCatalog::default_catalog();
  const nf::FeatureMatrix fm = nf::extract_matrix(ds.logs, catalog, 2);
  std::vector<LabelSet> labels;
  for (const auto& id : fm.head_ids) labels.push_back(ds.manifest.at(id));

  int duals = 0;
  std::array<int, kNumLabels> support{};
  for (const auto& l : labels) {
    duals += l.size() > 1 ? 1 : 0;
    for (Label lab : l.labels()) support[static_cast<std::size_t>(lab)] += 1;
  }

  eval::EvalOptions opts;
  opts.seed = 42;
  opts.workers = 2;

  // Criterion 3: benchmark composition + OVR-RF LOOCV quality inside budget.
  ml::OvrParams rf;
  rf.base = ml::BaseModel::Rf;
  eval::EvalReport rf_report;
  {
    const auto t0 = clock::now();
    rf_report = eval::loocv(fm, labels, rf, opts);
    const double wall = secs(t0);
    const double incl = rf_report.scores.weighted_f1;
    const double excl = f1_excluding_other(rf_report);
    const bool comp = fm.rows() == 411 && duals == 6 && support[0] == 127 && support[1] == 75 &&
                      support[2] == 30 && support[3] == 26 && support[4] == 23 &&
                      support[5] == 136;
    const bool ok = comp && rf.forest.n_trees == 50 && rf.forest.max_depth == 20 &&
                    incl >= 0.90 && excl >= 0.92 && wall <= 600.0;
    report(ok, "C3 OVR-RF LOOCV on the seed-42 benchmark",
           "wF1=" + fmt(incl) + " (incl Other, >=0.90), wF1=" + fmt(excl) +
               " (excl Other, >=0.92), 411 heads, 6 duals, " + fmt(wall) + "s <= 600s");
  }

  // Criterion 4: OVR-RF does not trail the simpler OVR models.
  ml::OvrParams dt;
  dt.base = ml::BaseModel::Dt;
  ml::OvrParams knn;
  knn.base = ml::BaseModel::Knn;
  const eval::EvalReport dt_report = eval::loocv(fm, labels, dt, opts);
  const eval::EvalReport knn_report = eval::loocv(fm, labels, knn, opts);
  {
    const double rf_f1 = rf_report.scores.weighted_f1;
    const bool ok = rf_f1 >= dt_report.scores.weighted_f1 &&
                    rf_f1 >= knn_report.scores.weighted_f1;
    report(ok, "C4 OVR-RF >= OVR-DT and OVR-kNN on the benchmark",
           "rf=" + fmt(rf_f1) + " dt=" + fmt(dt_report.scores.weighted_f1) +
               " knn=" + fmt(knn_report.scores.weighted_f1));
  }

  // Criterion 5: shipped rules clear the bar and the comparison table renders.
  {
    const auto report_rules = eval::rules_baseline(fm, labels, rules::default_ruleset());
    const std::string table = eval::compare_reports(report_rules, rf_report);
    const bool shaped = table.find("| Class |") != std::string::npos &&
                        table.find("misclassified heads") != std::string::npos &&
                        table.find("rules") != std::string::npos &&
                        table.find("ovr-rf") != std::string::npos &&
                        table.find("Pattern5") != std::string::npos &&
                        table.find("weighted") != std::string::npos;
    const bool ok = report_rules.scores.weighted_f1 >= 0.75 && shaped;
    report(ok, "C5 rule baseline quality and comparison artifact",
           "rules wF1=" + fmt(report_rules.scores.weighted_f1) + " >= 0.75, table shaped");
  }

  // Criterion 6: byte determinism across runs and worker counts.
  {
    const nf::FeatureMatrix fm1 = nf::extract_matrix(ds.logs, catalog, 1);
    const nf::FeatureMatrix fm3 = nf::extract_matrix(ds.logs, catalog, 3);
    nf::write_feature_matrix(fm1, "acc_features_1.csv");
    nf::write_feature_matrix(fm3, "acc_features_3.csv");
    const auto bytes = [](const std::string& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const bool features_same = bytes("acc_features_1.csv") == bytes("acc_features_3.csv");

    const auto pl = pipeline::fit_pipeline(fm, labels, 0.01, 42);
    const auto train = pl.transform(fm);
    const auto m1 = ml::OvrClassifier::fit(train.values, labels, rf, 42, true, 1);
    const auto m3 = ml::OvrClassifier::fit(train.values, labels, rf, 42, true, 3);
    ml::write_model_file("acc_model_1.txt", m1);
    ml::write_model_file("acc_model_3.txt", m3);
    const bool models_same = bytes("acc_model_1.txt") == bytes("acc_model_3.txt");

    eval::EvalOptions opts3 = opts;
    opts3.workers = 3;
    const eval::EvalReport knn3 = eval::loocv(fm, labels, knn, opts3);
    const bool reports_same = eval::report_csv(knn3) == eval::report_csv(knn_report) &&
                              eval::report_markdown(knn3) == eval::report_markdown(knn_report) &&
                              eval::confusion_svg(knn3.confusion) ==
                                  eval::confusion_svg(knn_report.confusion);

    report(features_same && models_same && reports_same,
           "C6 artifacts are byte-identical across runs and worker counts",
           std::string("features ") + (features_same ? "ok" : "DIFFER") + ", models " +
               (models_same ? "ok" : "DIFFER") + ", reports+svg " +
               (reports_same ? "ok" : "DIFFER"));
  }

  // Criterion 7: held-out rows never leak into fold pipelines.
  {
    std::mt19937_64 gen(7777);
    bool ok = true;
    for (int fold = 0; fold < 20 && ok; ++fold) {
      const Eigen::Index held =
          static_cast<Eigen::Index>(gen() % static_cast<std::uint64_t>(fm.rows()));
      std::vector<Eigen::Index> train_rows;
      std::vector<LabelSet> train_labels;
      for (Eigen::Index r = 0; r < fm.rows(); ++r) {
        if (r == held) continue;
        train_rows.push_back(r);
        train_labels.push_back(labels[static_cast<std::size_t>(r)]);
      }
      const auto before = pipeline::fit_pipeline(fm.select_rows(train_rows), train_labels, 0.01, 42);
      nf::FeatureMatrix mutated = fm;
      for (Eigen::Index c = 0; c < mutated.cols(); ++c)
        mutated.values(held, c) =
            c % 3 == 0 ? std::numeric_limits<double>::quiet_NaN() : 1e9 + static_cast<double>(c);
      const auto after =
          pipeline::fit_pipeline(mutated.select_rows(train_rows), train_labels, 0.01, 42);
      ok = ok && before.selected == after.selected;
      for (Eigen::Index c = 0; ok && c < fm.cols(); ++c)
        ok = before.stats.impute_mean[c] == after.stats.impute_mean[c] &&
             before.stats.scale_mean[c] == after.stats.scale_mean[c] &&
             before.stats.scale_std[c] == after.stats.scale_std[c];
    }
    report(ok, "C7 held-out heads cannot influence fold pipelines",
           "20 random folds, bitwise-identical statistics");
  }

  // Criterion 8: structural invariants of the fitted models.
  {
    const auto pl = pipeline::fit_pipeline(fm, labels, 0.01, 42);
    const auto train = pl.transform(fm);
    const auto model = ml::OvrClassifier::fit(train.values, labels, rf, 42, true, 2);
    bool trees_ok = true, depth_ok = true, imp_ok = true;
    for (const auto& scorer : model.scorers()) {
      const auto* forest = std::get_if<ml::Forest>(&scorer);
      if (forest == nullptr) {
        trees_ok = false;
        continue;
      }
      trees_ok = trees_ok && forest->trees().size() == 50;
      for (const auto& t : forest->trees()) depth_ok = depth_ok && t.depth() <= 20;
      imp_ok = imp_ok && std::fabs(forest->gini_importance().sum() - 1.0) <= 1e-9;
    }

    bool nonempty = !rf_report.predictions.empty();
    for (const auto& p : rf_report.predictions) nonempty = nonempty && !p.empty();
    for (const auto& p : model.predict(train.values, 2)) nonempty = nonempty && !p.empty();

    // Analytic gradient against central differences.
    std::mt19937_64 gen(31);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd gx(40, 5);
    std::vector<int> gy(40);
    for (int r = 0; r < 40; ++r) {
      gy[static_cast<std::size_t>(r)] = r % 2;
      for (int c = 0; c < 5; ++c) gx(r, c) = noise(gen) + (r % 2 == 0 ? 1.0 : -1.0);
    }
    Eigen::VectorXd w(5);
    for (int i = 0; i < 5; ++i) w[i] = noise(gen) * 0.3;
    const double b = 0.2, l2 = 0.01, eps = 1e-6;
    Eigen::VectorXd grad_w;
    double grad_b = 0.0;
    ml::logreg_gradient(gx, gy, w, b, l2, grad_w, grad_b);
    bool grad_ok = true;
    for (int i = 0; i < 5; ++i) {
      Eigen::VectorXd wp = w, wm = w;
      wp[i] += eps;
      wm[i] -= eps;
      const double num =
          (ml::logreg_loss(gx, gy, wp, b, l2) - ml::logreg_loss(gx, gy, wm, b, l2)) / (2 * eps);
      grad_ok = grad_ok && std::fabs(grad_w[i] - num) <= 1e-5 * std::max(1.0, std::fabs(num));
    }
    const double numb =
        (ml::logreg_loss(gx, gy, w, b + eps, l2) - ml::logreg_loss(gx, gy, w, b - eps, l2)) /
        (2 * eps);
    grad_ok = grad_ok && std::fabs(grad_b - numb) <= 1e-5 * std::max(1.0, std::fabs(numb));

    report(trees_ok && depth_ok && imp_ok && nonempty && grad_ok,
           "C8 structural invariants hold",
           std::string("50 trees/class ") + (trees_ok ? "ok" : "BAD") + ", depth<=20 " +
               (depth_ok ? "ok" : "BAD") + ", importance sums 1 " + (imp_ok ? "ok" : "BAD") +
               ", predictions non-empty " + (nonempty ? "ok" : "BAD") + ", logreg gradient " +
               (grad_ok ? "ok" : "BAD"));
  }

  std::cout << (failures == 0 ? "acceptance: all criteria green\n"
                              : "acceptance: " + std::to_string(failures) + " criteria FAILED\n");
  return failures;
}
