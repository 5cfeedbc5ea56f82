// nozzlelog command-line front end.
//
//   generate   synthesize logs.tsv + manifest.csv
//   features   extract features.csv + catalog.txt from a dataset
//   tune       stratified k-fold grid search for one model family
//   evaluate   fit + score an OVR model (resubstitution, or LOOCV with --loocv)
//   baseline   score the rule-based baseline
//   compare    side-by-side table from two report CSVs
//
// Every artifact is a pure function of the inputs: no clocks, no environment
// variables, no machine-dependent output. Exit codes: 0 success, 2 bad input
// or configuration, 1 internal error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nozzlelog/core/log_io.hpp"
#include "nozzlelog/errors.hpp"
#include "nozzlelog/eval/harness.hpp"
#include "nozzlelog/eval/report.hpp"
#include "nozzlelog/features/catalog.hpp"
#include "nozzlelog/features/extract.hpp"
#include "nozzlelog/ml/model_io.hpp"
#include "nozzlelog/ml/ovr.hpp"
#include "nozzlelog/pipeline/pipeline.hpp"
#include "nozzlelog/rules/rules.hpp"
#include "nozzlelog/synth/generator.hpp"
#include "nozzlelog/synth/params.hpp"
#include "nozzlelog/util/config.hpp"
#include "nozzlelog/util/fsio.hpp"
#include "nozzlelog/util/parallel.hpp"
#include "nozzlelog/util/text.hpp"

namespace {

using namespace nozzlelog;

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

/// Flag values plus the loaded --config; flags win over config keys.
struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string data = "data";
  std::string out;
  std::string model = "ovr-rf";
  std::string rules;
  int folds = 10;
  std::string grid = "default";
  std::vector<std::string> exclude;
  bool loocv = false;
  std::vector<std::string> reports;

  CLI::App* sub = nullptr;
  std::optional<Config> cfg;

  void load() {
    if (!config.empty()) cfg = Config::load(config);
  }

  bool given(const std::string& flag) const {
    const auto* o = sub->get_option_no_throw(flag);
    return o != nullptr && o->count() > 0;
  }
  bool cfg_has(const std::string& key) const { return cfg && cfg->has(key); }

  std::string resolve(const std::string& flag, const std::string& value, const std::string& key,
                      std::string fallback) const {
    if (given(flag)) return value;
    if (cfg_has(key)) return cfg->get(key);
    return fallback;
  }

  std::uint64_t require_seed() const {
    if (given("--seed")) return seed;
    if (cfg_has("seed")) return cfg->get_u64("seed");
    throw ConfigError("a seed is required (--seed or config key 'seed')");
  }

  std::string data_dir() const { return resolve("--data", data, "data", "data"); }
  std::string out_dir(std::string fallback) const {
    return resolve("--out", out, "out", std::move(fallback));
  }
  std::string model_name() const { return resolve("--model", model, "model", "ovr-rf"); }
  std::string rules_file() const { return resolve("--rules", rules, "rules", ""); }
  std::string grid_name() const { return resolve("--grid", grid, "grid", "default"); }

  int fold_count() const {
    if (given("--folds")) return folds;
    if (cfg_has("folds")) return static_cast<int>(cfg->get_int("folds"));
    return 10;
  }

  LabelSet exclude_set() const {
    if (exclude.empty())
      return cfg_has("exclude") ? LabelSet::parse(cfg->get("exclude")) : LabelSet();
    LabelSet s;
    for (const auto& name : exclude) s.add(label_from_name(name));
    return s;
  }
};

/// Keys the CLI consumes itself; everything else is handed to the generator,
/// whose config reader rejects keys it does not know.
Config synth_view(const Config& cfg) {
  static const std::vector<std::string> cli_keys = {"data", "out",  "model",  "rules",
                                                    "folds", "grid", "exclude"};
  std::string text;
  for (const auto& [key, value] : cfg.entries()) {
    if (std::find(cli_keys.begin(), cli_keys.end(), key) != cli_keys.end()) continue;
    text += key + " = " + value + "\n";
  }
  return Config::from_string(text);
}

std::vector<LabelSet> aligned_labels(const features::FeatureMatrix& fm, const Manifest& manifest) {
  std::vector<LabelSet> labels;
  labels.reserve(fm.head_ids.size());
  for (const auto& id : fm.head_ids) {
    const auto it = manifest.find(id);
    if (it == manifest.end()) throw SchemaError("head '" + id + "' missing from manifest");
    labels.push_back(it->second);
  }
  return labels;
}

features::FeatureMatrix load_features(const Common& c) {
  return features::read_feature_matrix(join(c.data_dir(), "features.csv"));
}

Manifest load_manifest(const Common& c) {
  return read_manifest(join(c.data_dir(), "manifest.csv"));
}

/// Base-model parameters with optional config overrides (dt.max_depth,
/// rf.n_trees, knn.k, logreg.l2, ...). rf and et use their own prefixes.
ml::OvrParams ovr_params(const std::string& model_name, const Common& c) {
  ml::OvrParams p;
  p.base = ml::base_model_from_name(model_name);
  if (!c.cfg) return p;
  const Config& cfg = *c.cfg;
  const auto geti = [&](const std::string& key, int fallback) {
    return cfg.has(key) ? static_cast<int>(cfg.get_int(key)) : fallback;
  };
  const auto getd = [&](const std::string& key, double fallback) {
    return cfg.has(key) ? cfg.get_double(key) : fallback;
  };
  const std::string b = ml::ovr_model_name(p.base).substr(4);  // strip "ovr-"
  switch (p.base) {
    case ml::BaseModel::Dt:
      p.tree.max_depth = geti("dt.max_depth", p.tree.max_depth);
      p.tree.min_samples_split = geti("dt.min_samples_split", p.tree.min_samples_split);
      break;
    case ml::BaseModel::Rf:
    case ml::BaseModel::Et:
      p.forest.n_trees = geti(b + ".n_trees", p.forest.n_trees);
      p.forest.max_depth = geti(b + ".max_depth", p.forest.max_depth);
      p.forest.min_samples_split = geti(b + ".min_samples_split", p.forest.min_samples_split);
      p.forest.max_features = geti(b + ".max_features", p.forest.max_features);
      break;
    case ml::BaseModel::Knn:
      p.knn.k = geti("knn.k", p.knn.k);
      break;
    case ml::BaseModel::Logreg:
      p.logreg.l2 = getd("logreg.l2", p.logreg.l2);
      p.logreg.epochs = geti("logreg.epochs", p.logreg.epochs);
      p.logreg.lr = getd("logreg.lr", p.logreg.lr);
      break;
  }
  return p;
}

std::vector<eval::GridEntry> default_grid(const ml::OvrParams& base) {
  std::vector<eval::GridEntry> grid;
  const auto push = [&](std::string name, auto&& mutate) {
    eval::GridEntry e{std::move(name), base};
    mutate(e.params);
    grid.push_back(std::move(e));
  };
  switch (base.base) {
    case ml::BaseModel::Dt:
      for (int d : {5, 10, 20})
        push("max_depth=" + std::to_string(d), [d](ml::OvrParams& p) { p.tree.max_depth = d; });
      break;
    case ml::BaseModel::Rf:
    case ml::BaseModel::Et:
      for (int n : {25, 50})
        for (int d : {10, 20})
          push("n_trees=" + std::to_string(n) + " max_depth=" + std::to_string(d),
               [n, d](ml::OvrParams& p) {
                 p.forest.n_trees = n;
                 p.forest.max_depth = d;
               });
      break;
    case ml::BaseModel::Knn:
      for (int k : {1, 3, 5, 7})
        push("k=" + std::to_string(k), [k](ml::OvrParams& p) { p.knn.k = k; });
      break;
    case ml::BaseModel::Logreg:
      for (double l2 : {1e-4, 1e-2})
        push("l2=" + format_double(l2), [l2](ml::OvrParams& p) { p.logreg.l2 = l2; });
      break;
  }
  return grid;
}

/// Best entry of a tune run as a loadable config snippet.
std::string best_params_text(const std::string& model, const eval::TuneResult& t) {
  std::string text = "# tuned parameters: stratified " + std::to_string(t.k) +
                     "-fold, mean weighted F1, Other excluded\n";
  text += "model = " + model + "\n";
  text += "entry = " + t.table[t.best_index].name + "\n";
  text += "mean_f1 = " + format_double(t.table[t.best_index].mean_f1) + "\n";
  const auto& p = t.best_params;
  const std::string b = model.substr(4);
  switch (p.base) {
    case ml::BaseModel::Dt:
      text += "dt.max_depth = " + std::to_string(p.tree.max_depth) + "\n";
      break;
    case ml::BaseModel::Rf:
    case ml::BaseModel::Et:
      text += b + ".n_trees = " + std::to_string(p.forest.n_trees) + "\n";
      text += b + ".max_depth = " + std::to_string(p.forest.max_depth) + "\n";
      break;
    case ml::BaseModel::Knn:
      text += "knn.k = " + std::to_string(p.knn.k) + "\n";
      break;
    case ml::BaseModel::Logreg:
      text += "logreg.l2 = " + format_double(p.logreg.l2) + "\n";
      break;
  }
  return text;
}

void print_report_line(const eval::EvalReport& r) {
  std::cout << "model=" << r.model << " heads=" << r.heads()
            << " weighted_f1=" << format_double(r.scores.weighted_f1)
            << " misclassified=" << r.misclassified << "\n";
}

int cmd_generate(Common& c) {
  synth::DatasetSpec spec =
      c.cfg ? synth::dataset_spec_from_config(synth_view(*c.cfg)) : synth::DatasetSpec::default_spec(42);
  spec.seed = c.require_seed();
  const std::string dir = c.out_dir(c.data_dir());
  const auto ds = synth::generate_dataset(spec, default_workers());
  synth::write_dataset(ds, dir);
  int label_rows = 0;
  for (const auto& [id, set] : ds.manifest) label_rows += set.size();
  std::cout << "heads=" << ds.logs.size() << " labels=" << label_rows << "\n";
  return 0;
}

int cmd_features(Common& c) {
  const std::string dir = c.data_dir();
  const auto logs = read_log_file(join(dir, "logs.tsv"));
  const auto manifest = read_manifest(join(dir, "manifest.csv"));
  for (const auto& log : logs)
    if (manifest.find(log.head_id) == manifest.end())
      throw SchemaError("head '" + log.head_id + "' missing from manifest");
  const auto catalog = features::FeatureCatalog::default_catalog();
  const auto fm = features::extract_matrix(logs, catalog, default_workers());
  const std::string out = c.out_dir(dir);
  ensure_directories(out);
  features::write_feature_matrix(fm, join(out, "features.csv"));
  write_text_file(join(out, "catalog.txt"), fm.header_digest() + "\n");
  std::cout << "rows=" << fm.rows() << " columns=" << fm.cols() << " digest=" << fm.header_digest()
            << "\n";
  return 0;
}

int cmd_evaluate(Common& c) {
  const std::uint64_t seed = c.require_seed();
  const auto fm = load_features(c);
  const auto labels = aligned_labels(fm, load_manifest(c));
  const auto params = ovr_params(c.model_name(), c);
  const std::string model = ml::ovr_model_name(params.base);

  eval::EvalOptions opts;
  opts.seed = seed;
  opts.workers = default_workers();
  opts.exclude = c.exclude_set();

  const std::string out = c.out_dir("out");
  ensure_directories(out);

  // Deployable full-data artifacts first: pipeline, model, importances.
  const auto pl = pipeline::fit_pipeline(fm, labels, opts.selector_strength, seed);
  const auto train = pl.transform(fm);
  std::vector<std::string> notes;
  const auto clf =
      ml::OvrClassifier::fit(train.values, labels, params, seed, false, opts.workers, &notes);
  pipeline::write_pipeline(pl, join(out, "pipeline-" + model + ".txt"));
  ml::write_model_file(join(out, "model-" + model + ".txt"), clf);
  if (params.base == ml::BaseModel::Rf || params.base == ml::BaseModel::Et)
    write_text_file(join(out, "importance-" + model + ".md"),
                    eval::importance_report(clf, train.columns));

  eval::EvalReport report;
  if (c.loocv) {
    report = eval::loocv(fm, labels, params, opts);
    eval::write_report_files(report, out, "eval-" + model);
  } else {
    const auto preds = clf.predict(train.values, opts.workers);
    report = eval::score_predictions(model, fm.head_ids, labels, preds, opts.exclude, seed,
                                     fm.header_digest(), fm.content_digest());
    report.warnings = notes;
    eval::write_report_files(report, out, "train-" + model);
  }
  print_report_line(report);
  return 0;
}

int cmd_baseline(Common& c) {
  const auto fm = load_features(c);
  const auto labels = aligned_labels(fm, load_manifest(c));
  const std::string path = c.rules_file();
  const rules::RuleSet rs = path.empty() ? rules::parse_rules(rules::default_rules_text(), fm.columns)
                                         : rules::load_rules_file(path, fm.columns);
  const auto report = eval::rules_baseline(fm, labels, rs, c.exclude_set());
  const std::string out = c.out_dir("out");
  eval::write_report_files(report, out, "eval-rules");
  print_report_line(report);
  return 0;
}

int cmd_tune(Common& c) {
  const std::uint64_t seed = c.require_seed();
  const auto fm = load_features(c);
  const auto labels = aligned_labels(fm, load_manifest(c));
  const auto params = ovr_params(c.model_name(), c);
  const std::string model = ml::ovr_model_name(params.base);
  if (c.grid_name() != "default")
    throw ConfigError("unknown grid '" + c.grid_name() + "' (available: default)");

  eval::EvalOptions opts;
  opts.seed = seed;
  opts.workers = default_workers();
  opts.exclude = c.exclude_set();

  const auto result = eval::kfold_tune(fm, labels, default_grid(params), c.fold_count(), opts);
  const std::string out = c.out_dir("out");
  ensure_directories(out);
  write_text_file(join(out, "tune-" + model + ".md"), eval::tune_markdown(result));
  write_text_file(join(out, "best-" + model + ".txt"), best_params_text(model, result));
  std::cout << "best=" << result.table[result.best_index].name
            << " mean_f1=" << format_double(result.table[result.best_index].mean_f1) << "\n";
  return 0;
}

int cmd_compare(Common& c) {
  const auto a = eval::read_report_file(c.reports[0]);
  const auto b = eval::read_report_file(c.reports[1]);
  const std::string md = eval::compare_reports(a, b);
  const std::string out = c.out_dir("out");
  ensure_directories(out);
  write_text_file(join(out, "compare-" + a.model + "-vs-" + b.model + ".md"), md);
  std::cout << md;
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"printhead nozzle-log failure-pattern toolkit"};
  app.require_subcommand(1);

  std::vector<std::shared_ptr<Common>> contexts;
  int rc = 0;

  const auto make = [&](const std::string& name, const std::string& desc, auto command) {
    auto c = std::make_shared<Common>();
    contexts.push_back(c);
    CLI::App* sub = app.add_subcommand(name, desc);
    c->sub = sub;
    sub->add_option("--config", c->config, "key = value run configuration file");
    sub->callback([c, command, &rc] {
      c->load();
      rc = command(*c);
    });
    return std::pair<CLI::App*, std::shared_ptr<Common>>(sub, c);
  };

  {
    auto [sub, c] = make("generate", "synthesize logs.tsv + manifest.csv", cmd_generate);
    sub->add_option("--seed", c->seed, "dataset seed (required here or in the config)");
    sub->add_option("--data", c->data, "dataset directory");
    sub->add_option("--out", c->out, "output directory (defaults to --data)");
  }
  {
    auto [sub, c] = make("features", "extract features.csv + catalog.txt", cmd_features);
    sub->add_option("--data", c->data, "directory holding logs.tsv + manifest.csv");
    sub->add_option("--out", c->out, "output directory (defaults to --data)");
  }
  {
    auto [sub, c] = make("tune", "stratified k-fold grid search", cmd_tune);
    sub->add_option("--seed", c->seed, "fold-assignment seed (required here or in the config)");
    sub->add_option("--data", c->data, "directory holding features.csv + manifest.csv");
    sub->add_option("--out", c->out, "artifact directory");
    sub->add_option("--model", c->model, "dt|rf|et|knn|logreg (ovr- prefix accepted)");
    sub->add_option("--folds", c->folds, "number of folds");
    sub->add_option("--grid", c->grid, "grid name (only: default)");
    sub->add_option("--exclude-class", c->exclude, "class excluded from weighted averages");
  }
  {
    auto [sub, c] = make("evaluate", "fit + score an OVR model", cmd_evaluate);
    sub->add_option("--seed", c->seed, "run seed (required here or in the config)");
    sub->add_option("--data", c->data, "directory holding features.csv + manifest.csv");
    sub->add_option("--out", c->out, "artifact directory");
    sub->add_option("--model", c->model, "dt|rf|et|knn|logreg (ovr- prefix accepted)");
    sub->add_option("--exclude-class", c->exclude, "class excluded from weighted averages");
    sub->add_flag("--loocv", c->loocv, "leave-one-out cross-validation instead of resubstitution");
  }
  {
    auto [sub, c] = make("baseline", "score the rule-based baseline", cmd_baseline);
    sub->add_option("--data", c->data, "directory holding features.csv + manifest.csv");
    sub->add_option("--out", c->out, "artifact directory");
    sub->add_option("--rules", c->rules, "rules file (default: built-in rules)");
    sub->add_option("--exclude-class", c->exclude, "class excluded from weighted averages");
  }
  {
    auto [sub, c] = make("compare", "side-by-side table from two report CSVs", cmd_compare);
    sub->add_option("reports", c->reports, "two report .csv artifacts")->expected(2);
    sub->add_option("--out", c->out, "artifact directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const nozzlelog::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
