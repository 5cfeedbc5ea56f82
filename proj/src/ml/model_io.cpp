#include "nozzlelog/ml/model_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/rng.hpp"
#include "nozzlelog/util/text.hpp"

namespace nozzlelog::ml {

namespace {

void write_tree(std::ostream& out, const DecisionTree& tree) {
  out << "tree " << tree.n_classes() << ' ' << tree.nodes().size() << '\n';
  for (const TreeNode& node : tree.nodes()) {
    out << "node " << node.column << ' ' << format_double(node.threshold) << ' ' << node.left
        << ' ' << node.right << ' ' << node.counts.size();
    for (Eigen::Index k = 0; k < node.counts.size(); ++k) {
      out << ' ' << format_double(node.counts[k]);
    }
    out << '\n';
  }
}

struct ScorerWriter {
  std::ostream& out;
  void operator()(const ConstantScorer& s) const {
    out << "constant " << format_double(s.value) << '\n';
  }
  void operator()(const DecisionTree& s) const {
    out << "tree\n";
    write_tree(out, s);
  }
  void operator()(const Forest& s) const {
    const ForestParams& p = s.params();
    out << "forest " << s.n_classes() << ' ' << s.n_features() << ' ' << s.trees().size() << ' '
        << p.max_depth << ' ' << p.min_samples_split << ' ' << p.max_features << ' '
        << (p.bootstrap ? 1 : 0) << '\n';
    for (const DecisionTree& tree : s.trees()) write_tree(out, tree);
  }
  void operator()(const Knn& s) const {
    const Eigen::MatrixXd& train = s.train();
    out << "knn " << s.params().k << ' ' << s.n_classes() << ' ' << train.rows() << ' '
        << train.cols() << '\n';
    for (Eigen::Index i = 0; i < train.rows(); ++i) {
      out << "row " << s.labels()[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < train.cols(); ++j) out << ' ' << format_double(train(i, j));
      out << '\n';
    }
  }
  void operator()(const LogReg& s) const {
    out << "logreg " << s.weights().size() << ' ' << format_double(s.bias());
    for (Eigen::Index j = 0; j < s.weights().size(); ++j) {
      out << ' ' << format_double(s.weights()[j]);
    }
    out << '\n';
  }
};

// Line-oriented tokenizer that tracks line numbers for error messages.
struct Reader {
  std::istream& in;
  std::size_t lineno = 0;
  std::vector<std::string> tokens = {};

  void next(const char* what) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      tokens = split(line, ' ');
      return;
    }
    throw ParseError(std::string("model: unexpected end of file, expected ") + what, lineno);
  }

  void expect(const char* tag, std::size_t n_args) {
    next(tag);
    if (tokens[0] != tag || tokens.size() != n_args + 1) {
      throw ParseError(std::string("model: expected '") + tag + "' line", lineno);
    }
  }

  double num(const std::string& tok) const {
    try {
      return parse_double(tok);
    } catch (const Error&) {
      throw ParseError("model: bad number '" + tok + "'", lineno);
    }
  }

  std::int64_t integer(const std::string& tok) const {
    try {
      return parse_int(tok);
    } catch (const Error&) {
      throw ParseError("model: bad integer '" + tok + "'", lineno);
    }
  }
};

DecisionTree parse_tree(Reader& r) {
  r.expect("tree", 2);
  const int n_classes = static_cast<int>(r.integer(r.tokens[1]));
  const auto n_nodes = static_cast<std::size_t>(r.integer(r.tokens[2]));
  if (n_classes < 1 || n_nodes == 0) throw ParseError("model: bad tree header", r.lineno);
  std::vector<TreeNode> nodes(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    r.next("node");
    if (r.tokens[0] != "node" || r.tokens.size() < 6) {
      throw ParseError("model: expected 'node' line", r.lineno);
    }
    TreeNode& node = nodes[i];
    node.column = static_cast<int>(r.integer(r.tokens[1]));
    node.threshold = r.num(r.tokens[2]);
    node.left = static_cast<int>(r.integer(r.tokens[3]));
    node.right = static_cast<int>(r.integer(r.tokens[4]));
    const auto k = static_cast<std::size_t>(r.integer(r.tokens[5]));
    if (k != static_cast<std::size_t>(n_classes) || r.tokens.size() != 6 + k) {
      throw ParseError("model: node count vector has wrong length", r.lineno);
    }
    node.counts.resize(static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) {
      node.counts[static_cast<Eigen::Index>(j)] = r.num(r.tokens[6 + j]);
    }
    const bool leaf = node.column < 0;
    const bool children_valid = node.left >= 0 && node.right >= 0 &&
                                node.left < static_cast<int>(n_nodes) &&
                                node.right < static_cast<int>(n_nodes);
    if (leaf ? (node.left != -1 || node.right != -1) : !children_valid) {
      throw ParseError("model: inconsistent node links", r.lineno);
    }
  }
  return DecisionTree(std::move(nodes), n_classes);
}

BinaryScorer parse_scorer(Reader& r, const std::string& kind, const OvrParams& params,
                          std::uint64_t class_seed) {
  if (kind == "constant") {
    if (r.tokens.size() != 4) throw ParseError("model: bad constant scorer", r.lineno);
    return ConstantScorer{r.num(r.tokens[3])};
  }
  if (kind == "tree") {
    if (r.tokens.size() != 3) throw ParseError("model: bad tree scorer", r.lineno);
    return parse_tree(r);
  }
  if (kind == "forest") {
    if (r.tokens.size() != 10) throw ParseError("model: bad forest scorer", r.lineno);
    const int n_classes = static_cast<int>(r.integer(r.tokens[3]));
    const auto n_features = static_cast<Eigen::Index>(r.integer(r.tokens[4]));
    const auto n_trees = static_cast<std::size_t>(r.integer(r.tokens[5]));
    ForestParams fp;
    fp.n_trees = static_cast<int>(n_trees);
    fp.max_depth = static_cast<int>(r.integer(r.tokens[6]));
    fp.min_samples_split = static_cast<int>(r.integer(r.tokens[7]));
    fp.max_features = static_cast<int>(r.integer(r.tokens[8]));
    fp.bootstrap = r.integer(r.tokens[9]) != 0;
    if (n_trees == 0) throw ParseError("model: forest with zero trees", r.lineno);
    std::vector<DecisionTree> trees;
    trees.reserve(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) trees.push_back(parse_tree(r));
    return Forest(std::move(trees), fp, n_classes, n_features, class_seed);
  }
  if (kind == "knn") {
    if (r.tokens.size() != 7) throw ParseError("model: bad knn scorer", r.lineno);
    KnnParams kp;
    kp.k = static_cast<int>(r.integer(r.tokens[3]));
    const int n_classes = static_cast<int>(r.integer(r.tokens[4]));
    const auto rows = static_cast<Eigen::Index>(r.integer(r.tokens[5]));
    const auto cols = static_cast<Eigen::Index>(r.integer(r.tokens[6]));
    if (rows <= 0 || cols < 0) throw ParseError("model: bad knn shape", r.lineno);
    Eigen::MatrixXd train(rows, cols);
    std::vector<int> y(static_cast<std::size_t>(rows));
    for (Eigen::Index i = 0; i < rows; ++i) {
      r.next("row");
      if (r.tokens[0] != "row" || r.tokens.size() != static_cast<std::size_t>(cols) + 2) {
        throw ParseError("model: bad knn row", r.lineno);
      }
      y[static_cast<std::size_t>(i)] = static_cast<int>(r.integer(r.tokens[1]));
      for (Eigen::Index j = 0; j < cols; ++j) {
        train(i, j) = r.num(r.tokens[static_cast<std::size_t>(j) + 2]);
      }
    }
    return Knn(std::move(train), std::move(y), n_classes, kp);
  }
  if (kind == "logreg") {
    if (r.tokens.size() < 5) throw ParseError("model: bad logreg scorer", r.lineno);
    const auto p = static_cast<std::size_t>(r.integer(r.tokens[3]));
    if (r.tokens.size() != 5 + p) throw ParseError("model: logreg weight count mismatch", r.lineno);
    const double bias = r.num(r.tokens[4]);
    Eigen::VectorXd w(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) w[static_cast<Eigen::Index>(j)] = r.num(r.tokens[5 + j]);
    return LogReg(std::move(w), bias, params.logreg);
  }
  throw ParseError("model: unknown scorer kind '" + kind + "'", r.lineno);
}

}  // namespace

void write_model(std::ostream& out, const OvrClassifier& model) {
  const OvrParams& p = model.params();
  out << "nozzlelog-model v1\n";
  out << "base " << base_model_name(p.base) << '\n';
  out << "seed " << model.seed() << '\n';
  out << "tree_params " << p.tree.max_depth << ' ' << p.tree.min_samples_split << ' '
      << p.tree.max_features << ' ' << (p.tree.random_thresholds ? 1 : 0) << '\n';
  out << "forest_params " << p.forest.n_trees << ' ' << p.forest.max_depth << ' '
      << p.forest.min_samples_split << ' ' << p.forest.max_features << ' '
      << (p.forest.bootstrap ? 1 : 0) << '\n';
  out << "knn_params " << p.knn.k << '\n';
  out << "logreg_params " << format_double(p.logreg.l2) << ' ' << p.logreg.epochs << ' '
      << format_double(p.logreg.lr) << ' ' << format_double(p.logreg.tol) << '\n';
  out << "scorers " << model.scorers().size() << '\n';
  for (std::size_t k = 0; k < model.scorers().size(); ++k) {
    out << "scorer " << label_name(all_labels()[k]) << ' ';
    std::visit(ScorerWriter{out}, model.scorers()[k]);
  }
}

void write_model_file(const std::string& path, const OvrClassifier& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file: " + path);
  write_model(out, model);
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

OvrClassifier read_model(std::istream& in) {
  Reader r{in};
  r.next("header");
  if (r.tokens.size() != 2 || r.tokens[0] != "nozzlelog-model" || r.tokens[1] != "v1") {
    throw ParseError("model: missing 'nozzlelog-model v1' header", r.lineno);
  }
  OvrParams params;
  r.expect("base", 1);
  params.base = base_model_from_name(r.tokens[1]);
  r.expect("seed", 1);
  std::uint64_t seed = 0;
  try {
    seed = parse_u64(r.tokens[1]);
  } catch (const Error&) {
    throw ParseError("model: bad seed '" + r.tokens[1] + "'", r.lineno);
  }
  r.expect("tree_params", 4);
  params.tree.max_depth = static_cast<int>(r.integer(r.tokens[1]));
  params.tree.min_samples_split = static_cast<int>(r.integer(r.tokens[2]));
  params.tree.max_features = static_cast<int>(r.integer(r.tokens[3]));
  params.tree.random_thresholds = r.integer(r.tokens[4]) != 0;
  r.expect("forest_params", 5);
  params.forest.n_trees = static_cast<int>(r.integer(r.tokens[1]));
  params.forest.max_depth = static_cast<int>(r.integer(r.tokens[2]));
  params.forest.min_samples_split = static_cast<int>(r.integer(r.tokens[3]));
  params.forest.max_features = static_cast<int>(r.integer(r.tokens[4]));
  params.forest.bootstrap = r.integer(r.tokens[5]) != 0;
  r.expect("knn_params", 1);
  params.knn.k = static_cast<int>(r.integer(r.tokens[1]));
  r.expect("logreg_params", 4);
  params.logreg.l2 = r.num(r.tokens[1]);
  params.logreg.epochs = static_cast<int>(r.integer(r.tokens[2]));
  params.logreg.lr = r.num(r.tokens[3]);
  params.logreg.tol = r.num(r.tokens[4]);
  r.expect("scorers", 1);
  const auto count = static_cast<std::size_t>(r.integer(r.tokens[1]));
  if (count != static_cast<std::size_t>(kNumLabels)) {
    throw ParseError("model: expected one scorer per label class", r.lineno);
  }
  std::vector<BinaryScorer> scorers;
  scorers.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    r.next("scorer");
    if (r.tokens.size() < 3 || r.tokens[0] != "scorer") {
      throw ParseError("model: expected 'scorer' line", r.lineno);
    }
    if (r.tokens[1] != label_name(all_labels()[k])) {
      throw ParseError("model: scorers out of label order", r.lineno);
    }
    scorers.push_back(
        parse_scorer(r, r.tokens[2], params, mix_seed(seed, static_cast<std::uint64_t>(k))));
  }
  return OvrClassifier(std::move(scorers), params, seed);
}

OvrClassifier read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  return read_model(in);
}

}  // namespace nozzlelog::ml
