#include "nozzlelog/ml/ovr.hpp"

#include <utility>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/rng.hpp"

namespace nozzlelog::ml {

BaseModel base_model_from_name(std::string_view name) {
  std::string_view base = name;
  if (base.rfind("ovr-", 0) == 0) base.remove_prefix(4);
  if (base == "dt") return BaseModel::Dt;
  if (base == "rf") return BaseModel::Rf;
  if (base == "et") return BaseModel::Et;
  if (base == "knn") return BaseModel::Knn;
  if (base == "logreg") return BaseModel::Logreg;
  throw UnsupportedModelError("unknown model '" + std::string(name) +
                              "' (expected dt, rf, et, knn or logreg)");
}

std::string_view base_model_name(BaseModel base) {
  switch (base) {
    case BaseModel::Dt: return "dt";
    case BaseModel::Rf: return "rf";
    case BaseModel::Et: return "et";
    case BaseModel::Knn: return "knn";
    case BaseModel::Logreg: return "logreg";
  }
  throw DomainError("base_model_name: invalid enum value");
}

std::string ovr_model_name(BaseModel base) {
  return "ovr-" + std::string(base_model_name(base));
}

Eigen::VectorXd scorer_scores(const BinaryScorer& scorer, const Eigen::MatrixXd& x,
                              unsigned workers) {
  struct Visitor {
    const Eigen::MatrixXd& x;
    unsigned workers;
    Eigen::VectorXd operator()(const ConstantScorer& s) const {
      return Eigen::VectorXd::Constant(x.rows(), s.value);
    }
    Eigen::VectorXd operator()(const DecisionTree& s) const { return s.predict_proba(x).col(1); }
    Eigen::VectorXd operator()(const Forest& s) const { return s.predict_proba(x).col(1); }
    Eigen::VectorXd operator()(const Knn& s) const { return s.predict_proba(x, workers).col(1); }
    Eigen::VectorXd operator()(const LogReg& s) const { return s.scores(x); }
  };
  return std::visit(Visitor{x, workers}, scorer);
}

OvrClassifier::OvrClassifier(std::vector<BinaryScorer> scorers, OvrParams params,
                             std::uint64_t seed)
    : scorers_(std::move(scorers)), params_(params), seed_(seed) {}

OvrClassifier OvrClassifier::fit(const Eigen::MatrixXd& x, const std::vector<LabelSet>& labels,
                                 const OvrParams& params, std::uint64_t seed, bool strict,
                                 unsigned workers, std::vector<std::string>* notes) {
  if (x.rows() == 0) throw FitError("ovr: empty training set");
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw SchemaError("ovr: row/label count mismatch");
  }

  const std::size_t n = labels.size();
  std::vector<BinaryScorer> scorers;
  scorers.reserve(kNumLabels);
  std::vector<int> y(n);
  for (int k = 0; k < kNumLabels; ++k) {
    const Label cls = all_labels()[static_cast<std::size_t>(k)];
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = labels[i].contains(cls) ? 1 : 0;
      positives += static_cast<std::size_t>(y[i]);
    }
    if (positives == 0) {
      if (strict) {
        throw FitError("ovr: class " + label_name(cls) + " absent from training data");
      }
      if (notes) notes->push_back("class " + label_name(cls) + " absent; scoring it 0");
      scorers.emplace_back(ConstantScorer{0.0});
      continue;
    }
    const std::uint64_t class_seed = mix_seed(seed, static_cast<std::uint64_t>(k));
    switch (params.base) {
      case BaseModel::Dt:
        scorers.emplace_back(DecisionTree::fit(x, y, 2, params.tree, class_seed));
        break;
      case BaseModel::Rf:
      case BaseModel::Et: {
        ForestParams fp = params.forest;
        fp.bootstrap = params.base == BaseModel::Rf;
        scorers.emplace_back(Forest::fit(x, y, 2, fp, class_seed, workers));
        break;
      }
      case BaseModel::Knn:
        scorers.emplace_back(Knn::fit(x, y, 2, params.knn));
        break;
      case BaseModel::Logreg:
        scorers.emplace_back(LogReg::fit(x, y, params.logreg));
        break;
    }
  }
  return OvrClassifier(std::move(scorers), params, seed);
}

Eigen::MatrixXd OvrClassifier::scores(const Eigen::MatrixXd& x, unsigned workers) const {
  if (scorers_.size() != static_cast<std::size_t>(kNumLabels)) {
    throw DomainError("ovr: not fitted");
  }
  Eigen::MatrixXd out(x.rows(), kNumLabels);
  for (int k = 0; k < kNumLabels; ++k) {
    out.col(k) = scorer_scores(scorers_[static_cast<std::size_t>(k)], x, workers);
  }
  return out;
}

std::vector<LabelSet> OvrClassifier::predict(const Eigen::MatrixXd& x, unsigned workers) const {
  const Eigen::MatrixXd s = scores(x, workers);
  std::vector<LabelSet> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = decide(s.row(i).transpose());
  }
  return out;
}

LabelSet OvrClassifier::decide(const Eigen::Ref<const Eigen::VectorXd>& score_row) {
  if (score_row.size() != kNumLabels) throw SchemaError("ovr: score row has wrong length");
  LabelSet out;
  for (int k = 0; k < kNumLabels; ++k) {
    if (score_row[k] >= 0.5) out.add(all_labels()[static_cast<std::size_t>(k)]);
  }
  if (out.empty()) {
    out.add(all_labels()[static_cast<std::size_t>(argmax_class(score_row))]);
  }
  if (out.contains(Label::Other) && out.size() > 1) out.remove(Label::Other);
  return out;
}

}  // namespace nozzlelog::ml
