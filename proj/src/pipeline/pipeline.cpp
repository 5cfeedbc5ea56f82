#include "nozzlelog/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/text.hpp"

namespace nozzlelog::pipeline {

ImputeScaleState fit_impute_scale(const FeatureMatrix& train) {
  const Eigen::Index n = train.values.rows();
  const Eigen::Index p = train.values.cols();
  if (n < 2) throw SchemaError("impute/scale fit needs at least 2 rows");

  ImputeScaleState st;
  st.impute_mean = Eigen::VectorXd::Zero(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double sum = 0.0;
    Eigen::Index cnt = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = train.values(i, j);
      if (!std::isnan(v)) {
        sum += v;
        ++cnt;
      }
    }
    st.impute_mean[j] = cnt > 0 ? sum / static_cast<double>(cnt) : 0.0;
  }

  Eigen::MatrixXd imputed = train.values;
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::isnan(imputed(i, j))) imputed(i, j) = st.impute_mean[j];

  st.scale_mean = imputed.colwise().mean();
  st.scale_std =
      ((imputed.rowwise() - st.scale_mean.transpose()).array().square().colwise().sum() /
       static_cast<double>(n))
          .sqrt()
          .matrix();
  return st;
}

double l1_hinge_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w, double b, double strength) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double m = 1.0 - y[i] * (X.row(i).dot(w) + b);
    if (m > 0) loss += m * m;
  }
  return w.cwiseAbs().sum() + strength * loss;
}

namespace {

/// Squared-hinge loss at margins s (= Xw + b), scaled by strength.
double hinge_loss(const Eigen::VectorXd& y, const Eigen::VectorXd& s, double strength) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double m = 1.0 - y[i] * s[i];
    if (m > 0) loss += m * m;
  }
  return strength * loss;
}

}  // namespace

std::pair<Eigen::VectorXd, double> l1_hinge_fit(const Eigen::MatrixXd& X,
                                                const Eigen::VectorXd& y, double strength,
                                                int max_epochs, double tol) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw SchemaError("label vector length mismatch");

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  double b = 0.0;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);  // current margins Xw + b
  Eigen::VectorXd trial(n);
  double cur_loss = hinge_loss(y, s, strength);

  // One unpenalized Newton + halving step on a direction `dir` (a column or
  // the all-ones bias direction); returns the accepted step (0 if none).
  const auto descend = [&](const double* dir, double penalty_weight, double& coef) {
    double g = 0.0, h = 1e-12;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = 1.0 - y[i] * s[i];
      if (m > 0) {
        g -= 2.0 * strength * y[i] * dir[i] * m;
        h += 2.0 * strength * dir[i] * dir[i];
      }
    }
    double z;
    if (penalty_weight > 0) {  // soft-thresholded Newton step for |coef|
      if (g + penalty_weight <= h * coef) z = -(g + penalty_weight) / h;
      else if (g - penalty_weight >= h * coef) z = -(g - penalty_weight) / h;
      else z = -coef;
    } else {
      z = -g / h;
    }
    if (z == 0.0) return 0.0;
    for (int halve = 0; halve < 24; ++halve, z *= 0.5) {
      for (Eigen::Index i = 0; i < n; ++i) trial[i] = s[i] + z * dir[i];
      const double new_loss = hinge_loss(y, trial, strength);
      const double d_pen = penalty_weight * (std::abs(coef + z) - std::abs(coef));
      if (new_loss + d_pen <= cur_loss + 1e-12) {
        s.swap(trial);
        cur_loss = new_loss;
        coef += z;
        return z;
      }
    }
    return 0.0;
  };

  std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    double max_step = 0.0;
    for (Eigen::Index j = 0; j < p; ++j)
      max_step = std::max(max_step, std::abs(descend(X.col(j).data(), 1.0, w[j])));
    max_step = std::max(max_step, std::abs(descend(ones.data(), 0.0, b)));
    if (max_step < tol) break;
  }
  return {std::move(w), b};
}

SelectorResult fit_l1_selector(const Eigen::MatrixXd& scaled,
                               const std::vector<LabelSet>& labels, double strength) {
  const Eigen::Index n = scaled.rows();
  const Eigen::Index p = scaled.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw SchemaError("selector labels do not match row count");

  std::array<Eigen::Index, kNumLabels> positives{};
  for (const LabelSet& ls : labels)
    for (Label l : ls.labels()) ++positives[static_cast<std::size_t>(l)];
  int present = 0;
  for (const Eigen::Index c : positives) present += c > 0;
  if (present < 2)
    throw SelectorError("selector needs at least 2 classes, got " + std::to_string(present));

  SelectorResult res;
  res.coefficients = Eigen::MatrixXd::Zero(kNumLabels, p);
  res.bias = Eigen::VectorXd::Zero(kNumLabels);
  for (int c = 0; c < kNumLabels; ++c) {
    const Eigen::Index pos = positives[static_cast<std::size_t>(c)];
    if (pos == 0 || pos == n) continue;  // one-sided target: w stays zero anyway
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i)
      y[i] = labels[static_cast<std::size_t>(i)].contains(static_cast<Label>(c)) ? 1.0 : -1.0;
    auto [w, b] = l1_hinge_fit(scaled, y, strength);
    res.coefficients.row(c) = w.transpose();
    res.bias[c] = b;
  }

  for (Eigen::Index j = 0; j < p; ++j) {
    if ((res.coefficients.col(j).array() != 0.0).any()) res.selected.push_back(j);
  }
  if (res.selected.empty()) {
    res.fallback = true;
    const Eigen::VectorXd mag = res.coefficients.cwiseAbs().colwise().sum().transpose();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b2) { return mag[a] > mag[b2]; });
    order.resize(std::min<std::size_t>(32, order.size()));
    std::sort(order.begin(), order.end());
    res.selected = std::move(order);
  }
  return res;
}

FittedPipeline fit_pipeline(const FeatureMatrix& train, const std::vector<LabelSet>& labels,
                            double strength, std::uint64_t seed) {
  FittedPipeline fp;
  fp.stats = fit_impute_scale(train);
  fp.columns = train.columns;
  fp.catalog_digest = train.header_digest();
  fp.seed = seed;

  Eigen::MatrixXd scaled = train.values;
  const Eigen::Index n = scaled.rows(), p = scaled.cols();
  for (Eigen::Index j = 0; j < p; ++j) {
    const double sd = fp.stats.scale_std[j] == 0.0 ? 1.0 : fp.stats.scale_std[j];
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = scaled(i, j);
      if (std::isnan(v)) v = fp.stats.impute_mean[j];
      scaled(i, j) = (v - fp.stats.scale_mean[j]) / sd;
    }
  }
  SelectorResult sel = fit_l1_selector(scaled, labels, strength);
  fp.selected = std::move(sel.selected);
  fp.selector_fallback = sel.fallback;
  return fp;
}

FeatureMatrix FittedPipeline::transform(const FeatureMatrix& x) const {
  if (x.columns != columns)
    throw SchemaError("feature columns do not match the fitted pipeline");
  FeatureMatrix out;
  out.head_ids = x.head_ids;
  out.columns.reserve(selected.size());
  for (const Eigen::Index j : selected) out.columns.push_back(columns[static_cast<std::size_t>(j)]);
  out.values.resize(x.values.rows(), static_cast<Eigen::Index>(selected.size()));
  for (std::size_t k = 0; k < selected.size(); ++k) {
    const Eigen::Index j = selected[k];
    const double sd = stats.scale_std[j] == 0.0 ? 1.0 : stats.scale_std[j];
    for (Eigen::Index i = 0; i < x.values.rows(); ++i) {
      double v = x.values(i, j);
      if (std::isnan(v)) v = stats.impute_mean[j];
      out.values(i, static_cast<Eigen::Index>(k)) = (v - stats.scale_mean[j]) / sd;
    }
  }
  return out;
}

void write_pipeline(const FittedPipeline& p, const std::string& path) {
  std::ostringstream out;
  out << "nozzlelog-pipeline v1\n";
  out << "seed " << p.seed << "\n";
  out << "catalog " << p.catalog_digest << "\n";
  out << "fallback " << (p.selector_fallback ? 1 : 0) << "\n";
  out << "columns " << p.columns.size() << "\n";
  for (std::size_t j = 0; j < p.columns.size(); ++j) {
    out << p.columns[j] << ' ' << format_double(p.stats.impute_mean[static_cast<Eigen::Index>(j)])
        << ' ' << format_double(p.stats.scale_mean[static_cast<Eigen::Index>(j)]) << ' '
        << format_double(p.stats.scale_std[static_cast<Eigen::Index>(j)]) << "\n";
  }
  out << "selected " << p.selected.size();
  for (const Eigen::Index j : p.selected) out << ' ' << j;
  out << "\n";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write pipeline file " + path);
  f << out.str();
}

namespace {

std::vector<std::string> read_fields(std::istream& in, int lineno) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("unexpected end of pipeline file", lineno);
  auto fields = split(line, ' ');
  std::erase_if(fields, [](const std::string& s) { return s.empty(); });
  return fields;
}

}  // namespace

FittedPipeline read_pipeline(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read pipeline file " + path);
  int lineno = 1;
  std::string line;
  if (!std::getline(in, line) || line != "nozzlelog-pipeline v1")
    throw ParseError("not a nozzlelog pipeline file", 1);

  FittedPipeline p;
  auto fields = read_fields(in, ++lineno);
  if (fields.size() != 2 || fields[0] != "seed") throw ParseError("expected seed", lineno);
  p.seed = parse_u64(fields[1]);
  fields = read_fields(in, ++lineno);
  if (fields.size() != 2 || fields[0] != "catalog") throw ParseError("expected catalog", lineno);
  p.catalog_digest = fields[1];
  fields = read_fields(in, ++lineno);
  if (fields.size() != 2 || fields[0] != "fallback") throw ParseError("expected fallback", lineno);
  p.selector_fallback = parse_int(fields[1]) != 0;
  fields = read_fields(in, ++lineno);
  if (fields.size() != 2 || fields[0] != "columns") throw ParseError("expected columns", lineno);
  const auto ncols = static_cast<std::size_t>(parse_u64(fields[1]));

  p.columns.resize(ncols);
  p.stats.impute_mean.resize(static_cast<Eigen::Index>(ncols));
  p.stats.scale_mean.resize(static_cast<Eigen::Index>(ncols));
  p.stats.scale_std.resize(static_cast<Eigen::Index>(ncols));
  for (std::size_t j = 0; j < ncols; ++j) {
    fields = read_fields(in, ++lineno);
    if (fields.size() != 4) throw ParseError("expected name and 3 statistics", lineno);
    p.columns[j] = fields[0];
    p.stats.impute_mean[static_cast<Eigen::Index>(j)] = parse_double(fields[1]);
    p.stats.scale_mean[static_cast<Eigen::Index>(j)] = parse_double(fields[2]);
    p.stats.scale_std[static_cast<Eigen::Index>(j)] = parse_double(fields[3]);
  }
  fields = read_fields(in, ++lineno);
  if (fields.size() < 2 || fields[0] != "selected") throw ParseError("expected selected", lineno);
  const auto nsel = static_cast<std::size_t>(parse_u64(fields[1]));
  if (fields.size() != nsel + 2) throw ParseError("selected index count mismatch", lineno);
  for (std::size_t k = 0; k < nsel; ++k) {
    const auto j = static_cast<Eigen::Index>(parse_u64(fields[k + 2]));
    if (j < 0 || j >= static_cast<Eigen::Index>(ncols))
      throw ParseError("selected index out of range", lineno);
    p.selected.push_back(j);
  }
  if (p.selected.empty()) throw ParseError("empty selected set", lineno);
  return p;
}

}  // namespace nozzlelog::pipeline
