#include "nozzlelog/eval/report.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/fsio.hpp"
#include "nozzlelog/util/text.hpp"

namespace nozzlelog::eval {

namespace {

const char* kCsvHeader = "key,value";

void append_csv(std::string& out, const std::string& key, const std::string& value) {
  if (key.find(',') != std::string::npos || value.find(',') != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw Error("report csv: key or value contains ',' or newline: " + key + "=" + value);
  }
  out += key;
  out += ',';
  out += value;
  out += '\n';
}

std::string labelset_or_empty(const LabelSet& s) { return s.empty() ? "" : s.to_string(); }

LabelSet parse_labelset_or_empty(const std::string& s) {
  return s.empty() ? LabelSet() : LabelSet::parse(s);
}

std::string class_key(int k, const char* field) {
  return "class." + label_name(all_labels()[static_cast<std::size_t>(k)]) + "." + field;
}

}  // namespace

std::vector<std::string> EvalReport::misclassified_heads() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < head_ids.size(); ++i) {
    if (!(truth[i] == predictions[i])) out.push_back(head_ids[i]);
  }
  return out;
}

EvalReport score_predictions(std::string model, const std::vector<std::string>& head_ids,
                             const std::vector<LabelSet>& truth,
                             const std::vector<LabelSet>& predictions, const LabelSet& exclude,
                             std::uint64_t seed, std::string catalog_digest,
                             std::string dataset_digest) {
  if (head_ids.size() != truth.size() || truth.size() != predictions.size()) {
    throw EvalError("score_predictions: head/truth/prediction lengths differ");
  }
  EvalReport r;
  r.model = std::move(model);
  r.seed = seed;
  r.catalog_digest = std::move(catalog_digest);
  r.dataset_digest = std::move(dataset_digest);
  r.excluded = exclude;
  r.head_ids = head_ids;
  r.truth = truth;
  r.predictions = predictions;
  r.scores = multilabel_prf(truth, predictions, exclude);
  r.confusion = confusion_matrix(truth, predictions);
  r.misclassified = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!(truth[i] == predictions[i])) ++r.misclassified;
  }
  return r;
}

std::string report_markdown(const EvalReport& r) {
  std::string out;
  out += "# Evaluation report: " + r.model + "\n\n";
  out += "- model: " + r.model + "\n";
  out += "- seed: " + std::to_string(r.seed) + "\n";
  out += "- heads: " + std::to_string(r.heads()) + "\n";
  out += "- misclassified heads: " + std::to_string(r.misclassified) + "\n";
  out += "- catalog digest: `" + r.catalog_digest + "`\n";
  out += "- dataset digest: `" + r.dataset_digest + "`\n";
  out += "- excluded from weighting: " +
         (r.excluded.empty() ? std::string("(none)") : r.excluded.to_string()) + "\n\n";

  out += "| Class | Precision | Recall | F1 | Support |\n";
  out += "|---|---:|---:|---:|---:|\n";
  long weighted_support = 0;
  for (int k = 0; k < kNumLabels; ++k) {
    const Label cls = all_labels()[static_cast<std::size_t>(k)];
    const ClassScores& s = r.scores.per_class[static_cast<std::size_t>(k)];
    out += "| " + label_name(cls) + " | " + format_double(s.precision) + " | " +
           format_double(s.recall) + " | " + format_double(s.f1) + " | " +
           std::to_string(s.support()) + " |\n";
    if (!r.excluded.contains(cls)) weighted_support += s.support();
  }
  out += "| weighted | " + format_double(r.scores.weighted_precision) + " | " +
         format_double(r.scores.weighted_recall) + " | " + format_double(r.scores.weighted_f1) +
         " | " + std::to_string(weighted_support) + " |\n\n";

  out += "## Confusion matrix (true rows, predicted columns)\n\n";
  out += "| |";
  for (int c = 0; c < kNumLabels; ++c) {
    out += " " + label_name(all_labels()[static_cast<std::size_t>(c)]) + " |";
  }
  out += "\n|---|";
  for (int c = 0; c < kNumLabels; ++c) out += "---:|";
  out += "\n";
  for (int t = 0; t < kNumLabels; ++t) {
    out += "| " + label_name(all_labels()[static_cast<std::size_t>(t)]) + " |";
    for (int c = 0; c < kNumLabels; ++c) out += " " + std::to_string(r.confusion(t, c)) + " |";
    out += "\n";
  }

  out += "\n## Misclassified heads\n\n";
  const auto missed = r.misclassified_heads();
  if (missed.empty()) {
    out += "(none)\n";
  } else {
    for (std::size_t i = 0; i < missed.size(); ++i) {
      out += missed[i];
      out += i + 1 < missed.size() ? ", " : "\n";
    }
  }

  out += "\n## Warnings\n\n";
  if (r.warnings.empty()) {
    out += "(none)\n";
  } else {
    for (const auto& w : r.warnings) out += "- " + w + "\n";
  }
  return out;
}

std::string report_csv(const EvalReport& r) {
  if (r.head_ids.size() != r.truth.size() || r.truth.size() != r.predictions.size()) {
    throw EvalError("report_csv: inconsistent report");
  }
  std::string out;
  out += kCsvHeader;
  out += '\n';
  append_csv(out, "model", r.model);
  append_csv(out, "seed", std::to_string(r.seed));
  append_csv(out, "catalog_digest", r.catalog_digest);
  append_csv(out, "dataset_digest", r.dataset_digest);
  append_csv(out, "excluded", labelset_or_empty(r.excluded));
  append_csv(out, "misclassified", std::to_string(r.misclassified));
  append_csv(out, "weighted_precision", format_double(r.scores.weighted_precision));
  append_csv(out, "weighted_recall", format_double(r.scores.weighted_recall));
  append_csv(out, "weighted_f1", format_double(r.scores.weighted_f1));
  for (int k = 0; k < kNumLabels; ++k) {
    const ClassScores& s = r.scores.per_class[static_cast<std::size_t>(k)];
    append_csv(out, class_key(k, "tp"), std::to_string(s.tp));
    append_csv(out, class_key(k, "fp"), std::to_string(s.fp));
    append_csv(out, class_key(k, "fn"), std::to_string(s.fn));
    append_csv(out, class_key(k, "precision"), format_double(s.precision));
    append_csv(out, class_key(k, "recall"), format_double(s.recall));
    append_csv(out, class_key(k, "f1"), format_double(s.f1));
  }
  for (int t = 0; t < kNumLabels; ++t) {
    for (int c = 0; c < kNumLabels; ++c) {
      append_csv(out,
                 "confusion." + label_name(all_labels()[static_cast<std::size_t>(t)]) + "." +
                     label_name(all_labels()[static_cast<std::size_t>(c)]),
                 std::to_string(r.confusion(t, c)));
    }
  }
  for (std::size_t i = 0; i < r.head_ids.size(); ++i) {
    append_csv(out, "head." + r.head_ids[i],
               r.truth[i].to_string() + ";" + r.predictions[i].to_string());
  }
  for (std::size_t i = 0; i < r.warnings.size(); ++i) {
    append_csv(out, "warning." + std::to_string(i), r.warnings[i]);
  }
  return out;
}

EvalReport report_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("report csv: missing 'key,value' header", 1);
  }
  lineno = 1;
  EvalReport r;
  std::map<std::string, std::string> scalar;
  std::size_t warning_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("report csv: missing comma", lineno);
    const std::string key = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    if (key.rfind("head.", 0) == 0) {
      const auto parts = split(value, ';');
      if (parts.size() != 2) throw ParseError("report csv: head value needs 'truth;pred'", lineno);
      try {
        r.head_ids.push_back(key.substr(5));
        r.truth.push_back(LabelSet::parse(parts[0]));
        r.predictions.push_back(LabelSet::parse(parts[1]));
      } catch (const Error& e) {
        throw ParseError(std::string("report csv: ") + e.what(), lineno);
      }
      continue;
    }
    if (key.rfind("warning.", 0) == 0) {
      if (key != "warning." + std::to_string(warning_index)) {
        throw ParseError("report csv: warnings out of order", lineno);
      }
      ++warning_index;
      r.warnings.push_back(value);
      continue;
    }
    if (!scalar.emplace(key, value).second) {
      throw ParseError("report csv: duplicate key '" + key + "'", lineno);
    }
  }

  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = scalar.find(key);
    if (it == scalar.end()) throw ParseError("report csv: missing key '" + key + "'", lineno);
    return it->second;
  };
  auto to_long = [&](const std::string& key) {
    try {
      return parse_int(need(key));
    } catch (const ParseError&) {
      throw;
    } catch (const Error&) {
      throw ParseError("report csv: bad integer for '" + key + "'", lineno);
    }
  };
  auto to_double = [&](const std::string& key) {
    try {
      return parse_double(need(key));
    } catch (const ParseError&) {
      throw;
    } catch (const Error&) {
      throw ParseError("report csv: bad number for '" + key + "'", lineno);
    }
  };

  r.model = need("model");
  try {
    r.seed = parse_u64(need("seed"));
    r.excluded = parse_labelset_or_empty(need("excluded"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("report csv: ") + e.what(), lineno);
  }
  r.catalog_digest = need("catalog_digest");
  r.dataset_digest = need("dataset_digest");
  r.misclassified = static_cast<int>(to_long("misclassified"));
  r.scores.excluded = r.excluded;
  r.scores.weighted_precision = to_double("weighted_precision");
  r.scores.weighted_recall = to_double("weighted_recall");
  r.scores.weighted_f1 = to_double("weighted_f1");
  for (int k = 0; k < kNumLabels; ++k) {
    ClassScores& s = r.scores.per_class[static_cast<std::size_t>(k)];
    s.tp = to_long(class_key(k, "tp"));
    s.fp = to_long(class_key(k, "fp"));
    s.fn = to_long(class_key(k, "fn"));
    s.precision = to_double(class_key(k, "precision"));
    s.recall = to_double(class_key(k, "recall"));
    s.f1 = to_double(class_key(k, "f1"));
  }
  for (int t = 0; t < kNumLabels; ++t) {
    for (int c = 0; c < kNumLabels; ++c) {
      r.confusion(t, c) = static_cast<int>(
          to_long("confusion." + label_name(all_labels()[static_cast<std::size_t>(t)]) + "." +
                  label_name(all_labels()[static_cast<std::size_t>(c)])));
    }
  }
  return r;
}

void write_report_files(const EvalReport& r, const std::string& dir, const std::string& stem) {
  ensure_directories(dir);
  const auto base = std::filesystem::path(dir) / stem;
  for (const auto& [ext, content] :
       {std::pair<const char*, std::string>{".md", report_markdown(r)},
        {".csv", report_csv(r)},
        {".svg", confusion_svg(r.confusion)}}) {
    const std::string path = base.string() + ext;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write report file: " + path);
    out << content;
    out.flush();
    if (!out) throw Error("write failed: " + path);
  }
}

EvalReport read_report_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open report file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return report_from_csv(buf.str());
}

std::string confusion_svg(const ConfusionMatrix& m) {
  constexpr int kCellW = 72;
  constexpr int kCellH = 44;
  constexpr int kLeft = 96;
  constexpr int kTop = 72;
  constexpr int kPad = 12;
  const int width = kLeft + kNumLabels * kCellW + kPad;
  const int height = kTop + kNumLabels * kCellH + kPad;
  int max_cell = 1;
  for (int t = 0; t < kNumLabels; ++t) {
    for (int c = 0; c < kNumLabels; ++c) max_cell = std::max(max_cell, m(t, c));
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<style>text{font-family:monospace;font-size:12px}</style>\n";
  svg += "<text x=\"" + std::to_string(kLeft / 2) + "\" y=\"16\">true \\</text>\n";
  svg += "<text x=\"" + std::to_string(kLeft) + "\" y=\"16\">predicted</text>\n";
  for (int c = 0; c < kNumLabels; ++c) {
    const int x = kLeft + c * kCellW + kCellW / 2;
    svg += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(kTop - 10) +
           "\" text-anchor=\"middle\">" + label_name(all_labels()[static_cast<std::size_t>(c)]) +
           "</text>\n";
  }
  for (int t = 0; t < kNumLabels; ++t) {
    const int y = kTop + t * kCellH + kCellH / 2 + 4;
    svg += "<text x=\"" + std::to_string(kLeft - 8) + "\" y=\"" + std::to_string(y) +
           "\" text-anchor=\"end\">" + label_name(all_labels()[static_cast<std::size_t>(t)]) +
           "</text>\n";
    for (int c = 0; c < kNumLabels; ++c) {
      const int x = kLeft + c * kCellW;
      const int rect_y = kTop + t * kCellH;
      // Integer-only shade: 0 -> white, max -> saturated red.
      const int drop = (m(t, c) * 205) / max_cell;
      const std::string fill =
          "rgb(255," + std::to_string(255 - drop) + "," + std::to_string(255 - drop) + ")";
      svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(rect_y) + "\" width=\"" +
             std::to_string(kCellW) + "\" height=\"" + std::to_string(kCellH) + "\" fill=\"" +
             fill + "\" stroke=\"#888\"/>\n";
      const char* text_fill = drop > 120 ? "#fff" : "#000";
      svg += "<text x=\"" + std::to_string(x + kCellW / 2) + "\" y=\"" + std::to_string(y) +
             "\" text-anchor=\"middle\" fill=\"" + text_fill + "\">" + std::to_string(m(t, c)) +
             "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace nozzlelog::eval
