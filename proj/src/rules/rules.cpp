#include "nozzlelog/rules/rules.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/features/catalog.hpp"
#include "nozzlelog/util/text.hpp"

namespace nozzlelog::rules {

namespace {

[[noreturn]] void fail(std::size_t lineno, const std::string& what) {
  throw RuleConfigError("line " + std::to_string(lineno) + ": " + what);
}

std::vector<std::string> whitespace_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Conjunction terms separated by literal "&&".
std::vector<std::string> split_on_and(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find("&&", start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 2;
  }
}

double parse_constant(const std::string& tok, std::size_t lineno) {
  double v = 0.0;
  try {
    v = parse_double(tok);
  } catch (const Error&) {
    fail(lineno, "bad numeric constant '" + tok + "'");
  }
  if (!std::isfinite(v)) fail(lineno, "non-finite constant '" + tok + "'");
  return v;
}

Predicate parse_predicate(std::string_view term, const std::map<std::string, int>& col_index,
                          std::size_t lineno) {
  const auto tokens = whitespace_tokens(term);
  if (tokens.size() != 2 && tokens.size() != 3) {
    fail(lineno, "predicate must be '<column> <cmp> <value>' or '<column> in[a,b]'");
  }
  Predicate p;
  p.column = tokens[0];
  const auto it = col_index.find(p.column);
  if (it == col_index.end()) fail(lineno, "unknown feature column '" + p.column + "'");
  p.column_index = it->second;
  if (tokens.size() == 2) {
    const std::string& tok = tokens[1];
    if (tok.size() < 6 || tok.rfind("in[", 0) != 0 || tok.back() != ']') {
      fail(lineno, "expected range comparator 'in[a,b]', got '" + tok + "'");
    }
    const auto parts = split(tok.substr(3, tok.size() - 4), ',');
    if (parts.size() != 2) fail(lineno, "range needs exactly two bounds");
    p.cmp = Comparator::In;
    p.a = parse_constant(std::string(trim(parts[0])), lineno);
    p.b = parse_constant(std::string(trim(parts[1])), lineno);
    if (p.a > p.b) fail(lineno, "empty range: low bound exceeds high bound");
    return p;
  }
  const std::string& cmp = tokens[1];
  if (cmp == "<") p.cmp = Comparator::Lt;
  else if (cmp == "<=") p.cmp = Comparator::Le;
  else if (cmp == ">") p.cmp = Comparator::Gt;
  else if (cmp == ">=") p.cmp = Comparator::Ge;
  else fail(lineno, "unknown comparator '" + cmp + "'");
  p.a = parse_constant(tokens[2], lineno);
  return p;
}

}  // namespace

RuleSet parse_rules(const std::string& text, const std::vector<std::string>& columns) {
  std::map<std::string, int> col_index;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    col_index.emplace(columns[i], static_cast<int>(i));
  }
  RuleSet rs;
  rs.columns = columns;
  bool mode_seen = false;
  std::set<int> priorities;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.find('|') == std::string_view::npos) {
      const auto kv = split(std::string(line), '=');
      if (kv.size() != 2 || trim(kv[0]) != "mode") {
        fail(lineno, "expected a rule or 'mode = first-match|all-match'");
      }
      if (mode_seen) fail(lineno, "duplicate mode directive");
      mode_seen = true;
      const auto value = trim(kv[1]);
      if (value == "first-match") rs.mode = RuleMode::FirstMatch;
      else if (value == "all-match") rs.mode = RuleMode::AllMatch;
      else fail(lineno, "unknown mode '" + std::string(value) + "'");
      continue;
    }
    const auto fields = split(std::string(line), '|');
    if (fields.size() != 3) fail(lineno, "rule needs 'priority | label | predicates'");
    Rule rule;
    try {
      rule.priority = static_cast<int>(parse_int(trim(fields[0])));
    } catch (const Error&) {
      fail(lineno, "bad priority '" + std::string(trim(fields[0])) + "'");
    }
    if (!priorities.insert(rule.priority).second) {
      fail(lineno, "duplicate priority " + std::to_string(rule.priority));
    }
    try {
      rule.label = label_from_name(std::string(trim(fields[1])));
    } catch (const Error&) {
      fail(lineno, "unknown label '" + std::string(trim(fields[1])) + "'");
    }
    for (const auto& term : split_on_and(fields[2])) {
      const auto trimmed = trim(term);
      if (trimmed.empty()) fail(lineno, "empty predicate in conjunction");
      rule.predicates.push_back(parse_predicate(trimmed, col_index, lineno));
    }
    rs.rules.push_back(std::move(rule));
  }
  if (rs.rules.empty()) throw RuleConfigError("rule set has no rules");
  std::sort(rs.rules.begin(), rs.rules.end(),
            [](const Rule& a, const Rule& b) { return a.priority < b.priority; });
  return rs;
}

RuleSet load_rules_file(const std::string& path, const std::vector<std::string>& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open rule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str(), columns);
}

const std::string& default_rules_text() {
  // Calibrated against the default synthetic benchmark; each line targets
  // one failure archetype. Keep byte-identical to data/default.rules.
  static const std::string text =
      R"(# Default baseline rules. One line per failure pattern; all-match mode can
# emit dual labels such as {Pattern1, Pattern2}.
mode = all-match

10 | Pattern4 | spatial__nf4_edge_run >= 10
20 | Pattern2 | ch1__max_step >= 30
30 | Pattern1 | ch0__final_value >= 20 && ch0__linear_trend__slope > 0.05
40 | Pattern3 | ch2__first_nonzero_fraction >= 0.8 && ch2__final_value >= 3
50 | Pattern5 | ch4__final_value >= 6 && ch2__final_value >= 3 && ch1__final_value < 1 && ch0__max_step <= 5 && ch4__max_step <= 5
)";
  return text;
}

RuleSet default_ruleset() {
  return parse_rules(default_rules_text(),
                     features::FeatureCatalog::default_catalog().column_names());
}

bool predicate_holds(const Predicate& p, double value) {
  if (std::isnan(value)) return false;
  switch (p.cmp) {
    case Comparator::Lt: return value < p.a;
    case Comparator::Le: return value <= p.a;
    case Comparator::Gt: return value > p.a;
    case Comparator::Ge: return value >= p.a;
    case Comparator::In: return p.a <= value && value <= p.b;
  }
  throw DomainError("predicate_holds: invalid comparator");
}

LabelSet evaluate_rules(const RuleSet& rs, const Eigen::Ref<const Eigen::VectorXd>& row) {
  if (row.size() != static_cast<Eigen::Index>(rs.columns.size())) {
    throw SchemaError("rules: row length differs from load-time columns");
  }
  LabelSet out;
  for (const Rule& rule : rs.rules) {
    bool satisfied = true;
    for (const Predicate& p : rule.predicates) {
      if (!predicate_holds(p, row[p.column_index])) {
        satisfied = false;
        break;
      }
    }
    if (!satisfied) continue;
    if (rs.mode == RuleMode::FirstMatch) {
      out.add(rule.label);
      return out;
    }
    out.add(rule.label);
  }
  if (out.empty()) out.add(Label::Other);
  if (out.contains(Label::Other) && out.size() > 1) out.remove(Label::Other);
  return out;
}

std::vector<LabelSet> evaluate_rules(const RuleSet& rs, const features::FeatureMatrix& fm) {
  if (fm.columns != rs.columns) {
    throw SchemaError("rules: feature matrix columns differ from load-time columns");
  }
  std::vector<LabelSet> out;
  out.reserve(static_cast<std::size_t>(fm.rows()));
  for (Eigen::Index i = 0; i < fm.rows(); ++i) {
    out.push_back(evaluate_rules(rs, fm.values.row(i).transpose()));
  }
  return out;
}

}  // namespace nozzlelog::rules
