#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nozzlelog/core/types.hpp"
#include "nozzlelog/features/extract.hpp"

namespace nozzlelog::rules {

enum class Comparator { Lt, Le, Gt, Ge, In };

struct Predicate {
  std::string column;
  int column_index = -1;  ///< resolved at load time against the column list
  Comparator cmp = Comparator::Lt;
  double a = 0.0;  ///< bound, or range low for `in[a,b]`
  double b = 0.0;  ///< range high (In only)
};

struct Rule {
  int priority = 0;  ///< lower number = higher priority
  Label label = Label::Other;
  std::vector<Predicate> predicates;  ///< conjunction
};

enum class RuleMode { FirstMatch, AllMatch };

/// Parsed rule file. Rules are kept sorted by ascending priority, so
/// first-match output depends only on priorities, never on file order.
struct RuleSet {
  RuleMode mode = RuleMode::AllMatch;
  std::vector<Rule> rules;
  std::vector<std::string> columns;  ///< load-time column order
};

/// Line grammar: `priority | label | predicate && predicate ...` with
/// comparators `< <= > >= in[a,b]`; `#` starts a comment; an optional
/// `mode = first-match|all-match` directive (default all-match). Unknown
/// columns, duplicate priorities, malformed lines -> RuleConfigError.
RuleSet parse_rules(const std::string& text, const std::vector<std::string>& columns);
RuleSet load_rules_file(const std::string& path, const std::vector<std::string>& columns);

/// The embedded default rule file, byte-identical to data/default.rules.
const std::string& default_rules_text();
/// Embedded default rules resolved against the default feature catalog.
RuleSet default_ruleset();

/// NaN fails every comparator.
bool predicate_holds(const Predicate& p, double value);

/// first-match: singleton label of the lowest-priority-number satisfied
/// rule; all-match: union of satisfied labels (Other dropped when a pattern
/// is also present). No rule satisfied -> {Other}. Row is in load-time
/// column order.
LabelSet evaluate_rules(const RuleSet& rs, const Eigen::Ref<const Eigen::VectorXd>& row);

/// Per-row evaluation; fm.columns must equal the load-time columns.
std::vector<LabelSet> evaluate_rules(const RuleSet& rs, const features::FeatureMatrix& fm);

}  // namespace nozzlelog::rules
