#include "nozzlelog/core/types.hpp"

#include <algorithm>
#include <unordered_set>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/text.hpp"

namespace nozzlelog {

int NozzleGrid::count(NfcState s) const {
  return static_cast<int>(std::count(states_.begin(), states_.end(), s));
}

Eigen::Array<int, kNumChannels, 1> NozzleGrid::channel_counts() const {
  Eigen::Array<int, kNumChannels, 1> c = Eigen::Array<int, kNumChannels, 1>::Zero();
  for (NfcState s : states_) {
    if (s != NfcState::Empty) c[static_cast<int>(s) - 1] += 1;
  }
  return c;
}

std::array<NozzleGrid::Plane, kNumChannels> NozzleGrid::channel_view() const {
  std::array<Plane, kNumChannels> planes;
  for (auto& p : planes) p.setZero();
  for (int r = 0; r < kGridRows; ++r) {
    for (int c = 0; c < kGridCols; ++c) {
      NfcState s = at(r, c);
      if (s != NfcState::Empty) planes[static_cast<int>(s) - 1](r, c) = 1;
    }
  }
  return planes;
}

const std::array<Label, kNumLabels>& all_labels() {
  static const std::array<Label, kNumLabels> order = {Label::Pattern1, Label::Pattern2,
                                                      Label::Pattern3, Label::Pattern4,
                                                      Label::Pattern5, Label::Other};
  return order;
}

const std::string& label_name(Label l) {
  static const std::array<std::string, kNumLabels> names = {
      "Pattern1", "Pattern2", "Pattern3", "Pattern4", "Pattern5", "Other"};
  return names[static_cast<std::size_t>(l)];
}

Label label_from_name(std::string_view name) {
  for (Label l : all_labels()) {
    if (label_name(l) == name) return l;
  }
  throw SchemaError("unknown label: '" + std::string(name) + "'");
}

LabelSet LabelSet::parse(std::string_view text) {
  LabelSet set;
  for (const auto& tok : split(text, '|')) {
    auto t = trim(tok);
    if (t.empty()) throw SchemaError("empty label in '" + std::string(text) + "'");
    set.add(label_from_name(t));
  }
  return set;
}

std::string LabelSet::to_string() const {
  std::string out;
  for (Label l : all_labels()) {
    if (!contains(l)) continue;
    if (!out.empty()) out += '|';
    out += label_name(l);
  }
  return out;
}

int LabelSet::size() const {
  int n = 0;
  for (Label l : all_labels()) n += contains(l) ? 1 : 0;
  return n;
}

std::vector<Label> LabelSet::labels() const {
  std::vector<Label> out;
  for (Label l : all_labels()) {
    if (contains(l)) out.push_back(l);
  }
  return out;
}

void LabelSet::validate_canonical(const std::string& context) const {
  if (empty()) throw SchemaError(context + ": empty label set");
  if (contains(Label::Other) && size() > 1)
    throw SchemaError(context + ": Other cannot co-occur with a Pattern label");
}

NozzleLog downsample_first_per_job(const std::vector<LogRecord>& records) {
  if (records.empty()) throw EmptyLogError("no records to downsample");
  NozzleLog out;
  out.head_id = records.front().head_id;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& rec : records) {
    if (seen.insert(rec.job_id).second) out.records.push_back(rec);
  }
  return out;
}

CountSeries to_count_series(const NozzleLog& log) {
  if (log.empty()) throw EmptyLogError("empty log for head " + log.head_id);
  CountSeries cs;
  cs.head_id = log.head_id;
  cs.counts.resize(kNumChannels, static_cast<Eigen::Index>(log.size()));
  for (Eigen::Index t = 0; t < cs.counts.cols(); ++t) {
    cs.counts.col(t) = log.records[static_cast<std::size_t>(t)].grid.channel_counts().matrix();
  }
  return cs;
}

}  // namespace nozzlelog
