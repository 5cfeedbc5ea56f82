#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nozzlelog {

/// Per-nozzle failure state. Empty means the nozzle jets correctly.
enum class NfcState : std::uint8_t { Empty = 0, NF1, NF2, NF3, NF4, NF5 };

constexpr int kGridRows = 4;
constexpr int kGridCols = 128;
constexpr int kGridCells = kGridRows * kGridCols;
constexpr int kNumChannels = 5;  // NF1..NF5

/// Terminal or per-timestep snapshot of the 4x128 nozzle array. Cells are
/// stored row-major (row 0 col 0 .. row 3 col 127), the order fixed for
/// serialization and spatial features.
class NozzleGrid {
public:
  NozzleGrid() { states_.fill(NfcState::Empty); }

  NfcState at(int row, int col) const { return states_[idx(row, col)]; }
  void set(int row, int col, NfcState s) { states_[idx(row, col)] = s; }

  NfcState cell(int i) const { return states_[static_cast<std::size_t>(i)]; }
  void set_cell(int i, NfcState s) { states_[static_cast<std::size_t>(i)] = s; }

  /// Number of cells in the given state.
  int count(NfcState s) const;
  /// Counts for NF1..NF5 as a 5-vector.
  Eigen::Array<int, kNumChannels, 1> channel_counts() const;
  int failed_total() const { return kGridCells - count(NfcState::Empty); }

  /// Binary plane per channel: plane k cell is 1 iff the state is NF(k+1).
  using Plane = Eigen::Matrix<std::uint8_t, kGridRows, kGridCols>;
  std::array<Plane, kNumChannels> channel_view() const;

  bool operator==(const NozzleGrid& o) const { return states_ == o.states_; }

private:
  static std::size_t idx(int row, int col) {
    return static_cast<std::size_t>(row) * kGridCols + static_cast<std::size_t>(col);
  }
  std::array<NfcState, kGridCells> states_;
};

struct LogRecord {
  std::string head_id;
  std::uint64_t job_id = 0;
  std::uint64_t t = 0;  // abstract monotone time-step index
  NozzleGrid grid;

  bool operator==(const LogRecord& o) const {
    return head_id == o.head_id && job_id == o.job_id && t == o.t && grid == o.grid;
  }
};

/// Ordered sequence of log records for one printhead. t strictly increasing.
struct NozzleLog {
  std::string head_id;
  std::vector<LogRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
  const NozzleGrid& terminal_grid() const { return records.back().grid; }

  bool operator==(const NozzleLog& o) const {
    return head_id == o.head_id && records == o.records;
  }
};

/// Per-channel failed-nozzle counts over time. Row k holds the NF(k+1) counts.
struct CountSeries {
  std::string head_id;
  Eigen::Matrix<int, kNumChannels, Eigen::Dynamic> counts;

  Eigen::Index length() const { return counts.cols(); }
  /// One channel as a double series, ready for the feature kernels.
  Eigen::ArrayXd channel(int k) const { return counts.row(k).cast<double>().transpose(); }
  int total(Eigen::Index t) const { return counts.col(t).sum(); }
};

// ---------------------------------------------------------------------------
// Labels

enum class Label : std::uint8_t {
  Pattern1 = 0,
  Pattern2,
  Pattern3,
  Pattern4,
  Pattern5,
  Other,
};

constexpr int kNumLabels = 6;

/// Canonical class order: Pattern1..Pattern5, Other.
const std::array<Label, kNumLabels>& all_labels();
const std::string& label_name(Label l);
Label label_from_name(std::string_view name);

/// Small set of class labels. Ground-truth sets are canonical: non-empty and
/// Other never alongside a Pattern (enforced by validate_canonical, called by
/// the manifest reader and the generator).
class LabelSet {
public:
  LabelSet() = default;
  explicit LabelSet(Label l) { add(l); }

  static LabelSet parse(std::string_view text);  // e.g. "Pattern1|Pattern2"
  std::string to_string() const;

  void add(Label l) { bits_ |= bit(l); }
  void remove(Label l) { bits_ &= static_cast<std::uint8_t>(~bit(l)); }
  bool contains(Label l) const { return (bits_ & bit(l)) != 0; }
  bool empty() const { return bits_ == 0; }
  int size() const;
  std::vector<Label> labels() const;  // in canonical class order

  /// Throws SchemaError if empty or if Other co-occurs with a Pattern.
  void validate_canonical(const std::string& context) const;

  bool operator==(const LabelSet& o) const { return bits_ == o.bits_; }
  bool operator!=(const LabelSet& o) const { return bits_ != o.bits_; }
  bool operator<(const LabelSet& o) const { return bits_ < o.bits_; }

private:
  static std::uint8_t bit(Label l) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(l));
  }
  std::uint8_t bits_ = 0;
};

// ---------------------------------------------------------------------------
// Core transforms

/// Keeps only the first record (smallest t) of every print job, preserving
/// order. Input must be ordered by t. Throws EmptyLogError on empty input.
NozzleLog downsample_first_per_job(const std::vector<LogRecord>& records);

/// Per-step counts of every NFC type. Throws EmptyLogError on empty log.
CountSeries to_count_series(const NozzleLog& log);

}  // namespace nozzlelog
