#include "nozzlelog/features/extract.hpp"

#include <fstream>
#include <sstream>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/hash.hpp"
#include "nozzlelog/util/parallel.hpp"
#include "nozzlelog/util/text.hpp"

namespace nozzlelog::features {

int FeatureMatrix::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int FeatureMatrix::row_index(const std::string& head_id) const {
  for (std::size_t i = 0; i < head_ids.size(); ++i) {
    if (head_ids[i] == head_id) return static_cast<int>(i);
  }
  return -1;
}

std::string FeatureMatrix::header_digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& c : columns) {
    h = fnv1a64(c, h);
    h = fnv1a64(",", h);
  }
  return to_hex(h);
}

namespace {

void write_matrix_stream(const FeatureMatrix& m, std::ostream& out) {
  out << "head_id";
  for (const auto& c : m.columns) out << ',' << c;
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << m.head_ids[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << ',' << format_double(m.values(r, c));
    out << '\n';
  }
}

}  // namespace

std::string FeatureMatrix::content_digest() const {
  std::ostringstream ss;
  write_matrix_stream(*this, ss);
  return to_hex(fnv1a64(ss.str()));
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<Eigen::Index>& idx) const {
  FeatureMatrix out;
  out.columns = columns;
  out.head_ids.reserve(idx.size());
  out.values.resize(static_cast<Eigen::Index>(idx.size()), values.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.head_ids.push_back(head_ids[static_cast<std::size_t>(idx[i])]);
    out.values.row(static_cast<Eigen::Index>(i)) = values.row(idx[i]);
  }
  return out;
}

FeatureMatrix extract_matrix(const std::vector<NozzleLog>& logs, const FeatureCatalog& catalog,
                             unsigned workers) {
  if (logs.empty()) throw EmptyLogError("no logs to extract features from");
  FeatureMatrix m;
  m.columns = catalog.column_names();
  m.head_ids.resize(logs.size());
  m.values.resize(static_cast<Eigen::Index>(logs.size()),
                  static_cast<Eigen::Index>(catalog.size()));

  parallel_for(logs.size(), workers, [&](std::size_t i) {
    if (logs[i].empty()) throw EmptyLogError("empty log for head " + logs[i].head_id);
    m.head_ids[i] = logs[i].head_id;
    // One sample per print job: re-poll records within a job carry no new
    // information and would distort the per-step series.
    const NozzleLog log = downsample_first_per_job(logs[i].records);
    const CountSeries cs = to_count_series(log);
    std::array<Eigen::ArrayXd, kNumChannels> channels;
    for (int k = 0; k < kNumChannels; ++k) channels[k] = cs.channel(k);
    const NozzleGrid& terminal = log.terminal_grid();

    const auto row = static_cast<Eigen::Index>(i);
    Eigen::Index col = 0;
    for (const auto& entry : catalog.entries()) {
      const double v = entry.channel >= 0 ? entry.series_fn(channels[entry.channel])
                                          : entry.grid_fn(terminal);
      m.values(row, col++) = v;
    }
  });
  return m;
}

void write_feature_matrix(const FeatureMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write feature matrix: " + path);
  write_matrix_stream(m, out);
  if (!out) throw Error("write failed: " + path);
}

FeatureMatrix read_feature_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open feature matrix: " + path);
  FeatureMatrix m;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    if (line_no == 1) {
      if (fields.empty() || fields[0] != "head_id")
        throw ParseError("feature matrix header must start with 'head_id'", line_no);
      m.columns.assign(fields.begin() + 1, fields.end());
      continue;
    }
    if (fields.size() != m.columns.size() + 1)
      throw ParseError("expected " + std::to_string(m.columns.size() + 1) + " fields, got " +
                       std::to_string(fields.size()), line_no);
    m.head_ids.push_back(fields[0]);
    std::vector<double> row;
    row.reserve(m.columns.size());
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        row.push_back(parse_double(fields[i]));
      } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
      }
    }
    rows.push_back(std::move(row));
  }
  if (m.columns.empty()) throw SchemaError("feature matrix has no header: " + path);
  m.values.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

}  // namespace nozzlelog::features
