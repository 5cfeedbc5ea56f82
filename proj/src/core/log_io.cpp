#include "nozzlelog/core/log_io.hpp"

#include <fstream>
#include <sstream>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/text.hpp"

namespace nozzlelog {

namespace {

char state_symbol(NfcState s) {
  switch (s) {
    case NfcState::Empty: return 'E';
    case NfcState::NF1: return '1';
    case NfcState::NF2: return '2';
    case NfcState::NF3: return '3';
    case NfcState::NF4: return '4';
    case NfcState::NF5: return '5';
  }
  return '?';
}

NfcState symbol_state(char c, std::size_t line_no) {
  switch (c) {
    case 'E': return NfcState::Empty;
    case '1': return NfcState::NF1;
    case '2': return NfcState::NF2;
    case '3': return NfcState::NF3;
    case '4': return NfcState::NF4;
    case '5': return NfcState::NF5;
    default: throw ParseError(std::string("unknown state symbol '") + c + "'", line_no);
  }
}

}  // namespace

std::string encode_grid_rle(const NozzleGrid& grid) {
  std::string out;
  int i = 0;
  while (i < kGridCells) {
    NfcState s = grid.cell(i);
    int j = i + 1;
    while (j < kGridCells && grid.cell(j) == s) ++j;
    if (!out.empty()) out += ',';
    out += state_symbol(s);
    out += ':';
    out += std::to_string(j - i);
    i = j;
  }
  return out;
}

NozzleGrid decode_grid_rle(std::string_view rle, std::size_t line_no) {
  NozzleGrid grid;
  int pos = 0;
  for (const auto& run : split(rle, ',')) {
    auto colon = run.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= run.size())
      throw ParseError("bad RLE run '" + run + "'", line_no);
    if (colon != 1) throw ParseError("bad RLE state in '" + run + "'", line_no);
    NfcState s = symbol_state(run[0], line_no);
    long len = 0;
    try {
      len = parse_int(run.substr(colon + 1));
    } catch (const Error&) {
      throw ParseError("bad RLE length in '" + run + "'", line_no);
    }
    if (len <= 0) throw ParseError("non-positive RLE length in '" + run + "'", line_no);
    if (pos + len > kGridCells)
      throw SchemaError("RLE runs exceed " + std::to_string(kGridCells) + " cells at line " +
                        std::to_string(line_no));
    for (long k = 0; k < len; ++k) grid.set_cell(pos++, s);
  }
  if (pos != kGridCells)
    throw SchemaError("RLE runs sum to " + std::to_string(pos) + ", expected " +
                      std::to_string(kGridCells) + " at line " + std::to_string(line_no));
  return grid;
}

void encode_log(const NozzleLog& log, std::ostream& out) {
  for (const auto& rec : log.records) {
    out << rec.head_id << '\t' << rec.job_id << '\t' << rec.t << '\t'
        << encode_grid_rle(rec.grid) << '\n';
  }
}

std::string encode_log(const NozzleLog& log) {
  std::ostringstream ss;
  encode_log(log, ss);
  return ss.str();
}

std::vector<NozzleLog> decode_logs(std::istream& in) {
  std::vector<NozzleLog> logs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4)
      throw ParseError("expected 4 tab-separated fields, got " + std::to_string(fields.size()),
                       line_no);
    LogRecord rec;
    rec.head_id = fields[0];
    if (rec.head_id.empty()) throw ParseError("empty head_id", line_no);
    try {
      rec.job_id = parse_u64(fields[1]);
      rec.t = parse_u64(fields[2]);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
    rec.grid = decode_grid_rle(fields[3], line_no);

    if (logs.empty() || logs.back().head_id != rec.head_id) {
      for (const auto& prev : logs) {
        if (prev.head_id == rec.head_id)
          throw SchemaError("records for head " + rec.head_id + " are not contiguous at line " +
                            std::to_string(line_no));
      }
      logs.push_back(NozzleLog{rec.head_id, {}});
    } else if (rec.t <= logs.back().records.back().t) {
      throw SchemaError("time-step not strictly increasing for head " + rec.head_id +
                        " at line " + std::to_string(line_no));
    }
    logs.back().records.push_back(std::move(rec));
  }
  return logs;
}

NozzleLog decode_log(const std::string& bytes) {
  std::istringstream ss(bytes);
  auto logs = decode_logs(ss);
  if (logs.empty()) throw EmptyLogError("log file holds no records");
  if (logs.size() != 1) throw SchemaError("expected a single head, got " +
                                          std::to_string(logs.size()));
  return std::move(logs.front());
}

std::vector<NozzleLog> read_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open log file: " + path);
  return decode_logs(in);
}

void write_log_file(const std::vector<NozzleLog>& logs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write log file: " + path);
  for (const auto& log : logs) encode_log(log, out);
  if (!out) throw Error("write failed: " + path);
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest: " + path);
  Manifest manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line_no == 1) {
      if (line != "head_id,labels")
        throw ParseError("manifest header must be 'head_id,labels'", line_no);
      continue;
    }
    auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError("expected 'head_id,labels'", line_no);
    LabelSet labels;
    try {
      labels = LabelSet::parse(fields[1]);
    } catch (const SchemaError& e) {
      throw ParseError(e.what(), line_no);
    }
    labels.validate_canonical("head " + fields[0]);
    if (!manifest.emplace(fields[0], labels).second)
      throw SchemaError("duplicate head_id in manifest: " + fields[0]);
  }
  return manifest;
}

void write_manifest(const Manifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest: " + path);
  out << "head_id,labels\n";
  for (const auto& [head, labels] : manifest) out << head << ',' << labels.to_string() << '\n';
  if (!out) throw Error("write failed: " + path);
}

}  // namespace nozzlelog
