#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nozzlelog/core/types.hpp"

namespace nozzlelog {

/// Log file format, one record per line:
///   head_id<TAB>job_id<TAB>t<TAB>RLE
/// RLE is a comma-separated list of `<S>:<len>` runs over the row-major cell
/// order, S in {E,1,2,3,4,5} (E = Empty, k = NFk); run lengths sum to 512.
std::string encode_grid_rle(const NozzleGrid& grid);
NozzleGrid decode_grid_rle(std::string_view rle, std::size_t line_no);

void encode_log(const NozzleLog& log, std::ostream& out);
std::string encode_log(const NozzleLog& log);

/// Parses a whole log file, possibly holding many heads. Records of one head
/// must be contiguous and ordered by t. Throws ParseError (with line number)
/// or SchemaError.
std::vector<NozzleLog> decode_logs(std::istream& in);
NozzleLog decode_log(const std::string& bytes);

std::vector<NozzleLog> read_log_file(const std::string& path);
void write_log_file(const std::vector<NozzleLog>& logs, const std::string& path);

/// Manifest: CSV with header `head_id,labels`; labels are `|`-separated.
using Manifest = std::map<std::string, LabelSet>;

Manifest read_manifest(const std::string& path);
void write_manifest(const Manifest& manifest, const std::string& path);

}  // namespace nozzlelog
