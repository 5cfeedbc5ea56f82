#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nozzlelog {

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

/// Shortest decimal form that round-trips a double exactly (up to 17
/// significant digits). NaN renders as "NaN".
std::string format_double(double v);

/// Strict numeric parsers; throw Error with the offending token on failure.
double parse_double(std::string_view tok);
std::int64_t parse_int(std::string_view tok);
std::uint64_t parse_u64(std::string_view tok);

}  // namespace nozzlelog
