#include "nozzlelog/util/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "nozzlelog/errors.hpp"

namespace nozzlelog {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[40];
  // Find the shortest precision that round-trips; keeps files compact and
  // byte-stable while staying lossless.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(std::string_view tok) {
  tok = trim(tok);
  if (tok == "NaN" || tok == "nan") return std::nan("");
  std::string s(tok);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error("bad number: '" + s + "'");
  return v;
}

std::int64_t parse_int(std::string_view tok) {
  tok = trim(tok);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw Error("bad integer: '" + std::string(tok) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view tok) {
  tok = trim(tok);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw Error("bad unsigned integer: '" + std::string(tok) + "'");
  return v;
}

}  // namespace nozzlelog
