#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>

namespace nozzlelog {

/// Flat `key = value` file: one pair per line, `#` starts a comment, keys may
/// be dotted (`params.Pattern1.onset`). Parsing is strict — duplicate keys and
/// garbage lines are ConfigErrors with a line number.
class Config {
public:
  static Config parse(std::istream& in);
  static Config load(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;  // ConfigError if missing
  std::string get_or(const std::string& key, std::string fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  double get_double(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

private:
  std::map<std::string, std::string> values_;
};

}  // namespace nozzlelog
