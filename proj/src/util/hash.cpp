#include "nozzlelog/util/hash.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nozzlelog/errors.hpp"

namespace nozzlelog {

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return to_hex(fnv1a64(ss.str()));
}

}  // namespace nozzlelog
