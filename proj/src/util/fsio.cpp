#include "nozzlelog/util/fsio.hpp"

#include <filesystem>
#include <fstream>
#include <system_error>

#include "nozzlelog/errors.hpp"

namespace nozzlelog {

void ensure_directories(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory: " + dir + " (" + ec.message() + ")");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

}  // namespace nozzlelog
