#pragma once

#include <string>

namespace nozzlelog {

/// create_directories that reports failure as Error (not filesystem_error).
void ensure_directories(const std::string& dir);

/// Writes content byte-for-byte; throws Error when the path is unwritable.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nozzlelog
