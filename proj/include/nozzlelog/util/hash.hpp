#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nozzlelog {

/// FNV-1a 64-bit. Stable across platforms; used for catalog/dataset digests
/// embedded in reports, not for security.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t v);

/// Digest of a whole file's bytes, as 16 hex chars. Throws Error if unreadable.
std::string file_digest(const std::string& path);

}  // namespace nozzlelog
