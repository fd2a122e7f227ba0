#pragma once

#include <cstdint>
#include <string>

namespace hypergame {

// FNV-1a 64-bit. Content fingerprint for trace/certificate linkage; this is
// an integrity check, not a cryptographic commitment.
inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string fnv1a_hex(const std::string& data) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace hypergame
