#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace forge {

// 64-bit FNV-1a, printed as 16 hex digits. Used to name instances in
// certificates; not a cryptographic commitment.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace forge
