#pragma once

#include <cstdint>
#include <string_view>

namespace fasep {

inline constexpr std::string_view kVersion = "0.1.0";

// FNV-1a; stamps experiment specs into output files.
inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace fasep
