#pragma once

#include <cstdint>
#include <string_view>

namespace fsmguard {

// FNV-1a, 64-bit.
constexpr std::uint64_t fnv1a_64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fsmguard
