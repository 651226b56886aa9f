#pragma once

#include <cstdint>
#include <string>

namespace fsmguard {

// Fixed-width unsigned bit vector, 1..64 bits. value is always < 2^width.
struct BitVector {
  std::uint64_t value = 0;
  unsigned width = 1;

  friend bool operator==(const BitVector&, const BitVector&) = default;
};

// All-ones mask for a width in 1..64.
std::uint64_t width_mask(unsigned width);

// Smallest width that can represent v (1 for v == 0).
unsigned min_width_for(std::uint64_t v);

// Renders as a sized binary literal, e.g. "3'b101".
std::string to_string(const BitVector& bv);

// Count of differing bit positions. Throws std::invalid_argument when the
// widths differ.
unsigned hamming_distance(const BitVector& a, const BitVector& b);

}  // namespace fsmguard
