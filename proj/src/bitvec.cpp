#include "fsmguard/bitvec.hpp"

#include <bit>
#include <stdexcept>

namespace fsmguard {

std::uint64_t width_mask(unsigned width) {
  if (width >= 64) {
    return ~std::uint64_t{0};
  }
  return (std::uint64_t{1} << width) - 1;
}

unsigned min_width_for(std::uint64_t v) {
  if (v == 0) {
    return 1;
  }
  return static_cast<unsigned>(64 - std::countl_zero(v));
}

std::string to_string(const BitVector& bv) {
  std::string bits;
  bits.reserve(bv.width);
  for (unsigned i = bv.width; i-- > 0;) {
    bits.push_back((bv.value >> i) & 1 ? '1' : '0');
  }
  return std::to_string(bv.width) + "'b" + bits;
}

unsigned hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.width != b.width) {
    throw std::invalid_argument("hamming_distance: width mismatch (" +
                                std::to_string(a.width) + " vs " +
                                std::to_string(b.width) + ")");
  }
  return static_cast<unsigned>(std::popcount(a.value ^ b.value));
}

}  // namespace fsmguard
