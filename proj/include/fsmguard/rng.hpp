#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace fsmguard {

// mt19937_64 with hand-rolled bounded draws. uniform_int_distribution is not
// pinned across standard libraries; this is, so seeds reproduce everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform draw from [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  // Uniform draw from [lo, hi], inclusive.
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  bool coin() { return below(2) == 1; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fsmguard
