#pragma once

#include <cstdint>
#include <random>

namespace hpdp {

// Deterministic random source for benchmark data and property tests.
//
// Backed by std::mt19937_64, whose output sequence is pinned by the standard,
// so seeds reproduce bit-identical data on every platform. The integer-range
// mapping below is a plain modulo reduction implemented here on purpose:
// std::uniform_int_distribution is implementation-defined and would break
// cross-toolchain reproducibility of report artifacts.
class DetRng {
public:
  explicit DetRng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, n). n must be > 0.
  uint64_t below(uint64_t n) { return eng_() % n; }

  // Uniform in [lo, hi] inclusive.
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  int8_t int8() { return static_cast<int8_t>(range(-128, 127)); }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Derives a stream for case `index` that is independent of sibling cases.
  static uint64_t derive(uint64_t seed, uint64_t index) {
    return seed + index * 0x9E3779B97F4A7C15ull;
  }

private:
  std::mt19937_64 eng_;
};

} // namespace hpdp
