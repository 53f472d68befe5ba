#pragma once

#include <cstdint>

namespace riskstage {

/// SplitMix64 stream. The output sequence is fixed by the seed alone, which
/// keeps randomized algorithms reproducible across platforms.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1) built from the top 53 bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi]; multiply-shift reduction.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>((*this)());
    auto r = static_cast<unsigned __int128>((*this)()) * span;
    return lo + static_cast<std::int64_t>(r >> 64);
  }

  /// One flip of a coin showing heads with probability `p`.
  bool coin(double p) { return uniform01() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace riskstage
