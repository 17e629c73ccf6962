#pragma once

// Small generators for property tests. Fixed seeds keep failures reproducible.

#include <cmath>
#include <cstdint>
#include <random>

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * (double(eng_() >> 11) * 0x1.0p-53); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return lo + int(eng_() % std::uint64_t(hi - lo + 1)); }

 private:
  std::mt19937_64 eng_;
};

inline constexpr int kCases = 200;

}  // namespace gen
