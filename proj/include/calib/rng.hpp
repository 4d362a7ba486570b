#pragma once

#include <cstdint>

namespace calib {

// SplitMix64 (Steele, Lea, Flood). Fixed arithmetic, so streams are identical
// on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform on {0, ..., n - 1}; n > 0.
  std::uint64_t below(std::uint64_t n) {
    // Rejecting the lowest 2^64 mod n values keeps the draw unbiased.
    std::uint64_t threshold = (std::uint64_t{0} - n) % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x < threshold);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

// Independent stream for item `index` under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 a(master ^ 0xD1B54A32D192ED03ULL);
  std::uint64_t base = a.next();
  SplitMix64 b(base + 0x9E3779B97F4A7C15ULL * (index + 1));
  return b.next();
}

}  // namespace calib
