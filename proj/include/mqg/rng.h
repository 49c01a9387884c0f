#pragma once

#include <cmath>
#include <cstdint>

namespace mqg {

// Splittable counter-based generator (SplitMix64 core). Every source of
// randomness in a run is forked from one root seed, so results are a pure
// function of the config seed. fork() children are independent of how much
// the parent has been consumed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), counter_(0) {}

  uint64_t next_u64() { return mix(seed_ + (++counter_) * kGolden); }

  // Uniform in [0, 1).
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller.
  double next_normal() {
    double u1 = next_uniform();
    double u2 = next_uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Uniform integer in [0, n).
  uint64_t next_below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  Rng fork(uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + kGolden))); }

  uint64_t state() const { return counter_; }
  uint64_t seed() const { return seed_; }
  void restore(uint64_t seed, uint64_t counter) {
    seed_ = seed;
    counter_ = counter;
  }

 private:
  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr double kPi = 3.14159265358979323846;

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  uint64_t seed_;
  uint64_t counter_;
};

}  // namespace mqg
