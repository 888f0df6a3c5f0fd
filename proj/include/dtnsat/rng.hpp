#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dtnsat {

// Deterministic random stream. The engine is std::mt19937_64 (bit-exact by
// the standard); the mappings to real and integer ranges are done here because
// the std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, stream id).
  static Rng derive(std::uint64_t seed, std::uint64_t stream);
  static Rng derive(std::uint64_t seed, std::string_view label);

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    const double v = lo + (hi - lo) * uniform01();
    return v > hi ? hi : v;
  }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dtnsat
