#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mms {

/**
 * Seeded generator used everywhere randomness is needed.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++
 * standard. The std distributions are not portable across standard library
 * implementations, so bounded draws are done here from raw engine output
 * (rejection sampling for integers, 53 high bits for reals). Results are
 * therefore identical on every conforming platform.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /** Uniform integer in [0, bound). bound must be positive. */
  std::uint64_t below(std::uint64_t bound);

  /** Uniform integer in [low, high]. */
  std::int64_t between(std::int64_t low, std::int64_t high);

  /** Uniform real in [0, 1). */
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bit() { return (engine_() >> 63) != 0; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mms
