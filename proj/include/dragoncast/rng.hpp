#pragma once

#include <cstdint>
#include <random>

namespace dragoncast {

// splitmix64 step, used to derive well-separated seeds for substreams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Random stream identifiers. Each concern draws from its own substream so
// that, e.g., lazy mobility leg generation never perturbs coefficient draws.
enum class RngStream : std::uint64_t {
  mobility = 1,
  loss = 2,
  coefficients = 3,
  jitter = 4,
  payload = 5,
  placement = 6,
};

// Deterministic RNG. The mt19937_64 engine output sequence is fixed by the
// standard; the adaptors below are hand-written (instead of the
// implementation-defined std::uniform_*_distribution) so that identical
// seeds give identical draws on any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  static Rng derive(std::uint64_t master, RngStream stream, std::uint64_t index = 0) {
    std::uint64_t s = mix64(master ^ mix64(static_cast<std::uint64_t>(stream)));
    s = mix64(s ^ mix64(index + 0x1234abcdull));
    return Rng(s);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased draw in [0, bound).
  std::uint32_t uniform_u32(std::uint32_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t b = bound;
    // Rejection sampling on the top of the 64-bit range.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r < limit) return static_cast<std::uint32_t>(r % b);
    }
  }

  std::uint8_t byte() { return static_cast<std::uint8_t>(next_u64() >> 56); }

  bool bit() { return (next_u64() >> 63) != 0; }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dragoncast
