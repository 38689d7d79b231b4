#pragma once

#include <cstdint>
#include <random>

namespace idsim {

// Deterministic random stream. Wraps std::mt19937_64 (whose output sequence
// is fixed by the standard) and derives uniforms by hand so results are
// bit-identical across platforms and standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be >= 1.
  std::uint64_t bounded(std::uint64_t n) {
    // Rejection from the top to avoid modulo bias.
    const std::uint64_t threshold = -n % n;
    for (;;) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  bool bernoulli(double p) { return uniform01() < p; }

  bool coin() { return (engine_() & 1u) != 0; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer; avalanche-quality mixing for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-replication stream seed derived from the master seed and the
// replication index. Documented contract: replication_stream_seed(s, i)
// is the value used to construct the Rng of replication i, independent of
// thread scheduling.
inline std::uint64_t replication_stream_seed(std::uint64_t master_seed,
                                             std::uint64_t replication_index) {
  return mix64(mix64(master_seed) ^ mix64(replication_index + 0x51ed2701ULL));
}

}  // namespace idsim
