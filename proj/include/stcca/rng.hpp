#pragma once

#include <cstdint>
#include <random>

namespace stcca {

// Derives an independent stream seed from a base seed and a salt (splitmix64
// finalizer). Used everywhere a sub-component needs its own stream so that
// results stay reproducible when components are reordered or parallelized.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

// Deterministic random source. Wraps mt19937_64 (fully specified by the
// standard) and maps to doubles explicitly, so sequences are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; caches the spare draw.
  double normal();

  // Uniform on {0, ..., n-1}, unbiased (rejection sampling).
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace stcca
