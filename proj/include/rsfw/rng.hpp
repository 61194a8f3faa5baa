#pragma once

#include <cstdint>
#include <random>

namespace rsfw {

/// Mixes a base seed with a stream index so that Monte Carlo batches can be
/// split across workers and still reproduce bit-for-bit.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Thin wrapper over mt19937_64 with a platform-independent real draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

  /// Exponential variate with the given rate.
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

}  // namespace rsfw
