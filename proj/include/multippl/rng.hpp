#pragma once

#include <cstdint>

namespace multippl {

/// SplitMix64 output mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based generator keyed by (seed, stream). Distinct streams are
/// independent for practical purposes, so run i of a batch simply uses
/// stream i and batches can be split across threads freely.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed ^ mix64(stream ^ 0xD1B54A32D192ED03ull))) {}

  std::uint64_t next() { return mix64(key_ + ++counter_ * 0x9E3779B97F4A7C15ull); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Derives a seed for trial t of a repeated experiment.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial) {
  return mix64(seed + mix64(trial + 0x632BE59BD9B4E019ull));
}

}  // namespace multippl
