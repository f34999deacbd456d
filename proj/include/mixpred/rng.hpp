#pragma once

#include <cstdint>
#include <span>

namespace mixpred {

/// Counter-derived pseudo-random stream (SplitMix64).
///
/// Streams are cheap value types. The stream for Monte Carlo run i is derived
/// from (master_seed, i), so results never depend on thread scheduling or on
/// how runs are distributed across workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Stream for run `stream_index` under `master_seed`.
  static Rng derive(std::uint64_t master_seed, std::uint64_t stream_index) {
    // decorrelate master and index before seeding
    return Rng(mix(master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// Draws an index from a probability vector by inverse CDF walk.
/// The final bucket absorbs floating-point shortfall of the partial sums.
inline int sample_index(std::span<const double> probs, double u) {
  double acc = 0.0;
  const int n = static_cast<int>(probs.size());
  for (int i = 0; i < n; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // u >= total mass (rounding): return the last symbol with positive mass
  for (int i = n - 1; i >= 0; --i) {
    if (probs[i] > 0.0) return i;
  }
  return n - 1;
}

}  // namespace mixpred
