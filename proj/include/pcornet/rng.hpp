#pragma once

#include <cstdint>
#include <vector>

namespace pcornet {

/// Deterministic xoshiro256++ generator. All randomness in the library flows
/// through this type so that results are identical across platforms and
/// thread counts. Replicate k of any resampling scheme draws from
/// Rng::stream(master_seed, k), which makes every replicate a pure function
/// of (master_seed, k) regardless of execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream derived from a master seed and a stream index.
  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double next_double();

  /// Uniform on (0, 1), safe as input to a quantile function.
  double next_open_double();

  /// Uniform on [lo, hi).
  double next_uniform(double lo, double hi);

  /// Standard normal via inverse-CDF of next_open_double().
  double next_normal();

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n);

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

/// SplitMix64 step, exposed for seed mixing.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stateless mix of a seed and a stream index into a fresh seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace pcornet
