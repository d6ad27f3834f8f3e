#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace zeroone {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is fixed by a 64-bit key and the upper half of the 128-bit
/// counter; the lower half advances. Distinct (key, stream) pairs give
/// statistically independent sequences, which is what lets every replicate
/// and worker draw from its own stream without coordination.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

/// SplitMix64 finalizer, used to fold stream identifiers into one word.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Convenience sampler over a Philox stream keyed by (seed, ids...).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream_ids) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal() noexcept;
  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
  /// Poisson(mean): inversion below 10, Hormann's PTRS transformed rejection above.
  std::uint64_t poisson(double mean) noexcept;

  Philox4x32& engine() noexcept { return engine_; }

 private:
  Philox4x32 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace zeroone
