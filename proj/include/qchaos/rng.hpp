#pragma once
/** \file
 * Reproducible random streams addressed by (master seed, stream index).
 */

#include <cstdint>
#include <limits>

namespace qchaos {

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/**
 * Counter-based 64-bit generator: output k is mix64(key + (k+1) * golden gamma).
 *
 * Satisfies UniformRandomBitGenerator, so it plugs into the <random> distributions.
 */
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t key) noexcept : state_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/**
 * Address of an independent random stream.
 *
 * Identical (master_seed, stream_index) pairs always yield identical sequences,
 * whichever thread or order they are consumed in.
 */
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  SplitMix64 engine() const noexcept;

  /// Stream number `k` nested under this one.
  RngStream child(std::uint64_t k) const noexcept;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

}  // namespace qchaos
