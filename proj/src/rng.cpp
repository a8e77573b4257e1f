#include "qchaos/rng.hpp"

namespace qchaos {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SplitMix64 RngStream::engine() const noexcept {
  return SplitMix64(mix64(master_seed ^ 0x6A09E667F3BCC908ULL) ^ mix64(stream_index + 0xBB67AE8584CAA73BULL));
}

RngStream RngStream::child(std::uint64_t k) const noexcept {
  return RngStream{master_seed, mix64(stream_index * 0x9E3779B97F4A7C15ULL + k + 1)};
}

}  // namespace qchaos
