#pragma once

#include <array>
#include <cstdint>

namespace typlab {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the output
/// depends only on the counter and key words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// The n-th 64-bit output is a pure function of (seed, stream_id, n), so
/// streams can be split across threads by stream id and any position can be
/// accessed directly with value_at(). All derived variates (uniform doubles,
/// Bernoulli draws, bounded integers) are computed with integer arithmetic
/// and are bit-identical across platforms.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter = 0)
      : seed_(seed), stream_(stream_id), counter_(counter) {}

  static std::uint64_t value_at(std::uint64_t seed, std::uint64_t stream_id,
                                std::uint64_t counter);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// A new stream keyed off this one; consumes one output.
  RngStream split();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  std::array<std::uint64_t, 2> cache_{};
};

inline double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace typlab
