#include "typlab/rng.hpp"

namespace typlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

std::array<std::uint64_t, 2> block(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto out = philox4x32(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
          (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t RngStream::value_at(std::uint64_t seed, std::uint64_t stream_id,
                                  std::uint64_t counter) {
  return block(seed, stream_id, counter >> 1)[counter & 1];
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t b = counter_ >> 1;
  if (b != cached_block_) {
    cache_ = block(seed_, stream_, b);
    cached_block_ = b;
  }
  return cache_[counter_++ & 1];
}

double RngStream::uniform() { return to_unit_interval(next_u64()); }

std::uint64_t RngStream::below(std::uint64_t bound) {
  // Rejection on the top of the range keeps the result exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

RngStream RngStream::split() {
  const std::uint64_t child_seed = next_u64();
  return RngStream(child_seed, stream_);
}

}  // namespace typlab
