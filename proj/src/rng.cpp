#include "nneuler/rng.hpp"

#include <cmath>
#include <numbers>

namespace nneuler {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                    std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c,
                                 const Philox4x32::Key& k) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mulhilo(kMulA, c[0], lo0, hi0);
  mulhilo(kMulB, c[2], lo1, hi1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter counter, Key key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    counter = round(counter, key);
  }
  return counter;
}

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {}

void SeededStream::refill() {
  const Philox4x32::Counter ctr{
      static_cast<std::uint32_t>(block_index_),
      static_cast<std::uint32_t>(block_index_ >> 32),
      static_cast<std::uint32_t>(stream_id_),
      static_cast<std::uint32_t>(stream_id_ >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = Philox4x32::block(ctr, key);
  buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  buffered_ = 2;
  ++block_index_;
}

std::uint64_t SeededStream::next_u64() {
  if (buffered_ == 0) refill();
  return buffer_[2 - buffered_--];
}

double SeededStream::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace nneuler
