#ifndef NNEULER_RNG_HPP
#define NNEULER_RNG_HPP

#include <array>
#include <cstdint>

namespace nneuler {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// Output is a pure function of (counter, key), so any sub-stream can be
// positioned without generating its predecessors.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

/// Independent random stream identified by (seed, stream_id).
///
/// The seed is the Philox key; the stream id occupies the upper half of the
/// counter and the block index the lower half, so streams never overlap.
/// One stream is owned by exactly one worker at a time.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double next_uniform();

  /// Standard normal via Box-Muller; the second variate is cached.
  double next_normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nneuler

#endif  // NNEULER_RNG_HPP
