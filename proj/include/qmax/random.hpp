#pragma once

#include <array>
#include <cstdint>

namespace qmax {

/// Philox4x32-10 block function. `counter` is four 32-bit words, `key` two.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream: draw k is a pure function of (seed, stream, k),
/// so a consumer that stops early sees exactly the prefix of a longer run.
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double next_uniform();
  /// Exponential with the given rate (> 0).
  double next_exponential(double rate);
  /// Standard normal via Box-Muller; consumes two draws.
  double next_normal();

  /// Number of 64-bit draws consumed so far.
  std::uint64_t position() const { return position_; }
  void seek(std::uint64_t position);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  std::array<std::uint32_t, 4> block_{};
};

}  // namespace qmax
