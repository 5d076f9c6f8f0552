#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace roughlab {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). Each
/// output block is a pure function of (counter, key), which makes every draw
/// addressable by index and independent of evaluation order.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

/// Standard normal variates addressed by (seed, stream, index).
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  /// The index-th variate of the stream.
  double at(std::uint64_t index) const;

  /// out[k] = at(first + k).
  void fill(std::span<double> out, std::uint64_t first = 0) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Uniform variate in the open interval (0, 1) addressed by (seed, stream, index).
double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// 64-bit seed for sub-experiment `index` of a run seeded with `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace roughlab
