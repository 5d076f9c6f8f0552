#include "roughlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace roughlab {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Stream tags keep derived seeds and uniforms apart from Gaussian streams.
constexpr std::uint32_t kUniformTag = 0x554e4946u;
constexpr std::uint32_t kSeedTag = 0x53454544u;

Philox4x32::Key key_of(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

double unit_open(std::uint64_t bits) {
  // 53 random bits, shifted by half an ulp so 0 and 1 are excluded.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t join(std::uint32_t lo, std::uint32_t hi) {
  return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

double GaussianStream::at(std::uint64_t index) const {
  // One Philox block yields two uniforms and hence one Box-Muller pair.
  const std::uint64_t pair = index >> 1;
  const auto out = Philox4x32::block({static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(pair >> 32),
                                      static_cast<std::uint32_t>(stream_),
                                      static_cast<std::uint32_t>(stream_ >> 32)},
                                     key_of(seed_));
  const double u1 = unit_open(join(out[0], out[1]));
  const double u2 = unit_open(join(out[2], out[3]));
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return (index & 1) ? r * std::sin(theta) : r * std::cos(theta);
}

void GaussianStream::fill(std::span<double> out, std::uint64_t first) const {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(first + k);
}

double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto out = Philox4x32::block({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                      static_cast<std::uint32_t>(stream), kUniformTag},
                                     key_of(seed));
  return unit_open(join(out[0], out[1]));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  const auto out = Philox4x32::block({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                      0u, kSeedTag},
                                     key_of(master));
  return join(out[0], out[1]);
}

}  // namespace roughlab
