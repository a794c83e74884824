// Copyright 2026 The occam-icl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OCCAM_NUMERICS_RNG_HPP_
#define OCCAM_NUMERICS_RNG_HPP_

/// @file
/// Counter-based pseudo-random numbers (Philox4x32-10) with 64-bit streams.
///
/// A generator is fully described by (seed, stream, position). Two generators
/// constructed from the same (seed, stream) emit identical sequences on every
/// platform, and different streams never share state, so trial `i` of an
/// experiment can be given stream `i` and run on any worker.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>

#include "occam/numerics/errors.hpp"

namespace occam {

namespace philox_detail {

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

using Block = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

constexpr void round(Block& ctr, const Key& key) noexcept {
  const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace philox_detail

/// The Philox4x32 bijection with 10 rounds.
constexpr philox_detail::Block philox4x32_10(philox_detail::Block ctr,
                                             philox_detail::Key key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += philox_detail::kWeyl0;
      key[1] += philox_detail::kWeyl1;
    }
    philox_detail::round(ctr, key);
  }
  return ctr;
}

/// Seeded, splittable random source.
///
/// Satisfies std::uniform_random_bit_generator, but experiment code should
/// use the member samplers: their outputs are specified here and therefore do
/// not depend on the standard library implementation.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// A fresh generator on another stream of the same seed.
  Rng fork(std::uint64_t stream) const noexcept { return Rng(seed_, stream); }

  /// Generator `index` of a family keyed by this (seed, stream) pair; never
  /// shares a key with plain streams of the same seed.
  Rng child(std::uint64_t index) const noexcept {
    return Rng(splitmix64(seed_ ^ splitmix64(stream_ ^ 0xD1B54A32D192ED03ull)), index);
  }

  static constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::uint32_t next_u32() noexcept {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  result_type operator()() noexcept { return next_u64(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  double uniform_pos() noexcept { return 1.0 - uniform(); }

  /// Uniform integer on [0, n); n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw DomainError("uniform_int: empty range");
    // Lemire's multiply-shift with rejection of the biased low band.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const unsigned __int128 m =
          static_cast<unsigned __int128>(next_u64()) * n;
      if (static_cast<std::uint64_t>(m) >= threshold) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (spare_normal_) {
      const double z = *spare_normal_;
      spare_normal_.reset();
      return z;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

  /// Natural log of a Gamma(shape, 1) variate (Marsaglia-Tsang).
  ///
  /// Returned in log space so tiny shapes do not underflow to zero.
  double log_gamma_variate(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
      throw DomainError("gamma variate: shape must be positive and finite");
    }
    if (shape < 1.0) {
      // G(a) = G(a + 1) * U^(1/a)
      const double boost = std::log(uniform_pos()) / shape;
      return log_gamma_variate(shape + 1.0) + boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = 0.0;
      double v = 0.0;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2 ||
          std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
        return std::log(d) + std::log(v);
      }
    }
  }

  double gamma_variate(double shape) {
    return std::exp(log_gamma_variate(shape));
  }

 private:
  void refill() noexcept {
    const philox_detail::Block ctr = {
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32)};
    const philox_detail::Key key = {static_cast<std::uint32_t>(seed_),
                                    static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox4x32_10(ctr, key);
    ++block_;
    pos_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  philox_detail::Block buffer_{};
  int pos_ = 4;
  std::optional<double> spare_normal_;
};

}  // namespace occam

#endif  // OCCAM_NUMERICS_RNG_HPP_
