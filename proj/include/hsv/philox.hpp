#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace hsv {

/// Philox-4x32 with 10 rounds (Salmon et al., SC'11). Stateless: the output is
/// a pure function of (counter, key), so any draw can be addressed directly.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// Standard normal draws addressed by (seed, path, step, driver). Drivers 0 and
/// 1 share one Philox block, driver 2 uses a second block, so every variate is
/// reproducible regardless of which worker computes the path.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  /// The three driver variates for one time step of one path.
  std::array<double, 3> step(std::uint64_t path, std::uint32_t step) const noexcept {
    const auto [z0, z1] = pair(path, step, 0);
    const auto [z2, unused] = pair(path, step, 1);
    (void)unused;
    return {z0, z1, z2};
  }

  /// Single variate for a given driver in {0, 1, 2}.
  double normal(std::uint64_t path, std::uint32_t step, unsigned driver) const noexcept {
    const auto [first, second] = pair(path, step, driver / 2);
    return driver % 2 == 0 ? first : second;
  }

 private:
  struct Pair {
    double first;
    double second;
  };

  Pair pair(std::uint64_t path, std::uint32_t step, std::uint32_t block) const noexcept {
    const auto out = Philox4x32::generate(
        {step, block, static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)},
        key_);
    // 53-bit uniforms; u1 in (0, 1] keeps the logarithm finite.
    const std::uint64_t a = (std::uint64_t{out[0]} << 32) | out[1];
    const std::uint64_t b = (std::uint64_t{out[2]} << 32) | out[3];
    const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  Philox4x32::Key key_;
};

}  // namespace hsv
