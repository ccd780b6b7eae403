#include "hsv/philox.hpp"
#include "hsv/statistics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace hsv {
namespace {

using Counter = Philox4x32::Counter;

// Known-answer vectors of the Random123 distribution.
TEST(Philox, KnownAnswerZero) {
  const Counter out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerOnes) {
  const Counter out = Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                           {0xffffffff, 0xffffffff});
  EXPECT_EQ(out, (Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  const Counter out = Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                           {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out, (Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, CompileTimeEvaluation) {
  constexpr Counter out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  static_assert(out[0] == 0x6627e8d5);
}

TEST(NormalStreamTest, AddressableAndReproducible) {
  const NormalStream a(42), b(42), c(43);
  const auto s = a.step(17, 5);
  EXPECT_EQ(s, b.step(17, 5));
  EXPECT_NE(s, c.step(17, 5));
  EXPECT_NE(s, a.step(18, 5));
  EXPECT_NE(s, a.step(17, 6));
  for (unsigned d = 0; d < 3; ++d) EXPECT_EQ(a.normal(17, 5, d), s[d]);
}

TEST(NormalStreamTest, HighPathBitsMatter) {
  const NormalStream a(1);
  EXPECT_NE(a.step(1, 0), a.step((std::uint64_t{1} << 32) | 1, 0));
}

TEST(NormalStreamTest, MomentsAndIndependence) {
  const NormalStream rng(2024);
  const std::size_t n = 200000;
  std::vector<double> x(n), x2(n), x4(n), cross01(n), cross02(n), lag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = rng.step(i / 8, static_cast<std::uint32_t>(i % 8));
    const auto next = rng.step(i / 8, static_cast<std::uint32_t>(i % 8 + 1));
    x[i] = z[0];
    x2[i] = z[1] * z[1];
    x4[i] = z[2] * z[2] * z[2] * z[2];
    cross01[i] = z[0] * z[1];
    cross02[i] = z[0] * z[2];
    lag[i] = z[0] * next[0];
  }
  // Five-sigma bands on n = 2e5 samples.
  EXPECT_NEAR(summarize(x).mean, 0.0, 5.0 / std::sqrt(double(n)));
  EXPECT_NEAR(summarize(x2).mean, 1.0, 5.0 * std::sqrt(2.0 / double(n)));
  EXPECT_NEAR(summarize(x4).mean, 3.0, 5.0 * std::sqrt(96.0 / double(n)));
  EXPECT_NEAR(summarize(cross01).mean, 0.0, 5.0 / std::sqrt(double(n)));
  EXPECT_NEAR(summarize(cross02).mean, 0.0, 5.0 / std::sqrt(double(n)));
  EXPECT_NEAR(summarize(lag).mean, 0.0, 5.0 / std::sqrt(double(n)));
}

}  // namespace
}  // namespace hsv
