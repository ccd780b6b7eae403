#include "hsv/statistics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace hsv {
namespace {

TEST(StableSum, EmptyAndSmall) {
  EXPECT_EQ(stable_sum({}), 0.0);
  const std::vector<double> v{1.0, 2.0, 3.5};
  EXPECT_EQ(stable_sum(v), 6.5);
}

TEST(StableSum, CompensatesCancellation) {
  // Naive left-to-right summation returns 0 here.
  const std::vector<double> v{1.0, 1e100, 1.0, -1e100};
  EXPECT_EQ(stable_sum(v), 2.0);
}

TEST(StableSum, ManySmallTerms) {
  std::vector<double> v(1000000, 0.1);
  EXPECT_NEAR(stable_sum(v), 100000.0, 1e-9);
}

TEST(StableSum, OrderFixedResult) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  std::vector<double> v(12345);
  for (auto& x : v) x = z(rng) * 1e3;
  const double a = stable_sum(v);
  const double b = stable_sum(std::vector<double>(v));
  EXPECT_EQ(a, b);
  long double exact = 0.0L;
  for (double x : v) exact += x;
  EXPECT_NEAR(a, static_cast<double>(exact), 1e-9);
}

TEST(Summarize, MeanAndStandardError) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(v);
  EXPECT_EQ(s.n, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  // sample variance 5/3, se = sqrt(5/3 / 4)
  EXPECT_NEAR(s.std_error, std::sqrt(5.0 / 12.0), 1e-15);
}

TEST(Summarize, ConstantHasZeroError) {
  const std::vector<double> v(100, 0.951229);
  const auto s = summarize(v);
  EXPECT_NEAR(s.mean, 0.951229, 1e-15);
  EXPECT_EQ(s.std_error, 0.0);
}

TEST(Agreement, CombinedStandardError) {
  GreekEstimate a, b;
  a.value = 1.0;
  a.std_error = 0.3;
  b.value = 2.0;
  b.std_error = 0.4;
  EXPECT_DOUBLE_EQ(combined_se(a, b), 0.5);
  EXPECT_TRUE(agree_within(a, b, 3.0));
  EXPECT_FALSE(agree_within(a, b, 1.9));
}

TEST(Labels, EstimatorNames) {
  GreekEstimate e;
  EXPECT_EQ(e.label(), "malliavin");
  e.estimator = EstimatorKind::FdCentral;
  e.crn = true;
  EXPECT_EQ(e.label(), "fd_central_crn");
  e.estimator = EstimatorKind::FdForward;
  e.crn = false;
  EXPECT_EQ(e.label(), "fd_forward");
}

}  // namespace
}  // namespace hsv
