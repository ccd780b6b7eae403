#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace hsv {

/// Sum in a fixed pairwise tree with compensated leaves. The result depends only
/// on the values and their order.
double stable_sum(std::span<const double> values);

struct SampleSummary {
  double mean = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(n)
  std::size_t n = 0;
};

SampleSummary summarize(std::span<const double> samples);

enum class EstimatorKind { Malliavin, FdForward, FdBackward, FdCentral, Analytic };

struct GreekEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  EstimatorKind estimator = EstimatorKind::Malliavin;
  bool crn = false;  ///< finite differences only: common random numbers
  double clamp_count = 0.0;
  bool degenerate_weight = false;  ///< clamp rate above 1% of integrand evaluations

  std::string label() const;
};

double combined_se(const GreekEstimate& a, const GreekEstimate& b);

/// |a - b| <= k * sqrt(se_a^2 + se_b^2)
bool agree_within(const GreekEstimate& a, const GreekEstimate& b, double k = 3.0);

std::string to_string(EstimatorKind kind);

}  // namespace hsv
