#include "hsv/statistics.hpp"

#include <cmath>
#include <vector>

namespace hsv {

namespace {

constexpr std::size_t kLeaf = 64;

double neumaier(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double x : values) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace

double stable_sum(std::span<const double> values) {
  if (values.size() <= kLeaf) return neumaier(values);
  const std::size_t half = values.size() / 2;
  return stable_sum(values.first(half)) + stable_sum(values.subspan(half));
}

SampleSummary summarize(std::span<const double> samples) {
  SampleSummary out;
  out.n = samples.size();
  if (out.n == 0) return out;
  out.mean = stable_sum(samples) / static_cast<double>(out.n);
  if (out.n < 2) return out;
  std::vector<double> sq(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - out.mean;
    sq[i] = d * d;
  }
  const double var = stable_sum(sq) / static_cast<double>(out.n - 1);
  out.std_error = std::sqrt(var / static_cast<double>(out.n));
  return out;
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Malliavin: return "malliavin";
    case EstimatorKind::FdForward: return "fd_forward";
    case EstimatorKind::FdBackward: return "fd_backward";
    case EstimatorKind::FdCentral: return "fd_central";
    case EstimatorKind::Analytic: return "analytic";
  }
  return "unknown";
}

std::string GreekEstimate::label() const {
  std::string out = to_string(estimator);
  if (crn) out += "_crn";
  return out;
}

double combined_se(const GreekEstimate& a, const GreekEstimate& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

bool agree_within(const GreekEstimate& a, const GreekEstimate& b, double k) {
  return std::abs(a.value - b.value) <= k * combined_se(a, b);
}

}  // namespace hsv
