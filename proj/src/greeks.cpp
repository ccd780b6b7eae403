#include "hsv/greeks.hpp"

#include "hsv/error.hpp"

#include <cmath>

namespace hsv {

namespace {

void require_paths(const PathSet& paths, std::span<const double> values) {
  if (paths.paths.empty()) throw Error(ErrorCode::EmptyInput, "no paths");
  if (values.size() != paths.paths.size()) {
    throw Error(ErrorCode::InvalidParams, "payoff values do not match the path count");
  }
}

double weight_combination(const PathSet& set, const PathAccumulators& p) {
  const auto& rho = set.correlations;
  const auto& mu = set.mixing;
  return p.I1 - (rho.rho12 / mu.mu1) * p.I2 +
         ((rho.rho12 * mu.mu2 - rho.rho13 * mu.mu1) / (mu.mu1 * mu.mu3)) * p.I3;
}

// Mean and standard error of payoff * weight over the paths.
template <typename Weight>
GreekEstimate weighted_mean(const PathSet& set, std::span<const double> values, Weight weight) {
  std::vector<double> samples(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) samples[i] = values[i] * weight(set.paths[i]);
  const auto summary = summarize(samples);
  GreekEstimate out;
  out.value = summary.mean;
  out.std_error = summary.std_error;
  out.n_paths = summary.n;
  out.estimator = EstimatorKind::Malliavin;
  out.clamp_count = set.total_clamps();
  const double evaluations = static_cast<double>(set.size()) * static_cast<double>(set.n_steps);
  out.degenerate_weight = evaluations > 0.0 && out.clamp_count > 0.01 * evaluations;
  return out;
}

}  // namespace

WeightBundle compute_weights(const PathSet& set) {
  const double T = set.maturity;
  const std::size_t n = set.size();
  WeightBundle w;
  for (auto* v : {&w.discount, &w.combination, &w.delta, &w.rho, &w.vega, &w.vega_v0, &w.rho_r0}) {
    v->resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = set.paths[i];
    const double disc = std::exp(-p.D);
    const double c = weight_combination(set, p);
    w.discount[i] = disc;
    w.combination[i] = c;
    w.delta[i] = disc * c / (set.s0 * T);
    w.rho[i] = disc * (c - T);
    w.vega[i] = disc * ((p.w1_T - p.A) * c - p.Q) / T;
    w.vega_v0[i] = disc * p.P2 / T;
    w.rho_r0[i] = disc * (p.P3 / T - p.R);
  }
  return w;
}

std::vector<double> payoff_values(const PathSet& set, const Payoff& payoff) {
  payoff.validate();
  std::vector<double> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out[i] = evaluate_payoff(payoff, set.paths[i].s_T);
  return out;
}

GreekEstimate price(const PathSet& set, std::span<const double> values) {
  require_paths(set, values);
  return weighted_mean(set, values, [](const PathAccumulators& p) { return std::exp(-p.D); });
}

GreekEstimate delta(const PathSet& set, std::span<const double> values) {
  require_paths(set, values);
  const double scale = 1.0 / (set.s0 * set.maturity);
  return weighted_mean(set, values, [&](const PathAccumulators& p) {
    return std::exp(-p.D) * weight_combination(set, p) * scale;
  });
}

BismutVector bismut_vector(const PathSet& set, std::span<const double> values) {
  require_paths(set, values);
  if (!set.variance_weights_valid || !set.rate_weights_valid) {
    throw Error(ErrorCode::DegenerateModel,
                "initial-variance and initial-rate weights need nonvanishing v and g");
  }
  const double T = set.maturity;
  BismutVector out;
  out.delta = delta(set, values);
  out.vega_v0 = weighted_mean(set, values,
                              [T](const PathAccumulators& p) { return std::exp(-p.D) * p.P2 / T; });
  out.rho_r0 = weighted_mean(set, values, [T](const PathAccumulators& p) {
    return std::exp(-p.D) * (p.P3 / T - p.R);
  });
  return out;
}

GreekEstimate rho(const PathSet& set, std::span<const double> values) {
  require_paths(set, values);
  const double T = set.maturity;
  return weighted_mean(set, values, [&](const PathAccumulators& p) {
    return std::exp(-p.D) * (weight_combination(set, p) - T);
  });
}

GreekEstimate vega(const PathSet& set, std::span<const double> values) {
  require_paths(set, values);
  const double T = set.maturity;
  return weighted_mean(set, values, [&](const PathAccumulators& p) {
    return std::exp(-p.D) * ((p.w1_T - p.A) * weight_combination(set, p) - p.Q) / T;
  });
}

GreekEstimate drift_sensitivity(const PathSet& set, std::span<const double> values, DriftKind kind) {
  require_paths(set, values);
  switch (kind) {
    case DriftKind::StockShift:
      return rho(set, values);
    case DriftKind::Kappa: {
      if (!set.heston_vasicek) {
        throw Error(ErrorCode::UnsupportedModel, "kappa sensitivity needs a Heston-Vasicek model");
      }
      if (!set.variance_weights_valid) throw Error(ErrorCode::DegenerateModel, "v vanishes");
      const double kappa = set.heston_vasicek->kappa;
      return weighted_mean(set, values,
                           [kappa](const PathAccumulators& p) { return std::exp(-p.D) * kappa * p.Jv; });
    }
    case DriftKind::ReversionSpeed: {
      if (!set.heston_vasicek) {
        throw Error(ErrorCode::UnsupportedModel,
                    "reversion-speed sensitivity needs a Heston-Vasicek model");
      }
      if (!set.rate_weights_valid) throw Error(ErrorCode::DegenerateModel, "g vanishes");
      const double a = set.heston_vasicek->a;
      return weighted_mean(set, values,
                           [a](const PathAccumulators& p) { return std::exp(-p.D) * a * p.Jg; });
    }
  }
  throw Error(ErrorCode::InvalidParams, "unknown drift kind");
}

GreekEstimate price(const PathSet& set, const Payoff& payoff) {
  return price(set, payoff_values(set, payoff));
}
GreekEstimate delta(const PathSet& set, const Payoff& payoff) {
  return delta(set, payoff_values(set, payoff));
}
BismutVector bismut_vector(const PathSet& set, const Payoff& payoff) {
  return bismut_vector(set, payoff_values(set, payoff));
}
GreekEstimate rho(const PathSet& set, const Payoff& payoff) {
  return rho(set, payoff_values(set, payoff));
}
GreekEstimate vega(const PathSet& set, const Payoff& payoff) {
  return vega(set, payoff_values(set, payoff));
}
GreekEstimate drift_sensitivity(const PathSet& set, const Payoff& payoff, DriftKind kind) {
  return drift_sensitivity(set, payoff_values(set, payoff), kind);
}

}  // namespace hsv
