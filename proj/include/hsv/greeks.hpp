#pragma once

#include "hsv/model.hpp"
#include "hsv/path_engine.hpp"
#include "hsv/statistics.hpp"

#include <span>
#include <vector>

namespace hsv {

/// Per-path Malliavin weights, each already multiplied by the path discount
/// factor. An estimator is the sample mean of payoff * weight.
struct WeightBundle {
  std::vector<double> discount;     ///< e^{-D}
  std::vector<double> combination;  ///< C = I1 - (rho12/mu1) I2 + ((rho12 mu2 - rho13 mu1)/(mu1 mu3)) I3
  std::vector<double> delta;        ///< e^{-D} C / (s0 T)
  std::vector<double> rho;          ///< e^{-D} (C - T)
  std::vector<double> vega;         ///< e^{-D} ((W1_T - A) C - Q) / T
  std::vector<double> vega_v0;      ///< e^{-D} P2 / T; NaN on variance-degenerate specs
  std::vector<double> rho_r0;       ///< e^{-D} (P3 / T - R); NaN on rate-degenerate specs
};

WeightBundle compute_weights(const PathSet& paths);

/// Discounted payoff values e^{-D} Phi(S_T) are not formed here; this is Phi(S_T).
std::vector<double> payoff_values(const PathSet& paths, const Payoff& payoff);

GreekEstimate price(const PathSet& paths, const Payoff& payoff);
GreekEstimate price(const PathSet& paths, std::span<const double> payoff_values);

GreekEstimate delta(const PathSet& paths, const Payoff& payoff);
GreekEstimate delta(const PathSet& paths, std::span<const double> payoff_values);

/// Gradient in (S0, V0, r0) from the single Bismut-Elworthy-Li weight vector.
struct BismutVector {
  GreekEstimate delta;
  GreekEstimate vega_v0;
  GreekEstimate rho_r0;
};
BismutVector bismut_vector(const PathSet& paths, const Payoff& payoff);
BismutVector bismut_vector(const PathSet& paths, std::span<const double> payoff_values);

/// Sensitivity to a parallel shift of the stock drift and the discount rate.
GreekEstimate rho(const PathSet& paths, const Payoff& payoff);
GreekEstimate rho(const PathSet& paths, std::span<const double> payoff_values);

/// Sensitivity to eps in the diffusion perturbation sigma(V) -> sigma(V) + eps.
GreekEstimate vega(const PathSet& paths, const Payoff& payoff);
GreekEstimate vega(const PathSet& paths, std::span<const double> payoff_values);

enum class DriftKind {
  StockShift,      ///< gamma = (S, 0, 0) plus the discount shift; equals rho()
  Kappa,           ///< gamma = (0, kappa, 0)
  ReversionSpeed,  ///< gamma = (0, 0, a)
};

GreekEstimate drift_sensitivity(const PathSet& paths, const Payoff& payoff, DriftKind kind);
GreekEstimate drift_sensitivity(const PathSet& paths, std::span<const double> payoff_values,
                                DriftKind kind);

}  // namespace hsv
