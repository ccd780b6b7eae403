#pragma once

#include "hsv/model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hsv {

struct SimConfig {
  std::size_t n_paths = 10000;
  std::size_t n_steps = 252;
  double maturity = 1.0;
  std::uint64_t seed = 42;
  double variance_floor = 0.0;  ///< V is clamped to this inside sqrt and drift evaluations
  double sigma_floor = 1e-8;    ///< 1/sigma(V) is evaluated as 1/max(sigma(V), sigma_floor)
  unsigned worker_hint = 0;     ///< 0 selects the hardware concurrency

  double dt() const { return maturity / static_cast<double>(n_steps); }
  void validate() const;
};

/// Epsilon-perturbations of the dynamics used by the bump-and-revalue oracles.
/// All zero reproduces the unperturbed model.
struct Perturbation {
  double stock_drift = 0.0;     ///< added to r in the S drift
  double discount_shift = 0.0;  ///< added to r in the discount integral only
  double stock_vol = 0.0;       ///< added to sigma(V) in the S diffusion
  double variance_drift = 0.0;  ///< added to u(V)
  double rate_drift = 0.0;      ///< added to f(r)

  /// Parallel shift of the stock drift and the discount rate.
  static Perturbation rho_shift(double eps) { return {eps, eps, 0.0, 0.0, 0.0}; }
  /// Diffusion perturbation a + eps * diag(S, 0, 0).
  static Perturbation vega_shift(double eps) { return {0.0, 0.0, eps, 0.0, 0.0}; }
  /// Drift perturbation gamma = (0, kappa, 0).
  static Perturbation kappa_shift(double eps, double kappa) { return {0.0, 0.0, 0.0, eps * kappa, 0.0}; }
  /// Drift perturbation gamma = (0, 0, a).
  static Perturbation reversion_shift(double eps, double a) { return {0.0, 0.0, 0.0, 0.0, eps * a}; }
};

/// Per-path terminal state and the integrals the weights are built from.
/// Field order is the on-disk record order.
struct PathAccumulators {
  double s_T = 0.0, v_T = 0.0, r_T = 0.0;
  double D = 0.0;                   ///< int r dt
  double I1 = 0.0, I2 = 0.0, I3 = 0.0;  ///< int 1/sigma(V) dW^i
  double A = 0.0;                   ///< int sigma(V) dt
  double Q = 0.0;                   ///< int 1/sigma(V) dt
  double w1_T = 0.0;                ///< W^1_T
  double P2 = 0.0, P3 = 0.0;        ///< rows 2, 3 of int (a^{-1} Y)^T dW (without 1/T)
  double y12_T = 0.0, y13_T = 0.0, y22_T = 1.0, y33_T = 1.0;
  // Appended after the fields above.
  double R = 0.0;   ///< int (1 - t/T) Y^33 dt, discount correction of the r0 weight
  double Jv = 0.0;  ///< int 1/v(V) (dW^2/mu1 - mu2/(mu1 mu3) dW^3)
  double Jg = 0.0;  ///< int 1/(mu3 g(r)) dW^3
  double clamp_count = 0.0;  ///< evaluations where sigma or v hit the floor

  static constexpr std::size_t kFieldCount = 20;
  std::array<double, kFieldCount> to_array() const;
  static PathAccumulators from_array(const std::array<double, kFieldCount>& a);
};

/// Simulated paths together with the model facts the estimators need.
struct PathSet {
  std::vector<PathAccumulators> paths;

  CorrelationTriple correlations;
  MixingCoefficients mixing;
  double s0 = 0.0;
  double maturity = 1.0;
  std::size_t n_steps = 0;
  std::uint64_t seed = 0;
  bool variance_weights_valid = false;  ///< P2 and Jv are usable
  bool rate_weights_valid = false;      ///< P3 and Jg are usable
  std::optional<HestonVasicekParams> heston_vasicek;

  std::size_t size() const { return paths.size(); }
  double total_clamps() const;
  /// The first n paths; identical to a fresh run with n_paths = n.
  PathSet prefix(std::size_t n) const;
};

using StepNormals = std::array<double, 3>;

/// Grid history of a single path, recorded on request.
struct PathTrace {
  double maturity = 1.0;
  double variance_floor = 0.0;
  std::vector<double> t, s, v, r;            ///< n_steps + 1 grid values
  std::vector<double> y12, y13, y22, y33;    ///< engine recursions on the grid
  std::vector<std::array<double, 3>> dW;     ///< n_steps independent increments
};

/// Standard normal variates of one path, keyed by (seed, path, step, driver).
std::vector<StepNormals> draw_normals(std::uint64_t seed, std::uint64_t path, std::size_t n_steps);

/// Simulates one path driven by the given standard normals (n_steps of them).
PathAccumulators simulate_path(const ModelSpec& model, const InitialState& init,
                               const SimConfig& cfg, const Perturbation& perturbation,
                               std::span<const StepNormals> normals, PathTrace* trace = nullptr,
                               std::uint64_t path_index = 0);

/// All n_paths paths. Bit-identical for any worker count.
PathSet simulate_paths(const ModelSpec& model, const InitialState& init, const SimConfig& cfg,
                       const Perturbation& perturbation = {});

/// Diagonal first-variation entries rebuilt from a recorded path through their
/// exponential closed forms, evaluated with the discrete sums of the grid.
struct FirstVariationSeries {
  std::vector<double> y11, y22, y33;
  bool variance_degenerate = false;  ///< y22 reduced to the drift-only exponential
  bool rate_degenerate = false;      ///< y33 reduced to the drift-only exponential
};
FirstVariationSeries first_variation_closed_forms(const PathTrace& trace, const ModelSpec& model,
                                                  const InitialState& init);

/// Euler recursion of the off-diagonal entries Y^12, Y^13 from zero along a
/// recorded path, given the diagonal series.
struct OffDiagonalTerminal {
  double y12_T = 0.0;
  double y13_T = 0.0;
};
OffDiagonalTerminal simulate_y12_y13(const PathTrace& trace, const ModelSpec& model,
                                     std::span<const double> y22, std::span<const double> y33);

}  // namespace hsv
