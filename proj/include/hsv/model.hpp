#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hsv {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

/// Pairwise correlations of the drivers of (S, V, r).
struct CorrelationTriple {
  double rho12 = 0.0;
  double rho13 = 0.0;
  double rho23 = 0.0;

  /// The implied 3x3 correlation matrix.
  Matrix3 matrix() const;
};

/// Loadings of the independent drivers W2, W3 onto the correlated Z2, Z3:
///   dZ1 = dW1
///   dZ2 = rho12 dW1 + mu1 dW2
///   dZ3 = rho13 dW1 + mu2 dW2 + mu3 dW3
struct MixingCoefficients {
  double mu1 = 1.0;
  double mu2 = 0.0;
  double mu3 = 1.0;
};

/// Lower-triangular factor L with L L^T equal to the correlation matrix.
Matrix3 mixing_matrix(const CorrelationTriple& rho, const MixingCoefficients& mu);

/// Radicand of mu3 before division by mu1:
/// 1 - rho12^2 - rho13^2 - rho23^2 + 2 rho12 rho13 rho23 (the correlation determinant).
double mixing_radicand(const CorrelationTriple& rho);

/// Throws NonPositiveSemiDefinite when the radicand is negative or mu3 vanishes,
/// InvalidParams when a correlation lies outside (-1, 1).
MixingCoefficients mixing_from_correlations(const CorrelationTriple& rho);

/// Inverse of mixing_from_correlations given the free rho12. The loadings fix
/// rho13 only up to sign (rho13^2 = 1 - mu2^2 - mu3^2); rho13_sign picks it.
CorrelationTriple reconstruct_correlations(const MixingCoefficients& mu, double rho12,
                                           double rho13_sign = 1.0);

using ScalarFunction = std::function<double(double)>;

enum class ModelKind { Generic, HestonVasicek, BlackScholes };

/// Positivity condition applied to the square-root variance process.
enum class PositivityRule {
  Novikov,  ///< kappa * theta >= sigma_vol^2
  Feller,   ///< 2 * kappa * theta >= sigma_vol^2
};

struct HestonVasicekParams {
  double kappa = 2.0;
  double theta = 0.04;
  double sigma_vol = 0.04;
  double a = 0.02;
  double b = 0.08;
  double k = 0.002;
};

struct PositivityPolicy {
  PositivityRule rule = PositivityRule::Novikov;
  bool enforce = true;  ///< false downgrades a violation to a warning
};

/// Coefficient functions of the hybrid model
///   dS = r S dt + S sigma(V) dZ1
///   dV = u(V) dt + v(V) dZ2
///   dr = f(r) dt + g(r) dZ3
/// together with their first derivatives and the driver correlations.
struct ModelSpec {
  ModelKind kind = ModelKind::Generic;
  std::string name;

  ScalarFunction sigma, u, v, f, g;
  ScalarFunction sigma_prime, u_prime, v_prime, f_prime, g_prime;

  CorrelationTriple correlations;
  MixingCoefficients mixing;

  // Components whose diffusion function vanishes identically. Weights that
  // divide by v or g are refused on such specs.
  bool variance_degenerate = false;
  bool rate_degenerate = false;

  std::optional<HestonVasicekParams> heston_vasicek;
  /// Constant short rate of the Black-Scholes instance; r0 must equal it.
  std::optional<double> pinned_rate;

  std::vector<std::string> warnings;

  bool degenerate() const { return variance_degenerate || rate_degenerate; }

  /// Drift vector and diffusion matrix of the merged three-dimensional system.
  Vector3 drift(const Vector3& x) const;
  Matrix3 diffusion(const Vector3& x) const;
};

/// Builds a spec from arbitrary coefficient functions. Checks correlations and,
/// unless the caller marks a component degenerate, nothing else.
ModelSpec generic_model(std::string name, ScalarFunction sigma, ScalarFunction sigma_prime,
                        ScalarFunction u, ScalarFunction u_prime, ScalarFunction v,
                        ScalarFunction v_prime, ScalarFunction f, ScalarFunction f_prime,
                        ScalarFunction g, ScalarFunction g_prime, const CorrelationTriple& rho);

/// Heston variance with Vasicek short rate. Square-root arguments are floored at zero.
ModelSpec heston_vasicek_model(const HestonVasicekParams& p, const CorrelationTriple& rho,
                               const PositivityPolicy& policy = {});

/// Geometric Brownian motion with constant volatility and rate: v = u = f = g = 0.
ModelSpec black_scholes_degenerate(double sigma_const, double r_const);

/// Smallest eigenvalue of a(x)^T a(x), i.e. the best constant in the uniform
/// ellipticity bound at the point x.
double ellipticity_constant(const ModelSpec& model, const Vector3& x);

/// Largest relative error between each supplied derivative and a central
/// difference of its function, over the given probe points.
struct DerivativeProbe {
  double max_relative_error = 0.0;
  std::string worst_function;
  double worst_point = 0.0;
};
DerivativeProbe probe_derivatives(const ModelSpec& model, std::span<const double> variance_points,
                                  std::span<const double> rate_points);

struct InitialState {
  double s0 = 100.0;
  double v0 = 0.04;
  double r0 = 0.02;

  void validate() const;
};

enum class PayoffKind { Call, Put, DigitalCall, Constant, Identity };

struct Payoff {
  PayoffKind kind = PayoffKind::Call;
  double strike = 100.0;
  double level = 1.0;

  static Payoff call(double k) { return {PayoffKind::Call, k, 0.0}; }
  static Payoff put(double k) { return {PayoffKind::Put, k, 0.0}; }
  static Payoff digital_call(double k) { return {PayoffKind::DigitalCall, k, 0.0}; }
  static Payoff constant(double c) { return {PayoffKind::Constant, 0.0, c}; }
  static Payoff identity() { return {PayoffKind::Identity, 0.0, 0.0}; }

  void validate() const;
};

double evaluate_payoff(const Payoff& p, double s_T);

std::string to_string(PayoffKind kind);
PayoffKind parse_payoff_kind(const std::string& name);

}  // namespace hsv
