#pragma once

#include "hsv/model.hpp"
#include "hsv/path_engine.hpp"
#include "hsv/statistics.hpp"

#include <functional>
#include <string>

namespace hsv {

enum class BumpTarget {
  S0,
  V0,
  R0,
  RhoShiftEpsilon,   ///< drift and discount shift, compare with rho()
  VegaShiftEpsilon,  ///< sigma(V) + eps in the S diffusion, compare with vega()
  KappaEpsilon,      ///< V drift + eps * kappa
  ReversionEpsilon,  ///< r drift + eps * a
};

enum class FdScheme { Forward, Backward, Central };

struct BumpSpec {
  BumpTarget target = BumpTarget::S0;
  FdScheme scheme = FdScheme::Central;
  double h = 1.0;
  bool crn = true;
};

std::string to_string(BumpTarget target);
std::string to_string(FdScheme scheme);
BumpTarget parse_bump_target(const std::string& name);
FdScheme parse_fd_scheme(const std::string& name);

/// Default bump sizes: 1% of s0 and v0, 1e-4 for r0 and the epsilon targets.
double default_bump(BumpTarget target, const InitialState& init);

/// Difference quotient of a scalar function; the self-test hook for the schemes.
double finite_difference(const std::function<double(double)>& fn, double x, double h,
                         FdScheme scheme);

/// Bump-and-revalue Greek. With crn every evaluation reuses the base seed, so
/// the (seed, path, step, driver) keys coincide and the standard error comes
/// from the per-path differences. Without crn each evaluation gets its own
/// seed and the standard errors of the independent prices are combined.
GreekEstimate fd_greek(const ModelSpec& model, const InitialState& init, const SimConfig& cfg,
                       const Payoff& payoff, const BumpSpec& bump);

/// Number of path simulations fd_greek performs for a scheme.
int fd_simulation_count(FdScheme scheme);

/// Black-Scholes call price and sensitivities.
struct BlackScholesResult {
  double price = 0.0;
  double delta = 0.0;
  double vega = 0.0;
  double rho = 0.0;
  double digital_delta = 0.0;  ///< delta of the cash-or-nothing call paying 1
};

BlackScholesResult bs_closed_form(double s0, double strike, double r, double sigma, double T);

double normal_cdf(double x);
double normal_pdf(double x);

}  // namespace hsv
