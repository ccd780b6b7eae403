#include "hsv/baselines.hpp"

#include "hsv/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace hsv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Scenario {
  ModelSpec model;
  InitialState init;
  Perturbation perturbation;
};

double base_value(BumpTarget target, const InitialState& init) {
  switch (target) {
    case BumpTarget::S0: return init.s0;
    case BumpTarget::V0: return init.v0;
    case BumpTarget::R0: return init.r0;
    default: return 0.0;
  }
}

Scenario bumped(const ModelSpec& model, const InitialState& init, BumpTarget target, double shift) {
  Scenario sc{model, init, {}};
  switch (target) {
    case BumpTarget::S0: sc.init.s0 += shift; break;
    case BumpTarget::V0: sc.init.v0 += shift; break;
    case BumpTarget::R0:
      sc.init.r0 += shift;
      if (model.pinned_rate) {
        sc.model = black_scholes_degenerate(model.sigma(init.v0), *model.pinned_rate + shift);
      }
      break;
    case BumpTarget::RhoShiftEpsilon: sc.perturbation = Perturbation::rho_shift(shift); break;
    case BumpTarget::VegaShiftEpsilon: sc.perturbation = Perturbation::vega_shift(shift); break;
    case BumpTarget::KappaEpsilon:
      sc.perturbation = Perturbation::kappa_shift(shift, model.heston_vasicek->kappa);
      break;
    case BumpTarget::ReversionEpsilon:
      sc.perturbation = Perturbation::reversion_shift(shift, model.heston_vasicek->a);
      break;
  }
  return sc;
}

// Discounted payoff per path.
std::vector<double> discounted_payoffs(const Scenario& sc, const SimConfig& cfg,
                                       const Payoff& payoff, double& clamps) {
  const PathSet set = simulate_paths(sc.model, sc.init, cfg, sc.perturbation);
  clamps += set.total_clamps();
  std::vector<double> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& p = set.paths[i];
    out[i] = std::exp(-p.D) * evaluate_payoff(payoff, p.s_T);
  }
  return out;
}

void validate_bump(const ModelSpec& model, const InitialState& init, const BumpSpec& bump) {
  if (!(bump.h > 0.0) || !std::isfinite(bump.h)) {
    throw Error(ErrorCode::InvalidBump, "bump size must be > 0");
  }
  const double base = base_value(bump.target, init);
  if (base != 0.0 && !(bump.h < 0.5 * std::abs(base))) {
    std::ostringstream os;
    os << "bump " << bump.h << " not below half the base value " << base << " of "
       << to_string(bump.target);
    throw Error(ErrorCode::InvalidBump, os.str());
  }
  if ((bump.target == BumpTarget::KappaEpsilon || bump.target == BumpTarget::ReversionEpsilon) &&
      !model.heston_vasicek) {
    throw Error(ErrorCode::UnsupportedModel, to_string(bump.target) + " needs a Heston-Vasicek model");
  }
}

}  // namespace

std::string to_string(BumpTarget target) {
  switch (target) {
    case BumpTarget::S0: return "s0";
    case BumpTarget::V0: return "v0";
    case BumpTarget::R0: return "r0";
    case BumpTarget::RhoShiftEpsilon: return "rho_shift_epsilon";
    case BumpTarget::VegaShiftEpsilon: return "vega_shift_epsilon";
    case BumpTarget::KappaEpsilon: return "kappa_epsilon";
    case BumpTarget::ReversionEpsilon: return "reversion_epsilon";
  }
  return "unknown";
}

std::string to_string(FdScheme scheme) {
  switch (scheme) {
    case FdScheme::Forward: return "forward";
    case FdScheme::Backward: return "backward";
    case FdScheme::Central: return "central";
  }
  return "unknown";
}

BumpTarget parse_bump_target(const std::string& name) {
  for (auto t : {BumpTarget::S0, BumpTarget::V0, BumpTarget::R0, BumpTarget::RhoShiftEpsilon,
                 BumpTarget::VegaShiftEpsilon, BumpTarget::KappaEpsilon,
                 BumpTarget::ReversionEpsilon}) {
    if (to_string(t) == name) return t;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown bump target '" + name + "'");
}

FdScheme parse_fd_scheme(const std::string& name) {
  for (auto s : {FdScheme::Forward, FdScheme::Backward, FdScheme::Central}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown finite-difference scheme '" + name + "'");
}

double default_bump(BumpTarget target, const InitialState& init) {
  switch (target) {
    case BumpTarget::S0: return 0.01 * init.s0;
    case BumpTarget::V0: return 0.01 * init.v0;
    default: return 1e-4;
  }
}

double finite_difference(const std::function<double(double)>& fn, double x, double h,
                         FdScheme scheme) {
  switch (scheme) {
    case FdScheme::Forward: return (fn(x + h) - fn(x)) / h;
    case FdScheme::Backward: return (fn(x) - fn(x - h)) / h;
    case FdScheme::Central: return (fn(x + h) - fn(x - h)) / (2.0 * h);
  }
  return 0.0;
}

int fd_simulation_count(FdScheme scheme) {
  (void)scheme;
  return 2;
}

GreekEstimate fd_greek(const ModelSpec& model, const InitialState& init, const SimConfig& cfg,
                       const Payoff& payoff, const BumpSpec& bump) {
  validate_bump(model, init, bump);
  payoff.validate();

  double up_shift = 0.0, down_shift = 0.0, denom = bump.h;
  switch (bump.scheme) {
    case FdScheme::Forward: up_shift = bump.h; break;
    case FdScheme::Backward: down_shift = -bump.h; break;
    case FdScheme::Central:
      up_shift = bump.h;
      down_shift = -bump.h;
      denom = 2.0 * bump.h;
      break;
  }

  SimConfig up_cfg = cfg, down_cfg = cfg;
  if (!bump.crn) {
    // Independent streams; an unshifted leg keeps the base seed.
    if (up_shift != 0.0) up_cfg.seed = splitmix64(cfg.seed ^ 0x5550ull);
    if (down_shift != 0.0) down_cfg.seed = splitmix64(cfg.seed ^ 0x444Eull);
  }

  double clamps = 0.0;
  const auto up = discounted_payoffs(bumped(model, init, bump.target, up_shift), up_cfg, payoff, clamps);
  const auto down =
      discounted_payoffs(bumped(model, init, bump.target, down_shift), down_cfg, payoff, clamps);

  GreekEstimate out;
  out.estimator = bump.scheme == FdScheme::Forward    ? EstimatorKind::FdForward
                  : bump.scheme == FdScheme::Backward ? EstimatorKind::FdBackward
                                                      : EstimatorKind::FdCentral;
  out.crn = bump.crn;
  out.clamp_count = clamps;
  out.n_paths = up.size();
  if (bump.crn) {
    std::vector<double> diff(up.size());
    for (std::size_t i = 0; i < up.size(); ++i) diff[i] = (up[i] - down[i]) / denom;
    const auto s = summarize(diff);
    out.value = s.mean;
    out.std_error = s.std_error;
  } else {
    const auto su = summarize(up);
    const auto sd = summarize(down);
    out.value = (su.mean - sd.mean) / denom;
    out.std_error = std::sqrt(su.std_error * su.std_error + sd.std_error * sd.std_error) / denom;
  }
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

BlackScholesResult bs_closed_form(double s0, double strike, double r, double sigma, double T) {
  if (!(s0 > 0.0) || !(strike > 0.0) || !(sigma > 0.0) || !(T > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::InvalidParams, "Black-Scholes inputs need s0, K, sigma, T > 0");
  }
  const double sqrt_t = std::sqrt(T);
  const double d1 = (std::log(s0 / strike) + (r + 0.5 * sigma * sigma) * T) / (sigma * sqrt_t);
  const double d2 = d1 - sigma * sqrt_t;
  const double df = std::exp(-r * T);
  BlackScholesResult out;
  out.price = s0 * normal_cdf(d1) - strike * df * normal_cdf(d2);
  out.delta = normal_cdf(d1);
  out.vega = s0 * sqrt_t * normal_pdf(d1);
  out.rho = strike * T * df * normal_cdf(d2);
  out.digital_delta = df * normal_pdf(d2) / (s0 * sigma * sqrt_t);
  return out;
}

}  // namespace hsv
