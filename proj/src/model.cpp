#include "hsv/model.hpp"

#include "hsv/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hsv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveSemiDefinite: return "NonPositiveSemiDefinite";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DegenerateModel: return "DegenerateModel";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::NumericalBlowup: return "NumericalBlowup";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidBump: return "InvalidBump";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

// Derivatives of the square root are evaluated no closer to zero than this.
constexpr double kSqrtDerivativeFloor = 1e-12;

void require_open_unit(double rho, const char* name) {
  if (!(rho > -1.0 && rho < 1.0)) {
    std::ostringstream os;
    os << name << " = " << rho << " outside (-1, 1)";
    throw Error(ErrorCode::InvalidParams, os.str());
  }
}

}  // namespace

Matrix3 CorrelationTriple::matrix() const {
  Matrix3 c;
  c << 1.0, rho12, rho13,
       rho12, 1.0, rho23,
       rho13, rho23, 1.0;
  return c;
}

Matrix3 mixing_matrix(const CorrelationTriple& rho, const MixingCoefficients& mu) {
  Matrix3 l;
  l << 1.0, 0.0, 0.0,
       rho.rho12, mu.mu1, 0.0,
       rho.rho13, mu.mu2, mu.mu3;
  return l;
}

double mixing_radicand(const CorrelationTriple& rho) {
  const double r12 = rho.rho12, r13 = rho.rho13, r23 = rho.rho23;
  return 1.0 - r12 * r12 - r13 * r13 - r23 * r23 + 2.0 * r13 * r12 * r23;
}

MixingCoefficients mixing_from_correlations(const CorrelationTriple& rho) {
  require_open_unit(rho.rho12, "rho12");
  require_open_unit(rho.rho13, "rho13");
  require_open_unit(rho.rho23, "rho23");

  const double radicand = mixing_radicand(rho);
  if (!(radicand > 0.0)) {
    std::ostringstream os;
    os << "correlation matrix not positive definite, mu3 radicand = " << radicand;
    throw Error(ErrorCode::NonPositiveSemiDefinite, os.str());
  }
  MixingCoefficients mu;
  mu.mu1 = std::sqrt(1.0 - rho.rho12 * rho.rho12);
  mu.mu2 = (rho.rho23 - rho.rho12 * rho.rho13) / mu.mu1;
  mu.mu3 = std::sqrt(radicand) / mu.mu1;
  if (!(mu.mu3 > 0.0)) {
    std::ostringstream os;
    os << "mu3 vanishes, mu3 radicand = " << radicand;
    throw Error(ErrorCode::NonPositiveSemiDefinite, os.str());
  }
  return mu;
}

CorrelationTriple reconstruct_correlations(const MixingCoefficients& mu, double rho12,
                                           double rho13_sign) {
  const double rho13_sq = std::max(0.0, 1.0 - mu.mu2 * mu.mu2 - mu.mu3 * mu.mu3);
  CorrelationTriple rho;
  rho.rho12 = rho12;
  rho.rho13 = std::copysign(std::sqrt(rho13_sq), rho13_sign);
  rho.rho23 = rho12 * rho.rho13 + mu.mu1 * mu.mu2;
  return rho;
}

Vector3 ModelSpec::drift(const Vector3& x) const {
  return {x(2) * x(0), u(x(1)), f(x(2))};
}

Matrix3 ModelSpec::diffusion(const Vector3& x) const {
  const double sv = sigma(x(1));
  const double vv = v(x(1));
  const double gr = g(x(2));
  Matrix3 a;
  a << x(0) * sv, 0.0, 0.0,
       correlations.rho12 * vv, mixing.mu1 * vv, 0.0,
       correlations.rho13 * gr, mixing.mu2 * gr, mixing.mu3 * gr;
  return a;
}

ModelSpec generic_model(std::string name, ScalarFunction sigma, ScalarFunction sigma_prime,
                        ScalarFunction u, ScalarFunction u_prime, ScalarFunction v,
                        ScalarFunction v_prime, ScalarFunction f, ScalarFunction f_prime,
                        ScalarFunction g, ScalarFunction g_prime, const CorrelationTriple& rho) {
  ModelSpec m;
  m.kind = ModelKind::Generic;
  m.name = std::move(name);
  m.sigma = std::move(sigma);
  m.sigma_prime = std::move(sigma_prime);
  m.u = std::move(u);
  m.u_prime = std::move(u_prime);
  m.v = std::move(v);
  m.v_prime = std::move(v_prime);
  m.f = std::move(f);
  m.f_prime = std::move(f_prime);
  m.g = std::move(g);
  m.g_prime = std::move(g_prime);
  m.correlations = rho;
  m.mixing = mixing_from_correlations(rho);
  return m;
}

ModelSpec heston_vasicek_model(const HestonVasicekParams& p, const CorrelationTriple& rho,
                               const PositivityPolicy& policy) {
  const std::pair<const char*, double> fields[] = {
      {"kappa", p.kappa}, {"theta", p.theta}, {"sigma_vol", p.sigma_vol},
      {"a", p.a},         {"b", p.b},         {"k", p.k},
  };
  for (const auto& [key, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      std::ostringstream os;
      os << key << " must be strictly positive (got " << value << ")";
      throw Error(ErrorCode::InvalidParams, os.str());
    }
  }

  const double lhs = (policy.rule == PositivityRule::Feller ? 2.0 : 1.0) * p.kappa * p.theta;
  const double rhs = p.sigma_vol * p.sigma_vol;
  std::vector<std::string> warnings;
  if (lhs < rhs) {
    std::ostringstream os;
    os << (policy.rule == PositivityRule::Feller ? "feller condition 2*kappa*theta"
                                                 : "novikov condition kappa*theta")
       << " = " << lhs << " < sigma_vol^2 = " << rhs;
    if (policy.enforce) throw Error(ErrorCode::InvalidParams, os.str());
    warnings.push_back(os.str());
  }

  const double kappa = p.kappa, theta = p.theta, xi = p.sigma_vol;
  const double a = p.a, b = p.b, k = p.k;
  ModelSpec m = generic_model(
      "heston_vasicek",
      [](double x) { return std::sqrt(std::max(x, 0.0)); },
      [](double x) { return 0.5 / std::sqrt(std::max(x, kSqrtDerivativeFloor)); },
      [kappa, theta](double x) { return kappa * (theta - x); },
      [kappa](double) { return -kappa; },
      [xi](double x) { return xi * std::sqrt(std::max(x, 0.0)); },
      [xi](double x) { return 0.5 * xi / std::sqrt(std::max(x, kSqrtDerivativeFloor)); },
      [a, b](double x) { return a * (b - x); },
      [a](double) { return -a; },
      [k](double) { return k; },
      [](double) { return 0.0; },
      rho);
  m.kind = ModelKind::HestonVasicek;
  m.heston_vasicek = p;
  m.warnings = std::move(warnings);
  return m;
}

ModelSpec black_scholes_degenerate(double sigma_const, double r_const) {
  if (!(sigma_const > 0.0) || !std::isfinite(sigma_const)) {
    throw Error(ErrorCode::InvalidParams, "sigma must be strictly positive");
  }
  if (!std::isfinite(r_const)) throw Error(ErrorCode::InvalidParams, "rate must be finite");

  const auto zero = [](double) { return 0.0; };
  ModelSpec m = generic_model(
      "black_scholes", [sigma_const](double) { return sigma_const; }, zero, zero, zero, zero,
      zero, zero, zero, zero, zero, CorrelationTriple{});
  m.kind = ModelKind::BlackScholes;
  m.variance_degenerate = true;
  m.rate_degenerate = true;
  m.pinned_rate = r_const;
  m.warnings.emplace_back(
      "degenerate model: v and g vanish identically, uniform ellipticity does not hold");
  return m;
}

double ellipticity_constant(const ModelSpec& model, const Vector3& x) {
  const Matrix3 a = model.diffusion(x);
  Eigen::SelfAdjointEigenSolver<Matrix3> solver(a.transpose() * a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DerivativeProbe probe_derivatives(const ModelSpec& model, std::span<const double> variance_points,
                                  std::span<const double> rate_points) {
  DerivativeProbe worst;
  const auto check = [&worst](const char* name, const ScalarFunction& fn,
                              const ScalarFunction& deriv, double x) {
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    const double numeric = (fn(x + h) - fn(x - h)) / (2.0 * h);
    const double exact = deriv(x);
    const double err = std::abs(numeric - exact) / std::max(std::abs(exact), 1e-8);
    if (err > worst.max_relative_error || !std::isfinite(err)) {
      worst.max_relative_error = std::isfinite(err) ? err : HUGE_VAL;
      worst.worst_function = name;
      worst.worst_point = x;
    }
  };
  for (double x : variance_points) {
    check("sigma", model.sigma, model.sigma_prime, x);
    check("u", model.u, model.u_prime, x);
    check("v", model.v, model.v_prime, x);
  }
  for (double x : rate_points) {
    check("f", model.f, model.f_prime, x);
    check("g", model.g, model.g_prime, x);
  }
  return worst;
}

void InitialState::validate() const {
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw Error(ErrorCode::InvalidParams, "s0 must be > 0");
  if (!(v0 > 0.0) || !std::isfinite(v0)) throw Error(ErrorCode::InvalidParams, "v0 must be > 0");
  if (!std::isfinite(r0)) throw Error(ErrorCode::InvalidParams, "r0 must be finite");
}

void Payoff::validate() const {
  if (!(strike >= 0.0) || !std::isfinite(strike)) {
    throw Error(ErrorCode::InvalidParams, "strike must be >= 0");
  }
  if (!std::isfinite(level)) throw Error(ErrorCode::InvalidParams, "level must be finite");
}

double evaluate_payoff(const Payoff& p, double s_T) {
  switch (p.kind) {
    case PayoffKind::Call: return std::max(s_T - p.strike, 0.0);
    case PayoffKind::Put: return std::max(p.strike - s_T, 0.0);
    case PayoffKind::DigitalCall: return s_T > p.strike ? 1.0 : 0.0;
    case PayoffKind::Constant: return p.level;
    case PayoffKind::Identity: return s_T;
  }
  return 0.0;
}

std::string to_string(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::Call: return "call";
    case PayoffKind::Put: return "put";
    case PayoffKind::DigitalCall: return "digital_call";
    case PayoffKind::Constant: return "constant";
    case PayoffKind::Identity: return "identity";
  }
  return "unknown";
}

PayoffKind parse_payoff_kind(const std::string& name) {
  for (auto kind : {PayoffKind::Call, PayoffKind::Put, PayoffKind::DigitalCall,
                    PayoffKind::Constant, PayoffKind::Identity}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown payoff kind '" + name + "'");
}

}  // namespace hsv
