#include "hsv/error.hpp"
#include "hsv/model.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

namespace hsv {
namespace {

// Random correlation triples with a strictly positive determinant.
CorrelationTriple random_valid_triple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.99, 0.99);
  for (;;) {
    CorrelationTriple rho{u(rng), u(rng), u(rng)};
    if (mixing_radicand(rho) > 1e-6) return rho;
  }
}

TEST(Mixing, ZeroCorrelationIsIdentity) {
  const auto mu = mixing_from_correlations({0.0, 0.0, 0.0});
  EXPECT_EQ(mu.mu1, 1.0);
  EXPECT_EQ(mu.mu2, 0.0);
  EXPECT_EQ(mu.mu3, 1.0);
}

TEST(Mixing, DefaultCorrelations) {
  // Cholesky factor of the correlation matrix, computed at 30 digits.
  const auto mu = mixing_from_correlations({-0.8, 0.5, 0.02});
  EXPECT_NEAR(mu.mu1, 0.6, 1e-15);
  EXPECT_NEAR(mu.mu2, 0.7, 1e-15);
  EXPECT_NEAR(mu.mu3, 0.509901951359278483, 1e-15);
}

TEST(Mixing, RejectsIndefiniteMatrixAndReportsRadicand) {
  try {
    mixing_from_correlations({0.9, 0.9, 0.0});
    FAIL() << "expected NonPositiveSemiDefinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveSemiDefinite);
    EXPECT_NE(std::string(e.what()).find("-0.62"), std::string::npos) << e.what();
  }
  EXPECT_NEAR(mixing_radicand({0.9, 0.9, 0.0}), -0.62, 1e-15);
}

TEST(Mixing, RejectsSingularMatrix) {
  // rho23 = rho12 * rho13 + mu1 * sqrt(1 - rho13^2 ...) chosen to make the determinant zero.
  const double r12 = 0.6, r13 = 0.0, r23 = 0.8;
  EXPECT_NEAR(mixing_radicand({r12, r13, r23}), 0.0, 1e-15);
  EXPECT_THROW(mixing_from_correlations({r12, r13, r23}), Error);
}

TEST(Mixing, RejectsCorrelationOutsideOpenInterval) {
  try {
    mixing_from_correlations({1.0, 0.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
  }
}

TEST(Mixing, ReconstructExamples) {
  const auto zero = reconstruct_correlations({1.0, 0.0, 1.0}, 0.0);
  EXPECT_EQ(zero.rho12, 0.0);
  EXPECT_EQ(zero.rho13, 0.0);
  EXPECT_EQ(zero.rho23, 0.0);

  const auto mu = mixing_from_correlations({-0.8, 0.5, 0.02});
  const auto rho = reconstruct_correlations(mu, -0.8);
  EXPECT_NEAR(rho.rho12, -0.8, 1e-12);
  EXPECT_NEAR(rho.rho13, 0.5, 1e-12);
  EXPECT_NEAR(rho.rho23, 0.02, 1e-12);
}

TEST(Mixing, RoundTripAndUnitRowsProperty) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto rho = random_valid_triple(rng);
    const auto mu = mixing_from_correlations(rho);
    EXPECT_GT(mu.mu1, 0.0);
    EXPECT_GT(mu.mu3, 0.0);
    EXPECT_NEAR(rho.rho12 * rho.rho12 + mu.mu1 * mu.mu1, 1.0, 1e-12);
    EXPECT_NEAR(rho.rho13 * rho.rho13 + mu.mu2 * mu.mu2 + mu.mu3 * mu.mu3, 1.0, 1e-12);
    EXPECT_NEAR(rho.rho12 * rho.rho13 + mu.mu1 * mu.mu2, rho.rho23, 1e-12);

    const auto back = reconstruct_correlations(mu, rho.rho12, rho.rho13);
    EXPECT_NEAR(back.rho12, rho.rho12, 1e-12);
    EXPECT_NEAR(back.rho13, rho.rho13, 1e-12);
    EXPECT_NEAR(back.rho23, rho.rho23, 1e-12);

    const auto again = mixing_from_correlations(back);
    EXPECT_NEAR(again.mu1, mu.mu1, 1e-12);
    EXPECT_NEAR(again.mu2, mu.mu2, 1e-12);
    EXPECT_NEAR(again.mu3, mu.mu3, 1e-12);

    // L L^T reproduces the correlation matrix.
    const Matrix3 l = mixing_matrix(rho, mu);
    EXPECT_LT((l * l.transpose() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(HestonVasicek, CoefficientFunctions) {
  const auto m = heston_vasicek_model({}, {-0.8, 0.5, 0.02});
  EXPECT_DOUBLE_EQ(m.sigma(0.04), 0.2);
  EXPECT_EQ(m.u(0.04), 0.0);
  EXPECT_DOUBLE_EQ(m.v(0.04), 0.04 * 0.2);
  EXPECT_DOUBLE_EQ(m.f(0.08), 0.0);
  EXPECT_EQ(m.g(0.3), 0.002);
  EXPECT_EQ(m.kind, ModelKind::HestonVasicek);
  EXPECT_TRUE(m.warnings.empty());
  EXPECT_FALSE(m.degenerate());
  // Square-root argument floored at zero.
  EXPECT_EQ(m.sigma(-0.01), 0.0);
}

TEST(HestonVasicek, SigmaPrimeClosedForm) {
  const auto m = heston_vasicek_model({}, {});
  for (double v : {0.01, 0.04, 1.0}) {
    EXPECT_NEAR(m.sigma_prime(v), 1.0 / (2.0 * std::sqrt(v)), 1e-10);
  }
}

TEST(HestonVasicek, DerivativesMatchCentralDifferences) {
  const auto m = heston_vasicek_model({1.5, 0.05, 0.2, 0.3, 0.04, 0.01}, {0.1, -0.2, 0.3});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> var(0.005, 1.5), rate(-0.1, 0.2);
  std::array<double, 5> vs{}, rs{};
  for (auto& x : vs) x = var(rng);
  for (auto& x : rs) x = rate(rng);
  const auto probe = probe_derivatives(m, vs, rs);
  EXPECT_LE(probe.max_relative_error, 1e-6) << probe.worst_function << " at " << probe.worst_point;
}

TEST(HestonVasicek, ProbeCatchesTranscriptionError) {
  auto m = heston_vasicek_model({}, {});
  m.sigma_prime = [](double v) { return 1.0 / std::sqrt(v); };  // missing factor 1/2
  const std::array<double, 2> vs{0.04, 0.09};
  const std::array<double, 1> rs{0.02};
  const auto probe = probe_derivatives(m, vs, rs);
  EXPECT_GT(probe.max_relative_error, 0.4);
  EXPECT_EQ(probe.worst_function, "sigma");
}

TEST(HestonVasicek, PositivityConditions) {
  // kappa * theta = 0.08 >= 0.0016 for the default parameters.
  EXPECT_NO_THROW(heston_vasicek_model({}, {}));

  HestonVasicekParams p;
  p.kappa = 1.0;
  p.theta = 0.04;
  p.sigma_vol = 0.25;  // kappa theta = 0.04 < 0.0625, 2 kappa theta = 0.08 >= 0.0625
  EXPECT_THROW(heston_vasicek_model(p, {}), Error);
  EXPECT_NO_THROW(heston_vasicek_model(p, {}, {PositivityRule::Feller, true}));

  const auto warned = heston_vasicek_model(p, {}, {PositivityRule::Novikov, false});
  ASSERT_EQ(warned.warnings.size(), 1u);
  EXPECT_NE(warned.warnings[0].find("novikov"), std::string::npos);
}

TEST(HestonVasicek, RejectsNonPositiveParameterNamingIt) {
  HestonVasicekParams p;
  p.a = 0.0;
  try {
    heston_vasicek_model(p, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
    EXPECT_NE(std::string(e.what()).find("a must"), std::string::npos) << e.what();
  }
}

TEST(HestonVasicek, UniformlyEllipticAtDefaultPoint) {
  const auto m = heston_vasicek_model({}, {-0.8, 0.5, 0.02});
  EXPECT_GT(ellipticity_constant(m, {100.0, 0.04, 0.02}), 0.0);
}

TEST(BlackScholesDegenerate, Construction) {
  const auto m = black_scholes_degenerate(0.2, 0.05);
  EXPECT_EQ(m.sigma(0.7), 0.2);
  EXPECT_EQ(m.sigma_prime(0.7), 0.0);
  EXPECT_EQ(m.v(0.04), 0.0);
  EXPECT_EQ(m.g(0.05), 0.0);
  EXPECT_TRUE(m.variance_degenerate);
  EXPECT_TRUE(m.rate_degenerate);
  ASSERT_TRUE(m.pinned_rate.has_value());
  EXPECT_EQ(*m.pinned_rate, 0.05);
  // The ellipticity violation is a warning, not an error.
  EXPECT_FALSE(m.warnings.empty());
  EXPECT_NEAR(ellipticity_constant(m, {100.0, 0.04, 0.05}), 0.0, 1e-14);
  EXPECT_THROW(black_scholes_degenerate(0.0, 0.05), Error);
  EXPECT_THROW(black_scholes_degenerate(-0.1, 0.05), Error);
}

TEST(Payoff, Evaluation) {
  EXPECT_EQ(evaluate_payoff(Payoff::call(100.0), 103.0), 3.0);
  EXPECT_EQ(evaluate_payoff(Payoff::call(100.0), 97.0), 0.0);
  EXPECT_EQ(evaluate_payoff(Payoff::put(100.0), 97.0), 3.0);
  EXPECT_EQ(evaluate_payoff(Payoff::digital_call(100.0), 100.0), 0.0);
  EXPECT_EQ(evaluate_payoff(Payoff::digital_call(100.0), 100.0001), 1.0);
  EXPECT_EQ(evaluate_payoff(Payoff::constant(1.0), 55.0), 1.0);
  EXPECT_EQ(evaluate_payoff(Payoff::identity(), 55.0), 55.0);
  EXPECT_THROW(Payoff::call(-1.0).validate(), Error);
}

TEST(Payoff, KindNamesRoundTrip) {
  for (auto kind : {PayoffKind::Call, PayoffKind::Put, PayoffKind::DigitalCall, PayoffKind::Constant,
                    PayoffKind::Identity}) {
    EXPECT_EQ(parse_payoff_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_payoff_kind("asian"), Error);
}

TEST(InitialStateTest, Validation) {
  EXPECT_NO_THROW((InitialState{100.0, 0.04, -0.01}.validate()));
  EXPECT_THROW((InitialState{0.0, 0.04, 0.02}.validate()), Error);
  EXPECT_THROW((InitialState{100.0, 0.0, 0.02}.validate()), Error);
}

}  // namespace
}  // namespace hsv
