#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nsk/errors.hpp"
#include "nsk/params.hpp"

namespace nsk {
namespace {

TEST(Params, TransportFromWeights) {
  // kappa = 2 aB nu^2, xi = aA (1 + 2 aB) nu, eta/rho = 2 M xi.
  const auto p = ModelParameters::create(2.0, 0.5, 0.3, 0.25);
  const TransportSet t = p.transport();
  EXPECT_DOUBLE_EQ(t.kappa, 0.125);
  EXPECT_DOUBLE_EQ(t.xi, 0.225);
  EXPECT_DOUBLE_EQ(t.eta_per_density, 0.9);
}

TEST(Params, QuantumPresetGivesMadelungCoefficients) {
  const auto p = quantum_preset(2.0, 3.0);
  EXPECT_EQ(p.alpha_a(), 0.0);
  EXPECT_EQ(p.alpha_b(), 0.5);
  EXPECT_DOUBLE_EQ(p.nu(), 0.75);
  // kappa = hbar^2 / (4 M^2), xi = 0.
  EXPECT_DOUBLE_EQ(p.transport().kappa, 9.0 / 16.0);
  EXPECT_EQ(p.transport().xi, 0.0);
}

TEST(Params, LagrangianDeterminantByHand) {
  // aB/2 - aA^2 (1/2 + aB)^2 at (0.2, 0.3): 0.15 - 0.04 * 0.64.
  const LagrangianMatrix m = lagrangian_matrix_det(0.2, 0.3);
  EXPECT_NEAR(m.det, 0.1244, 1e-15);
  EXPECT_FALSE(m.degenerate);
  EXPECT_NEAR(m.matrix.det(), m.det, 1e-15);
}

TEST(Params, DegenerateWeightsAreRejected) {
  EXPECT_TRUE(lagrangian_matrix_det(0.5, 0.5).degenerate);
  EXPECT_THROW(ModelParameters::create(1.0, 1.0, 0.5, 0.5), DegenerateParametersError);
  EXPECT_THROW(ModelParameters::create(1.0, 1.0, 0.0, 0.0), DegenerateParametersError);
  EXPECT_THROW(ModelParameters::from_transport(1.0, 2.0, 4.0, 2.0),
               DegenerateParametersError);
}

TEST(Params, InvalidInputsAreRejected) {
  EXPECT_THROW(ModelParameters::create(0.0, 1.0, 0.1, 0.1), ValidationError);
  EXPECT_THROW(ModelParameters::create(1.0, -1.0, 0.1, 0.1), ValidationError);
  EXPECT_THROW(ModelParameters::create(1.0, 1.0, NAN, 0.1), ValidationError);
  EXPECT_THROW(ModelParameters::create(1.0, 1.0, 0.1, 0.1, -1.0), ValidationError);
  EXPECT_THROW(ModelParameters::create(1.0, 1.0, 0.1, 0.1, 0.0, 0.0), ValidationError);
}

TEST(Params, FromTransportRoundTrips) {
  const auto p = ModelParameters::from_transport(1.5, 0.8, 0.3, 0.7, 0.1, 2.0);
  EXPECT_NEAR(p.transport().kappa, 0.3, 1e-15);
  EXPECT_NEAR(p.transport().xi, 0.7, 1e-15);
  EXPECT_EQ(p.mu(), 0.1);
  EXPECT_EQ(p.hbar(), 2.0);
}

TEST(Params, SpectrumOfQuantumPreset) {
  // G = [[1, 0], [0, 1]] when kappa = nu^2 and xi = 0.
  const auto s = momentum_matrix_spectrum(1.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(s.lambda_plus, 1.0);
  EXPECT_DOUBLE_EQ(s.lambda_minus, 1.0);
}

TEST(Params, SpectrumByHand) {
  // kappa = 3, xi = 1, nu = 1: G = [[3, -1], [-1, 1]], lambda = 2 +- sqrt 2.
  const auto s = momentum_matrix_spectrum(3.0, 1.0, 1.0);
  EXPECT_NEAR(s.lambda_plus, 2.0 + std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.lambda_minus, 2.0 - std::sqrt(2.0), 1e-15);
}

class ParamsProperty : public ::testing::TestWithParam<int> {};

TEST_P(ParamsProperty, DeterminantAndSpectrumIdentities) {
  std::mt19937_64 rng(1000 + GetParam());
  std::uniform_real_distribution<double> aa(-3.0, 3.0), ab(-2.0, 3.0), ln(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double alpha_a = aa(rng);
    const double alpha_b = ab(rng);
    const double nu = std::exp(ln(rng));
    if (lagrangian_matrix_det(alpha_a, alpha_b).degenerate) continue;
    const auto p = ModelParameters::create(1.0, nu, alpha_a, alpha_b);
    const TransportSet t = p.transport();
    const StructuralMatrices s = structural_matrices(p);
    const double scale = std::abs(t.kappa) + t.xi * t.xi;
    // Signed form: 4 nu^2 det M = kappa - xi^2.
    EXPECT_NEAR(4.0 * nu * nu * s.det_m_cal, t.kappa - t.xi * t.xi, 1e-12 * scale);
    const auto& g = s.spectrum;
    EXPECT_GE(g.lambda_plus, g.lambda_minus);
    EXPECT_NEAR(g.lambda_plus + g.lambda_minus, g.g.trace(),
                1e-12 * (std::abs(g.g.a11) + 1.0));
    EXPECT_NEAR(g.lambda_plus * g.lambda_minus, g.g.det(),
                1e-12 * (std::abs(g.g.a11) + g.g.a12 * g.g.a12));
    // Eigenvector equation (G - lambda) e = 0 through its determinant.
    for (const double lam : {g.lambda_plus, g.lambda_minus}) {
      const double d = (g.g.a11 - lam) * (g.g.a22 - lam) - g.g.a12 * g.g.a12;
      EXPECT_NEAR(d, 0.0, 1e-10 * (1.0 + lam * lam + std::abs(g.g.a11) + g.g.a12 * g.g.a12));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ParamsProperty, ::testing::Range(0, 4));

}  // namespace
}  // namespace nsk
