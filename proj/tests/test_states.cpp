#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nsk/errors.hpp"
#include "nsk/states.hpp"
#include "nsk/uncertainty.hpp"

namespace nsk {
namespace {

TEST(States, CoherentStateMapping) {
  const GaussianState g = from_coherent_state({2.0, 1.0, 0.5}, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(g.a, 2.0);
  EXPECT_EQ(g.b, 0.0);
  EXPECT_NEAR(g.x0, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.v0, 0.5 * std::sqrt(2.0), 1e-15);
}

TEST(States, CoherentStateSaturatesKennard) {
  const FluidCoefficients q = quantum_preset(1.0, 1.0).coefficients();
  for (const double c : {0.3, 1.0, 7.0}) {
    const GaussianState g = from_coherent_state({c, 0.4, -1.2}, 1.0, 1.0);
    EXPECT_NEAR(gaussian_uncertainty_product(g, q).std_product, 0.5, 1e-15);
  }
}

TEST(States, MinimumStateVelocityGradient) {
  // B = 2A xi (nu^2 + kappa)/(nu^2 + xi^2) = 6 * 0.5 * 3 / 1.25.
  const FluidCoefficients c{1.0, 1.0, 2.0, 0.5};
  const GaussianState g = make_min_uncertainty_state(c, 3.0, 0.2, -0.1);
  EXPECT_NEAR(g.b, 7.2, 1e-14);
  EXPECT_EQ(g.x0, 0.2);
  EXPECT_EQ(g.v0, -0.1);
  // |kappa - xi^2| / sqrt(1 + xi^2) = 1.75 / sqrt(1.25).
  EXPECT_NEAR(gaussian_uncertainty_product(g, c).std_product, 1.75 / std::sqrt(1.25),
              1e-14);
  EXPECT_NEAR(min_std_product(c), 1.75 / std::sqrt(1.25), 1e-14);
}

TEST(States, MinimumStateRejectsUnphysicalInput) {
  EXPECT_THROW(make_min_uncertainty_state({1.0, 1.0, -0.1, 0.0}, 1.0, 0, 0),
               ValidationError);
  EXPECT_THROW(make_min_uncertainty_state({1.0, 1.0, 0.1, -0.1}, 1.0, 0, 0),
               ValidationError);
  EXPECT_THROW(make_min_uncertainty_state({1.0, 1.0, 0.1, 0.1}, 0.0, 0, 0),
               ValidationError);
  EXPECT_THROW(GaussianState::create(-1.0, 0.0, 0.0, 0.0), ValidationError);
}

TEST(States, InviscidMinimum) {
  EXPECT_DOUBLE_EQ(inviscid_minimum(0.25, 0.5, 1.0), 0.5);
  EXPECT_THROW(inviscid_minimum(-1.0, 1.0, 1.0), ValidationError);
}

TEST(States, EulerKortewegRoots) {
  // C_pre = 0: A = omega / (2 sqrt kappa).
  EXPECT_NEAR(euler_korteweg_stationary(1.0, 0.0, 0.25, 1.0).a, 1.0, 1e-15);
  EXPECT_NEAR(euler_korteweg_stationary(3.0, 0.0, 0.25, 1.0).a, 3.0, 1e-15);
  // C_pre = 1, kappa = 1/4, omega = 1: A^2 + 2A - 1 = 0.
  EXPECT_NEAR(euler_korteweg_stationary(1.0, 1.0, 0.25, 1.0).a, std::sqrt(2.0) - 1.0,
              1e-15);
}

TEST(States, EulerKortewegRootSolvesQuadraticWithoutCancellation) {
  // Large pressure, tiny kappa: the naive (disc - p)/(4 kappa) loses all digits.
  const double kappa = 1e-12, c_pre = 1e3, omega = 1.0, mass = 2.0;
  const double a = euler_korteweg_stationary(omega, c_pre, kappa, mass).a;
  const double residual = 4.0 * kappa * a * a + 2.0 * c_pre / mass * a - omega * omega;
  EXPECT_NEAR(residual, 0.0, 1e-14);
  EXPECT_NEAR(a, mass * omega * omega / (2.0 * c_pre), 1e-14);
}

TEST(States, FineGridsAcrossOriginAreUniform) {
  const GaussianState g = GaussianState::create(1.0, 0.0, 0.0, 0.0);
  for (const std::size_t n : {16384u, 65536u, 262145u}) {
    EXPECT_NO_THROW(sample_on_grid(g, uniform_grid(-8.0, 8.0, n))) << n;
    EXPECT_NO_THROW(sample_on_grid(g, uniform_grid(-1e3, 1e3, n))) << n;
  }
  std::vector<double> x = uniform_grid(-8.0, 8.0, 1024);
  x[512] += 1e-9;
  const std::vector<double> rho(x.size(), 1.0 / 16.0);
  const std::vector<double> v(x.size(), 0.0);
  EXPECT_THROW(FluidField1D::create(x, rho, v, std::nullopt), ValidationError);
}

TEST(States, SamplingReportsTruncation) {
  const GaussianState g = GaussianState::create(1.0, 0.0, 0.0, 0.0);
  const auto wide = sample_on_grid(g, uniform_grid(-8.0, 8.0, 2001));
  EXPECT_FALSE(wide.truncation_warning);
  EXPECT_NEAR(wide.grid_mass, 1.0, 1e-12);
  const auto narrow = sample_on_grid(g, uniform_grid(-2.0, 2.0, 401));
  EXPECT_TRUE(narrow.truncation_warning);
  EXPECT_NEAR(narrow.grid_mass, std::erf(2.0), 1e-4);
}

TEST(States, GaussianProductMatchesBoundForAnyB) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const FluidCoefficients c{0.2 + 3.0 * u(rng), 0.2 + 3.0 * u(rng), 4.0 * u(rng),
                              3.0 * u(rng)};
    const double a = 0.1 + 5.0 * u(rng);
    const GaussianState g = GaussianState::create(a, 20.0 * (u(rng) - 0.5), 0.0, 0.0);
    const double product = gaussian_uncertainty_product(g, c).variance_product;
    const double bound = uncertainty_bound(c, g.covariance_xv());
    EXPECT_NEAR(product, bound, 1e-12 * product);
    EXPECT_GE(gaussian_uncertainty_product(g, c).std_product,
              min_std_product(c) * (1.0 - 1e-14));
  }
}

}  // namespace
}  // namespace nsk
