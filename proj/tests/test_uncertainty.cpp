#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nsk/errors.hpp"
#include "nsk/field.hpp"
#include "nsk/states.hpp"
#include "nsk/uncertainty.hpp"

namespace nsk {
namespace {

FluidField1D gaussian_field(const GaussianState& g, double half_width_sigmas,
                            std::size_t n) {
  const double s = std::sqrt(g.variance());
  return sample_on_grid(g, uniform_grid(g.x0 - half_width_sigmas * s,
                                        g.x0 + half_width_sigmas * s, n))
      .field;
}

TEST(Uncertainty, QuantumGroundStateMoments) {
  // sigma_x^2 = 1/(2A), sigma_p^2 = hbar^2 A / 2.
  const FluidCoefficients q = quantum_preset(1.0, 1.0).coefficients();
  const GaussianState g = GaussianState::create(3.0, 0.0, 0.5, 2.0);
  const UncertaintyReport r = uncertainty_report(gaussian_field(g, 9.0, 2001), q, 1e-9);
  EXPECT_NEAR(r.sigma2_x, 1.0 / 6.0, 1e-11);
  EXPECT_NEAR(r.sigma2_p, 1.5, 1e-10);
  EXPECT_NEAR(r.cov_xv, 0.0, 1e-12);
  EXPECT_NEAR(r.std_product, 0.5, 1e-10);
  EXPECT_NEAR(r.rhs_sqrt, 0.5, 1e-12);
  EXPECT_TRUE(r.holds);
}

TEST(Uncertainty, BoundAtOptimalCovarianceIsTheMinimum) {
  const FluidCoefficients c{1.3, 0.7, 0.9, 0.4};
  const double best = uncertainty_bound(c, optimal_covariance(c));
  EXPECT_NEAR(std::sqrt(best), min_std_product(c), 1e-14);
  for (const double d : {-1.0, -1e-3, 1e-3, 2.0}) {
    EXPECT_GT(uncertainty_bound(c, optimal_covariance(c) + d), best);
  }
}

TEST(Uncertainty, NavierStokesFourierLimit) {
  // kappa = 0: minimum M xi^2 / sqrt(nu^2 + xi^2).
  const FluidCoefficients c{2.0, 1.0, 0.0, 0.5};
  EXPECT_NEAR(min_std_product(c), 2.0 * 0.25 / std::sqrt(1.25), 1e-15);
}

TEST(Uncertainty, GaussianQuadratureMatchesClosedForm) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const FluidCoefficients c{0.5 + u(rng), 0.5 + u(rng), 3.0 * u(rng), 2.0 * u(rng)};
    const GaussianState g =
        GaussianState::create(0.3 + 3.0 * u(rng), 4.0 * (u(rng) - 0.5), u(rng), u(rng));
    const UncertaintyReport r = uncertainty_report(gaussian_field(g, 10.0, 2049), c, 1e-6);
    const double closed = gaussian_uncertainty_product(g, c).variance_product;
    EXPECT_NEAR(r.lhs, closed, 1e-8 * closed);
    EXPECT_NEAR(r.cov_xv, g.covariance_xv(), 1e-9 * (1.0 + std::abs(g.covariance_xv())));
    // Gaussians saturate the Cauchy-Schwarz step.
    EXPECT_NEAR(r.margin, 0.0, 1e-8 * (1.0 + r.lhs));
    EXPECT_TRUE(r.holds);
  }
}

TEST(Uncertainty, DirectMomentumVarianceAgrees) {
  const FluidCoefficients c{1.0, 0.8, 0.6, 0.3};
  const auto x = uniform_grid(-8.0, 8.0, 1601);
  std::vector<double> rho(x.size()), v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    rho[i] = std::exp(-x[i] * x[i]) * (1.0 + 0.5 * std::sin(x[i]));
    v[i] = std::tanh(x[i]) + 0.1 * x[i] * x[i];
  }
  const auto f = FluidField1D::create(x, rho, v, std::nullopt);
  const UncertaintyReport r = uncertainty_report(f, c, 1e-6);
  EXPECT_NEAR(momentum_variance_direct(f, c), r.sigma2_p, 1e-12 * r.sigma2_p);
}

TEST(Uncertainty, MomentumFieldsByHand) {
  // rho = Gaussian (A = 1): d ln rho = -2x. With v = 0.5:
  //   p_- - p_+ = 2M[(kappa/nu^2)(2 nu x) - (xi/nu) v]
  //   p_- + p_+ = 2M[-2 xi x + v].
  const FluidCoefficients c{1.5, 0.5, 0.2, 0.3};
  const auto f = sample_on_grid(GaussianState::create(1.0, 0.0, 0.0, 0.5),
                                uniform_grid(-4.0, 4.0, 801)).field;
  const MomentumFields p = momentum_fields(f, c);
  for (std::size_t i = 0; i < p.p_plus.size(); i += 97) {
    const double x = f.grid()[p.support.first + i];
    const double diff = 3.0 * (0.8 * 2.0 * 0.5 * x - 0.6 * 0.5);
    const double sum = 3.0 * (-0.6 * x + 0.5);
    EXPECT_NEAR(p.p_minus[i] - p.p_plus[i], diff, 1e-11);
    EXPECT_NEAR(p.p_minus[i] + p.p_plus[i], sum, 1e-11);
  }
}

TEST(Uncertainty, ExpectationIsSelfNormalised) {
  const auto f = sample_on_grid(GaussianState::create(2.0, 0.0, 0.0, 0.0),
                                uniform_grid(-3.0, 3.0, 601)).field;
  std::vector<double> one(f.size(), 1.0), x(f.grid().begin(), f.grid().end());
  EXPECT_NEAR(expectation(f, one), 1.0, 1e-15);
  EXPECT_NEAR(expectation(f, x), 0.0, 1e-15);
  EXPECT_THROW(expectation(f, std::vector<double>(3, 1.0)), ValidationError);
}

TEST(Uncertainty, SupportGapIsRejected) {
  const auto x = uniform_grid(-5.0, 5.0, 101);
  std::vector<double> rho(x.size()), v(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    rho[i] = std::exp(-(x[i] - 2.5) * (x[i] - 2.5)) + std::exp(-(x[i] + 2.5) * (x[i] + 2.5));
  }
  rho[50] = 0.0;
  const auto f = FluidField1D::create(x, rho, v, std::nullopt);
  EXPECT_THROW(uncertainty_report(f, {1.0, 1.0, 0.25, 0.0}, 1e-6), ValidationError);
}

TEST(Uncertainty, TailsBelowFloorAreTrimmed) {
  const auto x = uniform_grid(-40.0, 40.0, 801);
  std::vector<double> rho(x.size()), v(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) rho[i] = std::exp(-x[i] * x[i]);
  const auto f = FluidField1D::create(x, rho, v, std::nullopt);
  const Support s = retained_support(f);
  // exp(-x^2) >= 1e-12 for |x| <= 5.256...
  EXPECT_NEAR(f.grid()[s.first], -5.2, 1e-12);
  EXPECT_NEAR(f.grid()[s.last], 5.2, 1e-12);
}

TEST(Uncertainty, HoldsFlagFollowsTolerance) {
  // A minimum state sits on the bound; holds must equal the
  // documented test margin >= -tol (1 + |lhs|) for every tolerance.
  const FluidCoefficients c{1.0, 1.0, 2.0, 0.5};
  const GaussianState g = make_min_uncertainty_state(c, 1.0, 0.0, 0.0);
  const UncertaintyReport r = uncertainty_report(gaussian_field(g, 10.0, 2049), c, 1e-6);
  EXPECT_TRUE(r.holds);
  EXPECT_LT(std::abs(r.margin), 1e-6 * (1.0 + r.lhs));
  for (const double tol : {0.0, 1e-15, 1e-9}) {
    const UncertaintyReport t = uncertainty_report(gaussian_field(g, 10.0, 2049), c, tol);
    EXPECT_EQ(t.holds, t.margin >= -tol * (1.0 + std::abs(t.lhs)));
  }
}

// Property: the inequality holds for arbitrary smooth states, not only
// Gaussians. Random Gaussian mixtures with nonlinear velocity fields.
class MixtureProperty : public ::testing::TestWithParam<int> {};

TEST_P(MixtureProperty, InequalityHoldsForRandomStates) {
  std::mt19937_64 rng(9000 + GetParam());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto x = uniform_grid(-12.0, 12.0, 2401);
  for (int trial = 0; trial < 25; ++trial) {
    const FluidCoefficients c{0.5 + u(rng), 0.3 + 2.0 * u(rng), 4.0 * u(rng), 3.0 * u(rng)};
    const int components = 1 + static_cast<int>(3.0 * u(rng));
    double centers[3], widths[3], weights[3];
    for (int k = 0; k < components; ++k) {
      centers[k] = 6.0 * (u(rng) - 0.5);
      widths[k] = 0.3 + 1.5 * u(rng);
      weights[k] = 0.2 + u(rng);
    }
    const double b = 4.0 * (u(rng) - 0.5), amp = 2.0 * u(rng), wave = 0.5 + 2.0 * u(rng);
    std::vector<double> rho(x.size()), v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = 0.0;
      for (int k = 0; k < components; ++k) {
        const double z = (x[i] - centers[k]) / widths[k];
        r += weights[k] * std::exp(-0.5 * z * z);
      }
      rho[i] = r;
      v[i] = b * x[i] + amp * std::sin(wave * x[i]);
    }
    const auto f = FluidField1D::create(x, rho, v, std::nullopt);
    const UncertaintyReport rep = uncertainty_report(f, c, 1e-6);
    EXPECT_TRUE(rep.holds) << "margin " << rep.margin << " lhs " << rep.lhs;
    EXPECT_GE(rep.std_product, min_std_product(c) * (1.0 - 1e-6));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, MixtureProperty, ::testing::Range(0, 8));

}  // namespace
}  // namespace nsk
