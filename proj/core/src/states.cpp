#include "nsk/states.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "nsk/errors.hpp"

namespace nsk {
namespace {

void require_coefficients(const FluidCoefficients& c) {
  if (!(c.mass > 0.0) || !(c.nu > 0.0) || !std::isfinite(c.mass) ||
      !std::isfinite(c.nu) || !std::isfinite(c.kappa) || !std::isfinite(c.xi)) {
    throw ValidationError("coefficients need finite kappa, xi and M, nu > 0");
  }
}

}  // namespace

GaussianState GaussianState::create(double a, double b, double x0, double v0) {
  if (!std::isfinite(a) || !(a > 0.0)) {
    throw ValidationError("gaussian state: A must be > 0");
  }
  if (!std::isfinite(b) || !std::isfinite(x0) || !std::isfinite(v0)) {
    throw ValidationError("gaussian state: B, x0, v0 must be finite");
  }
  return GaussianState{a, b, x0, v0};
}

double GaussianState::density(double x) const {
  const double d = x - x0;
  return std::sqrt(a / std::numbers::pi) * std::exp(-a * d * d);
}

double optimal_covariance(const FluidCoefficients& c) {
  const double nu2 = c.nu * c.nu;
  return c.xi * (nu2 + c.kappa) / (nu2 + c.xi * c.xi);
}

GaussianState make_min_uncertainty_state(const FluidCoefficients& c, double a,
                                         double x0, double v0) {
  require_coefficients(c);
  if (c.kappa < 0.0) {
    throw ValidationError("min-uncertainty state requires kappa >= 0");
  }
  if (c.xi < 0.0) {
    throw ValidationError("min-uncertainty state requires xi >= 0");
  }
  if (!std::isfinite(a) || !(a > 0.0)) {
    throw ValidationError("min-uncertainty state requires A > 0");
  }
  return GaussianState::create(a, 2.0 * a * optimal_covariance(c), x0, v0);
}

UncertaintyProduct gaussian_uncertainty_product(const GaussianState& state,
                                                const FluidCoefficients& c) {
  require_coefficients(c);
  if (!(state.a > 0.0)) {
    throw ValidationError("gaussian state: A must be > 0");
  }
  // sigma_x^2 = 1/(2A); the momentum moments of a Gaussian with v = v0 + Bx
  // give sigma_x^2 sigma_p^2 = M^2 [(b - xi)^2 + (kappa - xi b)^2 / nu^2],
  // b = B/(2A).
  const double b = state.covariance_xv();
  const double lin = b - c.xi;
  const double cap = (c.kappa - c.xi * b) / c.nu;
  UncertaintyProduct out;
  out.variance_product = c.mass * c.mass * (lin * lin + cap * cap);
  out.std_product = std::sqrt(out.variance_product);
  return out;
}

GaussianState from_coherent_state(const CoherentSpec& spec, double mass,
                                  double hbar) {
  if (!std::isfinite(spec.c) || !(spec.c > 0.0)) {
    throw ValidationError("coherent state: C must be > 0");
  }
  if (!(mass > 0.0) || !(hbar > 0.0)) {
    throw ValidationError("coherent state: mass and hbar must be > 0");
  }
  const double root_c = std::sqrt(spec.c);
  return GaussianState::create(spec.c, 0.0, spec.alpha_r / root_c,
                               hbar / mass * root_c * spec.alpha_i);
}

GaussianState euler_korteweg_stationary(double omega, double c_pre,
                                        double kappa, double mass) {
  if (!std::isfinite(omega) || !(omega > 0.0)) {
    throw ValidationError("euler-korteweg: omega must be > 0");
  }
  if (!std::isfinite(kappa) || !(kappa > 0.0)) {
    throw ValidationError("euler-korteweg: kappa must be > 0");
  }
  if (!std::isfinite(c_pre) || c_pre < 0.0) {
    throw ValidationError("euler-korteweg: C_pre must be >= 0");
  }
  if (!(mass > 0.0)) {
    throw ValidationError("euler-korteweg: mass must be > 0");
  }
  const double p = c_pre / mass;
  const double disc = std::sqrt(p * p + 4.0 * kappa * omega * omega);
  // (disc - p) / (4 kappa) written without the subtraction.
  const double a = omega * omega / (disc + p);
  return GaussianState::create(a, 0.0, 0.0, 0.0);
}

double inviscid_minimum(double kappa, double nu, double mass) {
  if (kappa < 0.0 || !(nu > 0.0) || !(mass > 0.0)) {
    throw ValidationError("inviscid minimum requires kappa >= 0, nu > 0, M > 0");
  }
  return mass * kappa / nu;
}

SampledState sample_on_grid(const GaussianState& state,
                            std::span<const double> grid) {
  std::vector<double> x(grid.begin(), grid.end());
  std::vector<double> rho(x.size());
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    rho[i] = std::max(state.density(x[i]), 1e-300);
    v[i] = state.velocity(x[i]);
  }
  auto field = FluidField1D::create(std::move(x), std::move(rho), std::move(v),
                                    std::nullopt);
  const double root_a = std::sqrt(state.a);
  const auto g = field.grid();
  const double outside =
      0.5 * std::erfc(root_a * (state.x0 - g.front())) +
      0.5 * std::erfc(root_a * (g.back() - state.x0));
  SampledState out{std::move(field), 0.0, outside > 1e-8};
  out.grid_mass = out.field.mass();
  return out;
}

}  // namespace nsk
