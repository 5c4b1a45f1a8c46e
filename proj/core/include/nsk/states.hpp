#pragma once

#include <span>

#include "nsk/field.hpp"
#include "nsk/params.hpp"

namespace nsk {

/// Gaussian density with affine velocity:
///   rho(x) = sqrt(A/pi) exp(-A (x - x0)^2),  v(x) = v0 + B x.
/// The x0 shift of the velocity is absorbed into v0.
struct GaussianState {
  double a = 1.0;
  double b = 0.0;
  double x0 = 0.0;
  double v0 = 0.0;

  static GaussianState create(double a, double b, double x0, double v0);

  double density(double x) const;
  double velocity(double x) const { return v0 + b * x; }
  double variance() const { return 0.5 / a; }
  /// <dx dv> = B / (2A).
  double covariance_xv() const { return 0.5 * b / a; }
};

/// <x|alpha> = (C/pi)^{1/4} exp(-(sqrt(C) x - alpha_R)^2 / 2)
///             exp(i alpha_I (sqrt(C) x - alpha_R / 2)).
struct CoherentSpec {
  double c = 1.0;
  double alpha_r = 0.0;
  double alpha_i = 0.0;
};

struct UncertaintyProduct {
  double variance_product = 0.0;  ///< sigma_x^2 sigma_p^2
  double std_product = 0.0;       ///< sigma_x sigma_p
};

/// <dx dv> that minimises the bound: xi (nu^2 + kappa) / (nu^2 + xi^2).
double optimal_covariance(const FluidCoefficients& c);

/// Gaussian with B = 2A xi (nu^2 + kappa)/(nu^2 + xi^2). Rejects A <= 0,
/// kappa < 0 and xi < 0.
GaussianState make_min_uncertainty_state(const FluidCoefficients& c, double a,
                                         double x0, double v0);

/// Exact sigma_x^2 sigma_p^2 of a Gaussian state from its moments:
///   M^2 [(b - xi)^2 + (kappa - xi b)^2 / nu^2],  b = B/(2A).
/// Equal to uncertainty_bound at <dx dv> = b: Gaussians saturate the
/// Cauchy-Schwarz step for every B.
UncertaintyProduct gaussian_uncertainty_product(const GaussianState& state,
                                                const FluidCoefficients& c);

/// Madelung decomposition of a coherent state: A = C, x0 = alpha_R/sqrt(C),
/// B = 0, v0 = (hbar/M) sqrt(C) alpha_I.
GaussianState from_coherent_state(const CoherentSpec& spec, double mass,
                                  double hbar);

/// Stationary Euler-Korteweg solution for V = M omega^2 x^2 / 2 and
/// P = C_pre rho: v = 0, x0 = 0 and A the positive root of
/// 4 kappa A^2 + (2 C_pre / M) A - omega^2 = 0.
GaussianState euler_korteweg_stationary(double omega, double c_pre,
                                        double kappa, double mass);

/// M kappa / nu.
double inviscid_minimum(double kappa, double nu, double mass);

struct SampledState {
  FluidField1D field;
  double grid_mass = 0.0;
  /// Set when more than 1e-8 of the unit mass lies outside the grid.
  bool truncation_warning = false;
};

/// Pointwise evaluation on a uniform grid; rho is floored at 1e-300.
SampledState sample_on_grid(const GaussianState& state,
                            std::span<const double> grid);

}  // namespace nsk
