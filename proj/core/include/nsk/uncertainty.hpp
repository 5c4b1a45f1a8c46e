#pragma once

#include <span>
#include <vector>

#include "nsk/field.hpp"
#include "nsk/params.hpp"

namespace nsk {

/// Self-normalised expectation: trapezoid(rho f) / trapezoid(rho) over the
/// whole grid. f must be sampled on the field's grid.
double expectation(const FluidField1D& field, std::span<const double> f);

/// Forward/backward momentum fields on the retained support, from
///   p_- - p_+ = 2M [(kappa/nu^2)(-nu d ln rho) - (xi/nu) v]
///   p_- + p_+ = 2M [xi d ln rho + v].
struct MomentumFields {
  Support support;
  std::vector<double> p_plus;
  std::vector<double> p_minus;
};

MomentumFields momentum_fields(const FluidField1D& field,
                               const FluidCoefficients& c,
                               double relative_floor = kRelativeDensityFloor);

struct UncertaintyReport {
  double sigma2_x = 0.0;
  double sigma2_p = 0.0;
  double cov_xv = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double std_product = 0.0;
  double rhs_sqrt = 0.0;
  double margin = 0.0;
  bool holds = false;
};

/// Right-hand side of the position-momentum inequality at a given <dx dv>:
///   M^2 (xi^2 - kappa)^2/(nu^2 + xi^2)
///   + M^2 (1 + xi^2/nu^2) (cov - xi (nu^2 + kappa)/(nu^2 + xi^2))^2.
double uncertainty_bound(const FluidCoefficients& c, double cov_xv);

/// Moments on the retained support. holds = margin >= -tol (1 + |lhs|).
UncertaintyReport uncertainty_report(const FluidField1D& field,
                                     const FluidCoefficients& c, double tol,
                                     double relative_floor = kRelativeDensityFloor);

/// sigma_p^2 computed as <(dp_+)^2 + (dp_-)^2>/2 instead of the
/// two-term split; used to cross-check the quadrature.
double momentum_variance_direct(const FluidField1D& field,
                                const FluidCoefficients& c,
                                double relative_floor = kRelativeDensityFloor);

/// Closed-form viscous minimum of sigma_x sigma_p:
///   M nu |kappa/nu^2 - xi^2/nu^2| / sqrt(1 + xi^2/nu^2).
double min_std_product(const FluidCoefficients& c);

}  // namespace nsk
