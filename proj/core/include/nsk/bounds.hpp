#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nsk {

/// SI reduced Planck constant [J s].
inline constexpr double kHbarSI = 1.054571817e-34;

/// Critical kinematic viscosities in units of nu, for k = kappa/nu^2.
struct XiStar {
  double min = 0.0;
  double max = 0.0;
};

/// xi*_min/nu = 0 for k < 1, sqrt(3k/2 - sqrt(k(1 + 5k/4))) otherwise;
/// xi*_max/nu = sqrt(3k/2 + sqrt(k(1 + 5k/4))).
XiStar xi_star_paper(double k);

struct Improvement {
  bool paper = false;   ///< (xi*_min/nu)^2 < s < (xi*_max/nu)^2
  bool direct = false;  ///< |k - s|/sqrt(1 + s) < k
};

/// Both predicates for k = kappa/nu^2 >= 0, s = xi^2/nu^2 >= 0. They agree
/// on k = 1 and differ elsewhere; both are reported.
Improvement improvement_region(double k, double s);

/// |k - s| / sqrt(1 + s): the viscous minimum in units of M nu.
double min_over_mnu(double k, double s);

struct PhaseDiagramCell {
  double k = 0.0;
  double s = 0.0;
  double min_over_mnu = 0.0;
  bool improves_paper = false;
  bool improves_direct = false;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Row-major (k outer, s inner) grid of nk x ns cells, endpoints included.
/// Cells are evaluated in parallel; the result order does not depend on it.
std::vector<PhaseDiagramCell> scan_phase_diagram(Range k_range, Range s_range,
                                                 std::size_t nk,
                                                 std::size_t ns);

struct CurvePoint {
  double xi_over_nu = 0.0;
  double std_product = 0.0;
};

/// kappa = nu^2 slice: M nu |1 - r^2| / sqrt(1 + r^2) at r = xi/nu.
std::vector<CurvePoint> min_curve(std::span<const double> xi_over_nu,
                                  double mass, double nu);

struct KssBounds {
  double xi_kss = 0.0;               ///< hbar / (8 pi M)
  double kappa_lb = 0.0;             ///< hbar nu / (2 M)
  std::optional<double> nu_lb;       ///< hbar / (4 M alpha_B)
  double xi_star_max_quantum = 0.0;  ///< (sqrt(3)/2) hbar / M
  double ratio = 0.0;                ///< xi_star_max_quantum / xi_kss
};

/// nu_lb is computed only when alpha_b is given; alpha_b = 0 is rejected.
KssBounds kss_and_kappa_bounds(double mass, double nu, double hbar,
                               std::optional<double> alpha_b = std::nullopt);

struct MediaEstimate {
  double std_product = 0.0;             ///< M xi^2 / sqrt(nu^2 + xi^2)
  double in_units_of_half_hbar = 0.0;
};

/// kappa = 0 (Navier-Stokes-Fourier) minimum of sigma_x sigma_p.
MediaEstimate media_estimate(double mass, double xi, double nu, double hbar);

/// Room-temperature inputs for water [SI].
struct MediumInputs {
  double mass;
  double xi;
  double nu;
};
inline constexpr MediumInputs kLiquidWater{3e-26, 1e-6, 1e-9};
/// Vapor as printed (xi ~ 0.3e-6) and the reading that reproduces "60 x".
inline constexpr MediumInputs kWaterVaporPrinted{3e-26, 0.3e-6, 1e-4};
inline constexpr MediumInputs kWaterVaporAlt{3e-26, 3e-6, 1e-4};

}  // namespace nsk
