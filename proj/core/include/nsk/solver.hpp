#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nsk/field.hpp"
#include "nsk/params.hpp"
#include "nsk/states.hpp"
#include "nsk/uncertainty.hpp"

namespace nsk {

enum class Boundary {
  periodic,
  /// Zero mass flux through the walls: v and rho v are mirrored with odd
  /// parity, ghost densities continue ln(rho) quadratically.
  reflecting,
};

/// P = k rho^gamma; gamma = 1 gives P = C_pre rho.
struct PolytropicEos {
  double k = 0.0;
  double gamma = 1.0;
};

/// V = M omega^2 (x - center)^2 / 2.
struct HarmonicPotential {
  double omega = 0.0;
  double center = 0.0;
};

struct SolverConfig {
  ModelParameters params = natural_units();
  double x_min = -8.0;
  double x_max = 8.0;
  std::size_t n_cells = 512;
  double dt = 1e-4;
  double t_end = 1.0;
  Boundary boundary = Boundary::periodic;
  PolytropicEos eos;
  HarmonicPotential potential;
  /// Density floor applied before logarithms, relative to max(rho) at t = 0.
  double rho_floor = 1e-14;
  std::size_t diag_stride = 100;
  double c_safety = 0.4;
};

/// Structural checks: n_cells >= 16, dt > 0, t_end > 0, kappa >= 0, xi >= 0,
/// eos.k >= 0, eos.gamma >= 1, omega >= 0, 0 < rho_floor < 1.
void validate(const SolverConfig& config);

/// Cell centres x_min + (i + 1/2) dx, dx = (x_max - x_min) / n_cells.
std::vector<double> cell_centers(const SolverConfig& config);

/// Largest dt accepted by the stability guard for this initial state:
///   c_safety * min(dx^2 / (2 xi_eff), dx^2 / (2 sqrt(kappa)),
///                  dx / (max|v| + c_s,max)),
/// xi_eff = 2 xi + mu / (M rho_floor_abs), c_s^2 = k gamma rho^(gamma-1) / M.
double max_stable_dt(const SolverConfig& config, const FluidField1D& initial);

struct Rates {
  std::vector<double> drho_dt;
  std::vector<double> dv_dt;
};

/// Continuity and NSK momentum right-hand sides on the field's grid
/// (which must be the cell-centred grid of a domain with config.boundary):
///   drho/dt = -d(rho v)
///   dv/dt   = -v dv - omega^2 (x - c) + 2 kappa d(s''/s)
///             - (1/(M rho)) d{P - (mu + eta) dv},  s = sqrt(rho).
/// Derivatives are 4th-order central differences. The floor is
/// config.rho_floor * max(rho); ln(rho) is clipped there. Faces next to a
/// sub-floor cell use a donor-cell flux, and sub-floor cells take the
/// acceleration of the nearest resolved cell. Throws NumericalError on
/// negative density.
Rates spatial_rhs(const FluidField1D& field, const SolverConfig& config);

/// max |dv/dt| with eta = mu = 0.
double stationarity_residual(const FluidField1D& field,
                             const SolverConfig& config);

/// Same residual for an analytic state sampled on the config's cell centres.
/// Sampling and evaluation run in long double so the value keeps converging
/// past the double round-off floor of the sampled data.
double stationarity_residual(const GaussianState& state,
                             const SolverConfig& config);

struct DiagnosticRow {
  double t = 0.0;
  double mass = 0.0;          ///< sum rho dx
  double clipped_mass = 0.0;  ///< sum max(0, floor - rho) dx
  UncertaintyReport report;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FluidField1D> snapshots;
  std::vector<DiagnosticRow> diagnostics;
};

/// Called with (t, snapshot) at every diagnostic time, in order.
using SnapshotObserver = std::function<void(double, const FluidField1D&)>;

/// Tolerance of the per-row inequality check, relative to (1 + lhs).
inline constexpr double kTrajectoryTolerance = 1e-6;

/// Classical RK4 in time. Diagnostics every diag_stride steps and at t_end.
/// Throws ValidationError if dt exceeds max_stable_dt, NumericalError with
/// the offending time if a negative density appears.
Trajectory evolve(const FluidField1D& initial, const SolverConfig& config,
                  const SnapshotObserver& observer = {});

}  // namespace nsk
