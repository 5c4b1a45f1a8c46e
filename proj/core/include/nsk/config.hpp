#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nsk/solver.hpp"
#include "nsk/states.hpp"

namespace nsk {

enum class InitialKind {
  gaussian,       ///< initial_a, initial_b, initial_x0, initial_v0
  min_state,      ///< minimum-uncertainty Gaussian for the run's parameters
  ek_stationary,  ///< stationary Gaussian for the potential and eos_k (gamma 1)
  file,           ///< snapshot CSV on the run's cell centres
};

struct InitialSpec {
  InitialKind kind = InitialKind::gaussian;
  double a = 1.0;
  double b = 0.0;
  double x0 = 0.0;
  double v0 = 0.0;
  std::filesystem::path file;
};

struct RunConfig {
  SolverConfig solver;
  InitialSpec initial;
};

/// Flat key=value text; '#' starts a comment. Keys mirror SolverConfig in
/// lower_snake_case (mass, nu, alpha_a, alpha_b, mu, hbar, preset, x_min,
/// x_max, n_cells, dt, t_end, boundary, eos_k, eos_gamma, potential_omega,
/// potential_center, rho_floor, diag_stride, c_safety) plus initial,
/// initial_a, initial_b, initial_x0, initial_v0 and initial_file.
/// dt = auto picks half the stability limit. Relative initial_file paths
/// resolve against base_dir. Unknown keys and bad values throw
/// ValidationError naming the key.
RunConfig parse_run_config(std::istream& in,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Initial field on the cell centres of config.solver.
FluidField1D build_initial_field(const RunConfig& config);

}  // namespace nsk
