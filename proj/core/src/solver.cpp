#include "nsk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "nsk/errors.hpp"

namespace nsk {
namespace {

constexpr std::size_t kGhosts = 4;

template <typename Real>
struct KernelInputs {
  std::span<const Real> rho;
  std::span<const Real> v;
  Real x_first;  // centre of cell 0
  Real dx;
  Real floor;    // absolute
  bool viscous;
};

template <typename Real>
struct Coeffs {
  Real mass, kappa, eta_per_density, mu, omega, center, eos_k, eos_gamma;
};

template <typename Real>
Coeffs<Real> coeffs_from(const SolverConfig& c) {
  const TransportSet t = c.params.transport();
  return {static_cast<Real>(c.params.mass()), static_cast<Real>(t.kappa),
          static_cast<Real>(t.eta_per_density),
          static_cast<Real>(c.params.mu()),
          static_cast<Real>(c.potential.omega),
          static_cast<Real>(c.potential.center),
          static_cast<Real>(c.eos.k), static_cast<Real>(c.eos.gamma)};
}

// Extends f by kGhosts cells on both sides.
template <typename Real>
std::vector<Real> extend(std::span<const Real> f, Boundary b, bool odd,
                         bool log_extrapolate) {
  const std::size_t n = f.size();
  std::vector<Real> e(n + 2 * kGhosts);
  std::copy(f.begin(), f.end(), e.begin() + kGhosts);
  const std::size_t lo = kGhosts;
  const std::size_t hi = kGhosts + n - 1;
  for (std::size_t g = 1; g <= kGhosts; ++g) {
    if (b == Boundary::periodic) {
      e[lo - g] = f[n - g];
      e[hi + g] = f[g - 1];
    } else if (log_extrapolate) {
      e[lo - g] = 3 * e[lo - g + 1] - 3 * e[lo - g + 2] + e[lo - g + 3];
      e[hi + g] = 3 * e[hi + g - 1] - 3 * e[hi + g - 2] + e[hi + g - 3];
    } else {
      const Real sign = odd ? Real(-1) : Real(1);
      e[lo - g] = sign * f[g - 1];
      e[hi + g] = sign * f[n - g];
    }
  }
  return e;
}

// 4th-order central first and second derivatives at extended index j.
template <typename Real>
inline Real d1(const std::vector<Real>& e, std::size_t j, Real dx) {
  return (e[j - 2] - 8 * e[j - 1] + 8 * e[j + 1] - e[j + 2]) / (12 * dx);
}

template <typename Real>
inline Real d2(const std::vector<Real>& e, std::size_t j, Real dx) {
  return (-e[j - 2] + 16 * e[j - 1] - 30 * e[j] + 16 * e[j + 1] - e[j + 2]) /
         (12 * dx * dx);
}

template <typename Real>
void check_density(std::span<const Real> rho) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] >= 0) || !std::isfinite(static_cast<double>(rho[i]))) {
      throw NumericalError("negative or non-finite density at cell " +
                               std::to_string(i),
                           0.0, -1);
    }
  }
}

// A maximal run of sub-floor cells, [first, first + len) modulo n on a
// periodic grid. The halves nearest each resolved neighbour are filled from
// that side.
struct FlooredRun {
  long long first = 0;
  long long len = 0;
  long long left_len = 0;  // cells filled from the left neighbour
  bool has_left = false;
  bool has_right = false;
};

template <typename Real>
std::vector<FlooredRun> floored_runs(std::span<const Real> rho, Real floor,
                                     Boundary boundary) {
  const auto n = static_cast<long long>(rho.size());
  const bool periodic = boundary == Boundary::periodic;
  auto floored = [&](long long m) {
    return rho[static_cast<std::size_t>((m % n + n) % n)] < floor;
  };
  long long start = 0;
  while (start < n && floored(start)) ++start;
  std::vector<FlooredRun> runs;
  if (start == n) return runs;  // nothing resolved: plain clipping
  const long long begin = periodic ? start : 0;
  const long long stop = periodic ? start + n : n;
  for (long long i = begin; i < stop;) {
    if (!floored(i)) {
      ++i;
      continue;
    }
    long long j = i;
    while (j < stop && floored(j)) ++j;
    FlooredRun r{i, j - i, 0, periodic || i > 0, periodic || j < n};
    r.left_len = r.has_left ? (r.has_right ? (r.len + 1) / 2 : r.len) : 0;
    runs.push_back(r);
    i = j;
  }
  return runs;
}

inline std::size_t wrap_index(long long m, std::size_t n) {
  const auto c = static_cast<long long>(n);
  return static_cast<std::size_t>((m % c + c) % c);
}

// Sub-floor cells carry no resolved dynamics; their acceleration follows the
// nearest resolved cell so the velocity field stays continuous.
template <typename Real>
void copy_acceleration(std::vector<Real>& dv, const std::vector<FlooredRun>& runs) {
  const std::size_t n = dv.size();
  for (const FlooredRun& r : runs) {
    if (r.has_left) {
      const Real a = dv[wrap_index(r.first - 1, n)];
      for (long long m = 0; m < r.left_len; ++m) dv[wrap_index(r.first + m, n)] = a;
    }
    if (r.has_right) {
      const Real a = dv[wrap_index(r.first + r.len, n)];
      for (long long m = r.left_len; m < r.len; ++m) dv[wrap_index(r.first + m, n)] = a;
    }
  }
}

template <typename Real>
void rhs_kernel(const KernelInputs<Real>& in, const Coeffs<Real>& k,
                Boundary boundary, std::vector<Real>& drho,
                std::vector<Real>& dv) {
  const std::size_t n = in.rho.size();
  check_density(in.rho);

  std::vector<Real> log_rho(n), flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_rho[i] = std::log(std::max(in.rho[i], in.floor));
    flux[i] = in.rho[i] * in.v[i];
  }
  const auto runs = floored_runs(in.rho, in.floor, boundary);
  const auto lr = extend<Real>(log_rho, boundary, false, true);
  const auto ve = extend<Real>(in.v, boundary, true, false);
  const auto me = extend<Real>(flux, boundary, true, false);
  const auto re = extend<Real>(in.rho, boundary, false, false);

  const std::size_t ne = lr.size();
  std::vector<Real> q(ne, Real(0)), h(ne);
  const bool isothermal = k.eos_gamma == Real(1);
  for (std::size_t j = 0; j < ne; ++j) {
    if (isothermal) {
      h[j] = k.eos_k / k.mass * lr[j];
    } else {
      h[j] = k.eos_k * k.eos_gamma / ((k.eos_gamma - 1) * k.mass) *
             std::exp((k.eos_gamma - 1) * lr[j]);
    }
  }
  if (k.kappa != Real(0)) {
    // s''/s with s = sqrt(rho) scaled by s_j, so deep tails cannot underflow.
    for (std::size_t j = 2; j + 2 < ne; ++j) {
      auto rel = [&](std::size_t m) { return std::exp(Real(0.5) * (lr[m] - lr[j])); };
      q[j] = (-rel(j - 2) + 16 * rel(j - 1) - 30 + 16 * rel(j + 1) - rel(j + 2)) /
             (12 * in.dx * in.dx);
    }
  }

  // Continuity in flux form. Faces touching a sub-floor cell use the donor
  // cell, which keeps the tails positive; the rest use the face flux whose
  // difference is the 4th-order central derivative.
  std::vector<Real> face(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    const std::size_t a = f + kGhosts - 1;
    const std::size_t b = a + 1;
    if (re[a] < in.floor || re[b] < in.floor) {
      const Real vf = Real(0.5) * (ve[a] + ve[b]);
      face[f] = vf > 0 ? re[a] * vf : re[b] * vf;
    } else {
      face[f] = (-me[a - 1] + 7 * me[a] + 7 * me[b] - me[b + 1]) / 12;
    }
  }

  drho.assign(n, Real(0));
  dv.assign(n, Real(0));
  const Real omega2 = k.omega * k.omega;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + kGhosts;
    const Real x = in.x_first + static_cast<Real>(i) * in.dx;
    const Real vx = d1(ve, j, in.dx);
    drho[i] = -(face[i + 1] - face[i]) / in.dx;
    Real acc = -in.v[i] * vx - omega2 * (x - k.center) - d1(h, j, in.dx);
    if (k.kappa != Real(0)) {
      acc += 2 * k.kappa * d1(q, j, in.dx);
    }
    if (in.viscous) {
      const Real rho_c = std::max(in.rho[i], in.floor);
      const Real vxx = d2(ve, j, in.dx);
      const Real shear = k.eta_per_density / k.mass;
      acc += (k.mu / (k.mass * rho_c) + shear) * vxx +
             shear * d1(lr, j, in.dx) * vx;
    }
    dv[i] = acc;
  }
  copy_acceleration(dv, runs);
}

double floor_for(std::span<const double> rho, double relative) {
  return relative * *std::max_element(rho.begin(), rho.end());
}

void require_grid_for(const FluidField1D& field, const SolverConfig& config) {
  if (field.size() < 16) {
    throw ValidationError("solver field needs at least 16 cells");
  }
  (void)config;
}

}  // namespace

void validate(const SolverConfig& c) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ValidationError(key + ": " + why);
  };
  if (!std::isfinite(c.x_min) || !std::isfinite(c.x_max) || !(c.x_max > c.x_min)) {
    fail("x_max", "domain must satisfy x_min < x_max");
  }
  if (c.n_cells < 16) fail("n_cells", "must be >= 16");
  if (!std::isfinite(c.dt) || !(c.dt > 0.0)) fail("dt", "must be > 0");
  if (!std::isfinite(c.t_end) || !(c.t_end > 0.0)) fail("t_end", "must be > 0");
  const TransportSet t = c.params.transport();
  if (t.kappa < 0.0) fail("alpha_b", "solver requires kappa >= 0");
  if (t.xi < 0.0) fail("alpha_a", "solver requires xi >= 0");
  if (!std::isfinite(c.eos.k) || c.eos.k < 0.0) fail("eos_k", "must be >= 0");
  if (!std::isfinite(c.eos.gamma) || c.eos.gamma < 1.0) {
    fail("eos_gamma", "must be >= 1");
  }
  if (!std::isfinite(c.potential.omega) || c.potential.omega < 0.0) {
    fail("potential_omega", "must be >= 0");
  }
  if (!std::isfinite(c.potential.center)) fail("potential_center", "must be finite");
  if (!(c.rho_floor > 0.0) || !(c.rho_floor < 1.0)) {
    fail("rho_floor", "must lie in (0, 1)");
  }
  if (c.diag_stride == 0) fail("diag_stride", "must be >= 1");
  if (!(c.c_safety > 0.0)) fail("c_safety", "must be > 0");
}

std::vector<double> cell_centers(const SolverConfig& config) {
  const double dx = (config.x_max - config.x_min) /
                    static_cast<double>(config.n_cells);
  std::vector<double> x(config.n_cells);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = config.x_min + (static_cast<double>(i) + 0.5) * dx;
  }
  return x;
}

double max_stable_dt(const SolverConfig& config, const FluidField1D& initial) {
  validate(config);
  const double dx = initial.spacing();
  const TransportSet t = config.params.transport();
  const double mass = config.params.mass();
  const auto rho = initial.rho();
  const double rho_max = *std::max_element(rho.begin(), rho.end());
  const double floor_abs = config.rho_floor * rho_max;

  double bound = std::numeric_limits<double>::infinity();
  const double xi_eff = 2.0 * t.xi + config.params.mu() / (mass * floor_abs);
  if (xi_eff > 0.0) bound = std::min(bound, dx * dx / (2.0 * xi_eff));
  if (t.kappa > 0.0) bound = std::min(bound, dx * dx / (2.0 * std::sqrt(t.kappa)));

  double v_max = 0.0;
  for (const double v : initial.v()) v_max = std::max(v_max, std::abs(v));
  const double c_s = std::sqrt(config.eos.k * config.eos.gamma *
                               std::pow(rho_max, config.eos.gamma - 1.0) / mass);
  if (v_max + c_s > 0.0) bound = std::min(bound, dx / (v_max + c_s));
  return config.c_safety * bound;
}

Rates spatial_rhs(const FluidField1D& field, const SolverConfig& config) {
  validate(config);
  require_grid_for(field, config);
  const KernelInputs<double> in{field.rho(), field.v(), field.grid().front(),
                                field.spacing(),
                                floor_for(field.rho(), config.rho_floor), true};
  Rates r;
  rhs_kernel(in, coeffs_from<double>(config), config.boundary, r.drho_dt,
             r.dv_dt);
  return r;
}

double stationarity_residual(const FluidField1D& field,
                             const SolverConfig& config) {
  validate(config);
  require_grid_for(field, config);
  const KernelInputs<double> in{field.rho(), field.v(), field.grid().front(),
                                field.spacing(),
                                floor_for(field.rho(), config.rho_floor), false};
  std::vector<double> drho, dv;
  rhs_kernel(in, coeffs_from<double>(config), config.boundary, drho, dv);
  double worst = 0.0;
  for (const double a : dv) worst = std::max(worst, std::abs(a));
  return worst;
}

double stationarity_residual(const GaussianState& state,
                             const SolverConfig& config) {
  using Real = long double;
  validate(config);
  const std::size_t n = config.n_cells;
  const Real dx = (static_cast<Real>(config.x_max) - config.x_min) / n;
  const Real x_first = static_cast<Real>(config.x_min) + dx / 2;
  const Real a = state.a;
  const Real norm = std::sqrt(a / std::numbers::pi_v<Real>);
  std::vector<Real> rho(n), v(n);
  Real peak = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Real x = x_first + static_cast<Real>(i) * dx;
    const Real d = x - static_cast<Real>(state.x0);
    rho[i] = norm * std::exp(-a * d * d);
    v[i] = static_cast<Real>(state.v0) + static_cast<Real>(state.b) * x;
    peak = std::max(peak, rho[i]);
  }
  const KernelInputs<Real> in{rho, v, x_first, dx,
                              static_cast<Real>(config.rho_floor) * peak, false};
  std::vector<Real> drho, dv;
  rhs_kernel(in, coeffs_from<Real>(config), config.boundary, drho, dv);
  Real worst = 0;
  for (const Real r : dv) worst = std::max(worst, std::abs(r));
  return static_cast<double>(worst);
}

Trajectory evolve(const FluidField1D& initial, const SolverConfig& config,
                  const SnapshotObserver& observer) {
  validate(config);
  if (initial.size() != config.n_cells) {
    throw ValidationError("n_cells: initial field has " +
                          std::to_string(initial.size()) + " samples");
  }
  const std::vector<double> x = cell_centers(config);
  const double dx = x[1] - x[0];
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(initial.grid()[i] - x[i]) > 1e-9 * dx) {
      throw ValidationError("initial field is not sampled on the cell centres");
    }
  }
  const double dt_max = max_stable_dt(config, initial);
  if (config.dt > dt_max) {
    throw ValidationError("dt: " + std::to_string(config.dt) +
                          " violates the stability guard (max " +
                          std::to_string(dt_max) + ")");
  }

  const std::size_t n = config.n_cells;
  const auto coeffs = coeffs_from<double>(config);
  const FluidCoefficients fc = config.params.coefficients();
  const double floor_abs = floor_for(initial.rho(), config.rho_floor);

  std::vector<double> rho(initial.rho().begin(), initial.rho().end());
  std::vector<double> v(initial.v().begin(), initial.v().end());

  Trajectory traj;
  auto record = [&](double t) {
    auto snap = FluidField1D::create(x, rho, v, std::nullopt);
    DiagnosticRow row;
    row.t = t;
    for (std::size_t i = 0; i < n; ++i) {
      row.mass += rho[i];
      row.clipped_mass += std::max(0.0, floor_abs - rho[i]);
    }
    row.mass *= dx;
    row.clipped_mass *= dx;
    row.report = uncertainty_report(snap, fc, kTrajectoryTolerance);
    if (observer) observer(t, snap);
    traj.times.push_back(t);
    traj.diagnostics.push_back(row);
    traj.snapshots.push_back(std::move(snap));
  };

  const auto n_steps = static_cast<long long>(
      std::ceil(config.t_end / config.dt - 1e-9));
  std::vector<double> k_rho[4], k_v[4];
  std::vector<double> stage_rho(n), stage_v(n);
  auto eval = [&](const std::vector<double>& r, const std::vector<double>& u,
                  int s, double t, long long step) {
    try {
      rhs_kernel(KernelInputs<double>{r, u, x.front(), dx, floor_abs, true},
                 coeffs, config.boundary, k_rho[s], k_v[s]);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("instability: ") + e.what() +
                               " at t = " + std::to_string(t),
                           t, step);
    }
  };

  record(0.0);
  double t = 0.0;
  for (long long step = 1; step <= n_steps; ++step) {
    const double h = (step == n_steps) ? config.t_end - t : config.dt;
    eval(rho, v, 0, t, step);
    for (std::size_t i = 0; i < n; ++i) {
      stage_rho[i] = rho[i] + 0.5 * h * k_rho[0][i];
      stage_v[i] = v[i] + 0.5 * h * k_v[0][i];
    }
    eval(stage_rho, stage_v, 1, t + 0.5 * h, step);
    for (std::size_t i = 0; i < n; ++i) {
      stage_rho[i] = rho[i] + 0.5 * h * k_rho[1][i];
      stage_v[i] = v[i] + 0.5 * h * k_v[1][i];
    }
    eval(stage_rho, stage_v, 2, t + 0.5 * h, step);
    for (std::size_t i = 0; i < n; ++i) {
      stage_rho[i] = rho[i] + h * k_rho[2][i];
      stage_v[i] = v[i] + h * k_v[2][i];
    }
    eval(stage_rho, stage_v, 3, t + h, step);
    for (std::size_t i = 0; i < n; ++i) {
      rho[i] += h / 6.0 *
                (k_rho[0][i] + 2.0 * k_rho[1][i] + 2.0 * k_rho[2][i] + k_rho[3][i]);
      v[i] += h / 6.0 * (k_v[0][i] + 2.0 * k_v[1][i] + 2.0 * k_v[2][i] + k_v[3][i]);
    }
    t = (step == n_steps) ? config.t_end : t + h;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(rho[i] >= 0.0) || !std::isfinite(rho[i]) || !std::isfinite(v[i])) {
        throw NumericalError("instability: negative or non-finite density at t = " +
                                 std::to_string(t),
                             t, step);
      }
    }
    if (step % static_cast<long long>(config.diag_stride) == 0 || step == n_steps) {
      record(t);
    }
  }
  return traj;
}

}  // namespace nsk
