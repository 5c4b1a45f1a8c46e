#include "nsk/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "nsk/bounds.hpp"
#include "nsk/csv.hpp"
#include "nsk/errors.hpp"
#include "nsk/params.hpp"
#include "nsk/sde.hpp"
#include "nsk/solver.hpp"
#include "nsk/states.hpp"
#include "nsk/uncertainty.hpp"

namespace nsk {
namespace {

// Collects failed checks; the first few end up in the detail string.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 4) failures_.push_back(what);
    ok_ = ok_ && ok;
  }
  void note(const std::string& s) { notes_ += notes_.empty() ? s : "; " + s; }
  bool ok() const { return ok_; }
  std::string detail() const {
    std::string out = notes_;
    for (const auto& f : failures_) out += (out.empty() ? "FAILED " : "; FAILED ") + f;
    return out;
  }

 private:
  bool ok_ = true;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> symmetric_grid(double center, double half_width,
                                   std::size_t n) {
  return uniform_grid(center - half_width, center + half_width, n);
}

void quantum_saturation(Checks& c) {
  const ModelParameters q = quantum_preset(1.0, 1.0);
  const FluidCoefficients fc = q.coefficients();
  const CoherentSpec spec{1.0, 0.3, 0.7};
  const GaussianState g = from_coherent_state(spec, 1.0, 1.0);
  const double closed = gaussian_uncertainty_product(g, fc).std_product;
  c.expect(std::abs(closed - 0.5) <= 1e-15, fmt("closed form %.17g != 0.5", closed));

  const double sigma = std::sqrt(g.variance());
  const auto s = sample_on_grid(g, symmetric_grid(g.x0, 8.0 * sigma, 2049));
  const auto r = uncertainty_report(s.field, fc, 1e-12);
  const double err = std::abs(r.std_product - 0.5);
  c.expect(err <= 1e-8, fmt("quadrature error %.3e", err));
  c.note(fmt("closed %.17g, quadrature error %.2e", closed, err));
}

void minimum_state_saturation(Checks& c) {
  std::mt19937_64 rng(0x5eed0002);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_closed = 0.0;
  double worst_quad = 0.0;
  int accepted = 0;
  while (accepted < 1000) {
    const double nu = 0.5 + 1.5 * unit(rng);
    const double kappa = 4.0 * unit(rng) * nu * nu;
    const double xi = 3.0 * unit(rng) * nu;
    if (std::abs(kappa - xi * xi) <= 0.01 * nu * nu) continue;
    ++accepted;
    const FluidCoefficients fc{0.5 + 1.5 * unit(rng), nu, kappa, xi};
    const double a = 0.5 + 1.5 * unit(rng);
    const double x0 = unit(rng) - 0.5;
    const GaussianState g = make_min_uncertainty_state(fc, a, x0, unit(rng));
    const double closed = gaussian_uncertainty_product(g, fc).variance_product;
    const double bound = uncertainty_bound(fc, g.covariance_xv());
    worst_closed = std::max(worst_closed, rel(closed, bound));

    const double sigma = std::sqrt(g.variance());
    const auto s = sample_on_grid(g, symmetric_grid(x0, 10.0 * sigma, 2049));
    const auto r = uncertainty_report(s.field, fc, 1e-6);
    worst_quad = std::max(worst_quad, rel(r.lhs, closed));
    if (!r.holds) c.expect(false, "report does not hold at a minimum state");
  }
  c.expect(worst_closed <= 1e-12, fmt("closed vs bound %.3e", worst_closed));
  c.expect(worst_quad <= 1e-6, fmt("quadrature vs closed %.3e", worst_quad));
  c.note(fmt("max rel error closed %.2e, quadrature %.2e", worst_closed, worst_quad));
}

void min_curve_check(Checks& c) {
  const double mass = 1.3;
  const double nu = 0.7;
  const std::vector<double> probes{0.0, 1.0, std::sqrt(3.0)};
  const auto p = min_curve(probes, mass, nu);
  c.expect(std::abs(p[0].std_product - mass * nu) <= 1e-15 * mass * nu,
           fmt("value at 0: %.17g", p[0].std_product));
  c.expect(p[1].std_product == 0.0, fmt("value at 1: %.3e", p[1].std_product));
  c.expect(std::abs(p[2].std_product - mass * nu) <= 1e-15 * mass * nu,
           fmt("value at sqrt3: %.17g", p[2].std_product));

  std::vector<double> r(301);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 3.0 * static_cast<double>(i) / 300.0;
  std::stringstream out;
  csv::write_curve(out, min_curve(r, mass, nu));
  std::string line;
  std::getline(out, line);
  std::vector<std::pair<double, double>> rows;
  while (std::getline(out, line)) {
    const auto comma = line.find(',');
    rows.emplace_back(std::stod(line.substr(0, comma)),
                      std::stod(line.substr(comma + 1)));
  }
  bool shape = rows.size() == r.size();
  for (std::size_t i = 1; shape && i < rows.size(); ++i) {
    const bool falling = rows[i].first <= 1.0;
    shape = falling ? rows[i].second < rows[i - 1].second
                    : rows[i].second > rows[i - 1].second;
  }
  c.expect(shape, "CSV not strictly decreasing then increasing about 1");
  c.note(fmt("values at 0 and sqrt3 = %.17g, %.17g (M nu)", p[0].std_product / (mass * nu),
             p[2].std_product / (mass * nu)));
}

void phase_diagram_check(Checks& c) {
  const auto cells = scan_phase_diagram({0.0, 2.0}, {0.0, 4.0}, 201, 201);
  c.expect(cells.size() == 201u * 201u, "grid size");
  std::size_t mismatches = 0;
  std::size_t boundary_cells = 0;
  std::size_t shaded = 0;
  for (const auto& cell : cells) {
    // Shaded region bounded by the roots of s^2 - 3ks + k^2 - k.
    const double k = cell.k;
    const double disc = std::sqrt(1.25 * k * k + k);
    const double lo = std::max(0.0, 1.5 * k - disc);
    const double hi = 1.5 * k + disc;
    if (std::abs(cell.s - lo) < 1e-9 || std::abs(cell.s - hi) < 1e-9) {
      ++boundary_cells;
      if (cell.improves_paper) ++mismatches;  // boundary is not shaded
      continue;
    }
    const bool inside = cell.s > lo && cell.s < hi && k > 0.0;
    if (inside != cell.improves_paper) ++mismatches;
    shaded += cell.improves_paper ? 1 : 0;
  }
  c.expect(mismatches == 0, fmt("%.0f cells disagree with the shaded region",
                                static_cast<double>(mismatches)));

  const double xmax = xi_star_paper(1.0).max;
  c.expect(std::abs(xmax - std::sqrt(3.0)) <= 1e-15,
           fmt("xi*_max(k=1) = %.17g", xmax));

  std::size_t column = 0;
  std::size_t disagree = 0;
  for (const auto& cell : cells) {
    if (cell.k != 1.0) continue;
    ++column;
    if (cell.improves_paper != cell.improves_direct) ++disagree;
  }
  c.expect(column == 201, "k = 1 column missing from the grid");
  c.expect(disagree == 0, fmt("%.0f cells differ on k = 1", static_cast<double>(disagree)));
  c.note(fmt("%.0f shaded cells, xi*_max(1) = %.16g", static_cast<double>(shaded), xmax));
}

void media_check(Checks& c) {
  const auto water = media_estimate(kLiquidWater.mass, kLiquidWater.xi,
                                    kLiquidWater.nu, kHbarSI);
  const auto printed = media_estimate(kWaterVaporPrinted.mass, kWaterVaporPrinted.xi,
                                      kWaterVaporPrinted.nu, kHbarSI);
  const auto alt = media_estimate(kWaterVaporAlt.mass, kWaterVaporAlt.xi,
                                  kWaterVaporAlt.nu, kHbarSI);
  c.expect(std::abs(water.in_units_of_half_hbar - 569.0) <= 1.0,
           fmt("water %.4g", water.in_units_of_half_hbar));
  c.expect(std::abs(printed.in_units_of_half_hbar - 0.51) <= 0.01,
           fmt("vapor (printed xi) %.4g", printed.in_units_of_half_hbar));
  c.expect(std::abs(alt.in_units_of_half_hbar - 51.0) <= 1.0,
           fmt("vapor (xi = 3e-6) %.4g", alt.in_units_of_half_hbar));
  const double factor = 60.0 / alt.in_units_of_half_hbar;
  c.expect(factor <= 1.3 && factor >= 1.0 / 1.3, fmt("factor to 60: %.3g", factor));
  c.note(fmt("water %.2f, vapor %.4f", water.in_units_of_half_hbar,
             printed.in_units_of_half_hbar) +
         fmt(" / %.2f (x hbar/2), factor to 60 = %.3f", alt.in_units_of_half_hbar, factor));
}

SolverConfig ek_config(double c_pre, const GaussianState& g, std::size_t n) {
  SolverConfig s;
  s.params = ModelParameters::from_transport(1.0, 1.0, 0.25, 0.0);
  const double sigma = std::sqrt(g.variance());
  s.x_min = -8.0 * sigma;
  s.x_max = 8.0 * sigma;
  s.n_cells = n;
  s.boundary = Boundary::reflecting;
  s.eos = {c_pre, 1.0};
  s.potential = {1.0, 0.0};
  return s;
}

void ek_check(Checks& c) {
  for (const double c_pre : {0.0, 1.0}) {
    const GaussianState g = euler_korteweg_stationary(1.0, c_pre, 0.25, 1.0);
    double res[3];
    const std::size_t sizes[3] = {1025, 2049, 4097};
    for (int i = 0; i < 3; ++i) res[i] = stationarity_residual(g, ek_config(c_pre, g, sizes[i]));
    const double o1 = std::log2(res[0] / res[1]);
    const double o2 = std::log2(res[1] / res[2]);
    c.expect(o1 >= 1.9 && o2 >= 1.9, fmt("C_pre = %g: order %.3g", c_pre, std::min(o1, o2)));

    SolverConfig s = ek_config(c_pre, g, 513);
    s.t_end = 5.0;
    const auto init = sample_on_grid(g, cell_centers(s)).field;
    s.dt = 0.5 * max_stable_dt(s, init);
    s.diag_stride = 1000;
    const Trajectory tr = evolve(init, s);
    const double v0 = tr.diagnostics.front().report.sigma2_x;
    double drift = 0.0;
    for (const auto& row : tr.diagnostics) drift = std::max(drift, rel(row.report.sigma2_x, v0));
    c.expect(drift <= 1e-6, fmt("C_pre = %g: sigma2 drift %.3e", c_pre, drift));
    c.note(fmt("C_pre=%g: orders %.2f", c_pre, o1) + fmt("/%.2f", o2) +
           fmt(", sigma2 drift %.1e", drift));
  }
}

void nsf_check(Checks& c) {
  SolverConfig s;
  s.params = ModelParameters::create(1.0, 1.0, 0.1, 0.0);
  s.x_min = -10.0;
  s.x_max = 10.0;
  s.n_cells = 1024;
  s.t_end = 2.0;
  s.boundary = Boundary::periodic;
  s.eos = {0.1, 5.0 / 3.0};
  const auto init = sample_on_grid(GaussianState::create(1.0, 0.0, 0.0, 0.0),
                                   cell_centers(s)).field;
  s.dt = 0.5 * max_stable_dt(s, init);
  s.diag_stride = std::max<std::size_t>(1, static_cast<std::size_t>(0.02 / s.dt));
  const Trajectory tr = evolve(init, s);

  bool holds = true;
  double mass_drift = 0.0;
  const auto& first = tr.diagnostics.front();
  for (const auto& row : tr.diagnostics) {
    holds = holds && row.report.holds;
    mass_drift = std::max(mass_drift, std::abs(row.mass - first.mass));
  }
  bool decreasing = true;
  std::size_t early = 0;
  for (std::size_t i = 1; i < tr.diagnostics.size(); ++i) {
    const auto& row = tr.diagnostics[i];
    if (row.t > 0.1 * s.t_end + 1e-12) break;
    ++early;
    decreasing = decreasing &&
                 row.report.std_product < tr.diagnostics[i - 1].report.std_product;
  }
  c.expect(holds, "inequality violated on a diagnostic row");
  c.expect(mass_drift <= 1e-10, fmt("mass drift %.3e", mass_drift));
  c.expect(early >= 2 && decreasing, "std_product not decreasing over the first 10%");
  c.note(fmt("%.0f rows, mass drift %.1e", static_cast<double>(tr.diagnostics.size()),
             mass_drift) +
         fmt(", std_product %.6f -> %.6f at 10%%", first.report.std_product,
             tr.diagnostics[early].report.std_product));
}

void sde_check(Checks& c) {
  const ModelParameters q = quantum_preset(1.0, 1.0);
  const FluidCoefficients fc = q.coefficients();
  const double a = 1.0;
  const double target = 0.5 / a;
  const double width = 20.0;
  const auto ground = sample_on_grid(GaussianState::create(a, 0.0, 0.0, 0.0),
                                     symmetric_grid(0.0, width / 2, 2001)).field;
  const DriftField drift = drift_field(ground, fc);
  const Drift u = [&drift](double x) { return drift(x); };
  const std::size_t n = 100000;
  const double dt = 1e-3;
  const std::size_t chunk = 200;

  Ensemble stat = sample_gaussian_ensemble(n, a, 0.0, 20261016, width);
  Ensemble point;
  point.positions.assign(n, 0.0);
  point.seed = 20261017;
  point.reference_width = width;

  double worst_stat = 0.0;
  double worst_relax = 0.0;
  for (int k = 0; k < 5; ++k) {
    stat = propagate_ensemble(std::move(stat), u, fc.nu, dt, chunk);
    point = propagate_ensemble(std::move(point), u, fc.nu, dt, chunk);
    const auto ms = sample_moments(stat.positions);
    const double se_s = std::sqrt((ms.fourth_central - ms.variance * ms.variance) / n);
    worst_stat = std::max(worst_stat, std::abs(ms.variance - target) / se_s);

    const auto mp = sample_moments(point.positions);
    const double expected = target * (1.0 - std::exp(-4.0 * a * fc.nu * point.t));
    const double se_p = std::sqrt((mp.fourth_central - mp.variance * mp.variance) / n);
    worst_relax = std::max(worst_relax, std::abs(mp.variance - expected) / se_p);
  }
  c.expect(stat.steps_taken == 1000, "step count");
  c.expect(worst_stat <= 3.0, fmt("stationary variance off by %.2f SE", worst_stat));
  c.expect(worst_relax <= 3.0, fmt("relaxation variance off by %.2f SE", worst_relax));
  c.note(fmt("max deviation %.2f SE stationary, %.2f SE relaxation", worst_stat, worst_relax));
}

void structural_check(Checks& c) {
  std::mt19937_64 rng(0x5eed0009);
  std::uniform_real_distribution<double> aa(-2.0, 2.0), ab(-1.0, 2.0), lognu(-2.0, 2.0);
  double worst_det = 0.0;
  double worst_trace = 0.0;
  double worst_prod = 0.0;
  int drawn = 0;
  int skipped = 0;
  while (drawn < 10000) {
    const double alpha_a = aa(rng);
    const double alpha_b = ab(rng);
    const double nu = std::exp(lognu(rng));
    if (lagrangian_matrix_det(alpha_a, alpha_b).degenerate) {
      ++skipped;
      continue;
    }
    ++drawn;
    const ModelParameters p = ModelParameters::create(1.0, nu, alpha_a, alpha_b);
    const TransportSet t = p.transport();
    const StructuralMatrices sm = structural_matrices(p);
    const double lhs = 4.0 * nu * nu * std::abs(sm.det_m_cal);
    const double rhs = std::abs(t.kappa - t.xi * t.xi);
    worst_det = std::max(worst_det, std::abs(lhs - rhs) / (std::abs(t.kappa) + t.xi * t.xi));

    const auto& sp = sm.spectrum;
    const double k = t.kappa / (nu * nu);
    const double x2 = t.xi * t.xi / (nu * nu);
    worst_trace = std::max(worst_trace, std::abs(sp.lambda_plus + sp.lambda_minus - (k + 1.0)) /
                                            (std::abs(k) + 1.0));
    worst_prod = std::max(worst_prod, std::abs(sp.lambda_plus * sp.lambda_minus - (k - x2)) /
                                          (std::abs(k) + x2));
  }
  c.expect(worst_det <= 1e-12, fmt("det identity %.3e", worst_det));
  c.expect(worst_trace <= 1e-12, fmt("trace identity %.3e", worst_trace));
  c.expect(worst_prod <= 1e-12, fmt("determinant identity %.3e", worst_prod));

  int rejected = 0;
  const double line[][2] = {{0.5, 0.5}, {0.0, 0.0}};
  for (const auto& ab_pair : line) {
    try {
      ModelParameters::create(1.0, 1.0, ab_pair[0], ab_pair[1]);
    } catch (const DegenerateParametersError&) {
      ++rejected;
    }
  }
  for (const double xi : {0.3, 1.0, 2.5}) {
    try {
      ModelParameters::from_transport(1.0, 1.0, xi * xi, xi);
    } catch (const DegenerateParametersError&) {
      ++rejected;
    }
  }
  c.expect(rejected == 5, fmt("only %.0f of 5 degenerate sets rejected", rejected));
  c.note(fmt("max rel errors det %.1e, trace %.1e", worst_det, worst_trace) +
         fmt(", product %.1e; degenerate sets rejected: %.0f/5", worst_prod, rejected));
}

void kss_check(Checks& c) {
  const double mass = 2.0;
  const double hbar = 1.0;
  const KssBounds b = kss_and_kappa_bounds(mass, 1.0, hbar);
  const double kss = hbar / (8.0 * std::numbers::pi * mass);
  const double star = std::sqrt(3.0) / 2.0 * hbar / mass;
  c.expect(rel(b.xi_kss, kss) <= 1e-15, fmt("xi_KSS %.17g", b.xi_kss));
  c.expect(rel(b.xi_star_max_quantum, star) <= 1e-15,
           fmt("xi*_max %.17g", b.xi_star_max_quantum));
  c.expect(b.xi_kss < b.xi_star_max_quantum, "xi_KSS not below xi*_max");
  c.note(fmt("xi_KSS %.6g, xi*_max %.6g", b.xi_kss, b.xi_star_max_quantum) +
         fmt(", ratio %.4f", b.ratio));
}

struct Spec {
  const char* name;
  double limit;
  void (*run)(Checks&);
};

const Spec kSpecs[] = {
    {"quantum saturation", 1.0, quantum_saturation},
    {"minimum-state saturation", 10.0, minimum_state_saturation},
    {"minimum curve", 1.0, min_curve_check},
    {"improvement region", 5.0, phase_diagram_check},
    {"media estimates", 1.0, media_check},
    {"Euler-Korteweg stationarity", 60.0, ek_check},
    {"inequality along trajectories", 120.0, nsf_check},
    {"SDE / Fokker-Planck equivalence", 60.0, sde_check},
    {"structural identities", 5.0, structural_check},
    {"KSS comparison", 1.0, kss_check},
};

}  // namespace

CriterionResult run_criterion(int id) {
  if (id < 1 || id > 10) throw ValidationError("criterion id must be 1..10");
  const Spec& spec = kSpecs[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = spec.name;
  r.time_limit = spec.limit;
  Checks checks;
  const auto start = std::chrono::steady_clock::now();
  try {
    spec.run(checks);
  } catch (const std::exception& e) {
    checks.expect(false, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  checks.expect(r.seconds < spec.limit, fmt("took %.2f s, limit %.0f s", r.seconds, spec.limit));
  r.passed = checks.ok();
  r.detail = checks.detail();
  return r;
}

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) out.push_back(run_criterion(id));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d  %-32s (%.2f s)  ", r.passed ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace nsk
