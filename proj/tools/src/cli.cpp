#include "nsk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "nsk/acceptance.hpp"
#include "nsk/bounds.hpp"
#include "nsk/config.hpp"
#include "nsk/csv.hpp"
#include "nsk/errors.hpp"
#include "nsk/params.hpp"
#include "nsk/sde.hpp"
#include "nsk/solver.hpp"
#include "nsk/states.hpp"
#include "nsk/uncertainty.hpp"

namespace nsk::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ParamOptions {
  std::string preset;
  std::optional<double> alpha_a;
  std::optional<double> alpha_b;
  double nu = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  double mu = 0.0;
};

void add_param_options(CLI::App* app, ParamOptions& p, bool allow_preset) {
  if (allow_preset) {
    app->add_option("--preset", p.preset, "Parameter preset")
        ->check(CLI::IsMember({"quantum"}));
  }
  app->add_option("--alpha-a", p.alpha_a, "Stochastic weight alpha_A");
  app->add_option("--alpha-b", p.alpha_b, "Stochastic weight alpha_B");
  app->add_option("--nu", p.nu, "Noise intensity nu")->capture_default_str();
  app->add_option("--mass", p.mass, "Constituent mass M")->capture_default_str();
  app->add_option("--hbar", p.hbar, "Reduced Planck constant")->capture_default_str();
  app->add_option("--mu", p.mu, "Bulk viscosity")->capture_default_str();
}

ModelParameters build_params(const ParamOptions& p, const CLI::App* app) {
  if (!p.preset.empty()) {
    if (p.alpha_a || p.alpha_b || app->count("--nu") > 0) {
      throw ValidationError("--preset: cannot be combined with --alpha-a, --alpha-b or --nu");
    }
    const ModelParameters q = quantum_preset(p.mass, p.hbar);
    return ModelParameters::create(q.mass(), q.nu(), q.alpha_a(), q.alpha_b(), p.mu,
                                   p.hbar);
  }
  if (!p.alpha_a) throw ValidationError("--alpha-a: required (or give --preset)");
  if (!p.alpha_b) throw ValidationError("--alpha-b: required (or give --preset)");
  return ModelParameters::create(p.mass, p.nu, *p.alpha_a, *p.alpha_b, p.mu, p.hbar);
}

json params_json(const ModelParameters& p) {
  const TransportSet t = p.transport();
  const StructuralMatrices s = structural_matrices(p);
  return {{"mass", p.mass()},
          {"nu", p.nu()},
          {"alpha_a", p.alpha_a()},
          {"alpha_b", p.alpha_b()},
          {"mu", p.mu()},
          {"hbar", p.hbar()},
          {"kappa", t.kappa},
          {"xi", t.xi},
          {"eta_per_density", t.eta_per_density},
          {"det_mcal", s.det_m_cal},
          {"lambda_plus", s.spectrum.lambda_plus},
          {"lambda_minus", s.spectrum.lambda_minus}};
}

json report_json(const UncertaintyReport& r) {
  return {{"sigma2_x", r.sigma2_x}, {"sigma2_p", r.sigma2_p},
          {"cov_xv", r.cov_xv},     {"lhs", r.lhs},
          {"rhs", r.rhs},           {"std_product", r.std_product},
          {"rhs_sqrt", r.rhs_sqrt}, {"margin", r.margin},
          {"holds", r.holds}};
}

// Writes one artifact and checks it is non-empty.
void write_artifact(CommandResult& result, const fs::path& path,
                    const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw ValidationError("--out: cannot create " + path.parent_path().string());
  }
  {
    std::ofstream f(path);
    if (!f) throw ValidationError("--out: cannot write " + path.string());
    body(f);
    f.flush();
    if (!f) throw ValidationError("--out: write failed for " + path.string());
  }
  if (fs::file_size(path) == 0) {
    throw ValidationError("--out: artifact is empty: " + path.string());
  }
  result.artifacts.push_back(path);
}

json artifact_list(const CommandResult& r) {
  json a = json::array();
  for (const auto& p : r.artifacts) a.push_back(p.string());
  return a;
}

// -- subcommands -----------------------------------------------------------

struct MinStateOptions {
  ParamOptions params;
  double a = 1.0;
  double x0 = 0.0;
  double v0 = 0.0;
};

void run_min_state(const MinStateOptions& o, const CLI::App* app, CommandResult& r) {
  const ModelParameters p = build_params(o.params, app);
  const FluidCoefficients c = p.coefficients();
  const GaussianState g = make_min_uncertainty_state(c, o.a, o.x0, o.v0);
  const UncertaintyProduct prod = gaussian_uncertainty_product(g, c);
  r.summary = {{"a", g.a},
               {"b", g.b},
               {"x0", g.x0},
               {"v0", g.v0},
               {"kappa", c.kappa},
               {"xi", c.xi},
               {"covariance_xv", g.covariance_xv()},
               {"variance_product", prod.variance_product},
               {"std_product", prod.std_product},
               {"min_std_product", min_std_product(c)},
               {"inviscid_minimum", inviscid_minimum(c.kappa, c.nu, c.mass)}};
}

struct UncertaintyOptions {
  ParamOptions params;
  std::string state_file;
  std::string out;
  double t = 0.0;
  double tol = kTrajectoryTolerance;
};

void run_uncertainty(const UncertaintyOptions& o, const CLI::App* app, CommandResult& r) {
  const ModelParameters p = build_params(o.params, app);
  auto cols = csv::read_snapshot(fs::path(o.state_file));
  const FluidField1D field =
      FluidField1D::create(std::move(cols.x), std::move(cols.rho), std::move(cols.v));
  const UncertaintyReport rep = uncertainty_report(field, p.coefficients(), o.tol);
  if (!o.out.empty()) {
    write_artifact(r, fs::path(o.out) / "uncertainty.csv",
                   [&](std::ostream& f) { csv::write_uncertainty_row(f, o.t, rep); });
  }
  r.summary = report_json(rep);
  r.summary["t"] = o.t;
}

struct PhaseOptions {
  double k_max = 2.0;
  double s_max = 4.0;
  std::size_t nk = 201;
  std::size_t ns = 201;
  std::string out;
};

void run_phase(const PhaseOptions& o, CommandResult& r) {
  const auto cells = scan_phase_diagram({0.0, o.k_max}, {0.0, o.s_max}, o.nk, o.ns);
  write_artifact(r, fs::path(o.out) / "phase_diagram.csv",
                 [&](std::ostream& f) { csv::write_phase_diagram(f, cells); });
  const auto paper = std::count_if(cells.begin(), cells.end(),
                                   [](const auto& c) { return c.improves_paper; });
  const auto direct = std::count_if(cells.begin(), cells.end(),
                                    [](const auto& c) { return c.improves_direct; });
  r.summary = {{"cells", cells.size()},
               {"improves_paper_cells", paper},
               {"improves_direct_cells", direct},
               {"xi_star_max_k1", xi_star_paper(1.0).max}};
}

struct CurveOptions {
  double xi_max = 3.0;
  std::size_t n = 301;
  double mass = 1.0;
  double nu = 1.0;
  std::string out;
};

void run_curve(const CurveOptions& o, CommandResult& r) {
  if (o.n < 2) throw ValidationError("--n: must be >= 2");
  if (!(o.xi_max > 0.0)) throw ValidationError("--xi-max: must be > 0");
  std::vector<double> xs(o.n);
  for (std::size_t i = 0; i < o.n; ++i) {
    xs[i] = o.xi_max * static_cast<double>(i) / static_cast<double>(o.n - 1);
  }
  const auto pts = min_curve(xs, o.mass, o.nu);
  write_artifact(r, fs::path(o.out) / "min_curve.csv",
                 [&](std::ostream& f) { csv::write_curve(f, pts); });
  const auto lowest = std::min_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.std_product < b.std_product;
  });
  r.summary = {{"points", pts.size()},
               {"argmin_xi_over_nu", lowest->xi_over_nu},
               {"min_std_product", lowest->std_product}};
}

struct BoundsOptions {
  std::optional<double> mass;
  std::optional<double> nu;
  std::optional<double> hbar;
  std::optional<double> alpha_b;
  bool water = false;
  bool vapor = false;
};

void run_bounds(const BoundsOptions& o, CommandResult& r) {
  if (o.water || o.vapor) {
    const double hbar = o.hbar.value_or(kHbarSI);
    auto emit = [&](const std::string& prefix, MediumInputs in) {
      const double mass = o.mass.value_or(in.mass);
      const double nu = o.nu.value_or(in.nu);
      const MediaEstimate e = media_estimate(mass, in.xi, nu, hbar);
      r.summary[prefix + "_mass"] = mass;
      r.summary[prefix + "_xi"] = in.xi;
      r.summary[prefix + "_nu"] = nu;
      r.summary[prefix + "_std_product"] = e.std_product;
      r.summary[prefix + "_in_units_of_half_hbar"] = e.in_units_of_half_hbar;
    };
    r.summary["hbar"] = hbar;
    if (o.water) {
      emit("water", kLiquidWater);
      r.summary["in_units_of_half_hbar"] = r.summary["water_in_units_of_half_hbar"];
    }
    if (o.vapor) {
      emit("vapor_printed", kWaterVaporPrinted);
      emit("vapor_alt", kWaterVaporAlt);
    }
    return;
  }
  if (!o.mass) throw ValidationError("--mass: required");
  if (!o.nu) throw ValidationError("--nu: required");
  const double hbar = o.hbar.value_or(1.0);
  const KssBounds b = kss_and_kappa_bounds(*o.mass, *o.nu, hbar, o.alpha_b);
  r.summary = {{"mass", *o.mass},
               {"nu", *o.nu},
               {"hbar", hbar},
               {"xi_kss", b.xi_kss},
               {"kappa_lb", b.kappa_lb},
               {"xi_star_max_quantum", b.xi_star_max_quantum},
               {"ratio", b.ratio}};
  r.summary["nu_lb"] = b.nu_lb ? json(*b.nu_lb) : json(nullptr);
}

struct EvolveOptions {
  std::string config;
  std::string out;
};

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%05zu.csv", index);
  return buf;
}

void run_evolve(const EvolveOptions& o, CommandResult& r) {
  const RunConfig rc = load_run_config(o.config);
  const FluidField1D init = build_initial_field(rc);
  const fs::path out(o.out);
  std::size_t index = 0;
  const Trajectory tr = evolve(init, rc.solver, [&](double, const FluidField1D& snap) {
    write_artifact(r, out / snapshot_name(index++),
                   [&](std::ostream& f) { csv::write_snapshot(f, snap); });
  });
  write_artifact(r, out / "diagnostics.csv",
                 [&](std::ostream& f) { csv::write_diagnostics(f, tr.diagnostics); });
  bool holds = true;
  double min_margin = tr.diagnostics.front().report.margin;
  double mass_drift = 0.0;
  for (const auto& row : tr.diagnostics) {
    holds = holds && row.report.holds;
    min_margin = std::min(min_margin, row.report.margin);
    mass_drift = std::max(mass_drift, std::abs(row.mass - tr.diagnostics.front().mass));
  }
  r.summary = {{"rows", tr.diagnostics.size()},
               {"t_end", tr.times.back()},
               {"dt", rc.solver.dt},
               {"all_hold", holds},
               {"min_margin", min_margin},
               {"mass_drift", mass_drift},
               {"final_std_product", tr.diagnostics.back().report.std_product}};
}

struct SdeOptions {
  ParamOptions params;
  std::string drift = "ground-state";
  std::string snapshot;
  std::string init = "stationary";
  std::size_t particles = 10000;
  std::uint64_t seed = 1;
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::size_t checkpoints = 10;
  std::size_t bins = 50;
  double a = 1.0;
  std::string out;
};

void run_sde(const SdeOptions& o, const CLI::App* app, CommandResult& r) {
  if (o.particles == 0) throw ValidationError("--particles: must be >= 1");
  if (o.checkpoints == 0 || o.checkpoints > o.steps) {
    throw ValidationError("--checkpoints: must lie in [1, steps]");
  }
  if (o.drift == "from-snapshot" && o.snapshot.empty()) {
    throw ValidationError("--snapshot: required with --drift from-snapshot");
  }
  ParamOptions po = o.params;
  if (o.drift == "ground-state" && po.preset.empty() && !po.alpha_a && !po.alpha_b) {
    po.preset = "quantum";
  }
  const FluidCoefficients c = build_params(po, app).coefficients();

  std::optional<FluidField1D> reference;
  if (o.drift == "ground-state") {
    const GaussianState g = GaussianState::create(o.a, 0.0, 0.0, 0.0);
    const double half = 10.0 * std::sqrt(g.variance());
    reference = sample_on_grid(g, uniform_grid(-half, half, 2001)).field;
  } else {
    auto cols = csv::read_snapshot(fs::path(o.snapshot));
    reference = FluidField1D::create(std::move(cols.x), std::move(cols.rho),
                                     std::move(cols.v), std::nullopt);
  }
  const DriftField field = drift_field(*reference, c);
  const Drift u = [&field](double x) { return field(x); };

  Ensemble e;
  if (o.init == "stationary") {
    e = sample_field_ensemble(o.particles, *reference, o.seed);
  } else {
    const auto x = reference->grid();
    e.positions.assign(o.particles, 0.5 * (x.front() + x.back()));
    e.seed = o.seed;
    e.reference_width = x.back() - x.front();
  }

  std::vector<csv::EnsembleSummaryRow> rows;
  auto record = [&] {
    const SampleMoments m = sample_moments(e.positions);
    const EmpiricalComparison cmp = empirical_compare(e, *reference, o.bins);
    rows.push_back({e.t, e.positions.size(), m.mean, m.variance, cmp.hist_l1_error,
                    cmp.var_error, o.seed});
  };
  record();
  std::size_t done = 0;
  for (std::size_t k = 1; k <= o.checkpoints; ++k) {
    const std::size_t target = o.steps * k / o.checkpoints;
    e = propagate_ensemble(std::move(e), u, c.nu, o.dt, target - done);
    done = target;
    record();
  }
  write_artifact(r, fs::path(o.out) / "ensemble_summary.csv",
                 [&](std::ostream& f) { csv::write_ensemble_summary(f, rows); });
  r.summary = {{"particles", o.particles},
               {"seed", o.seed},
               {"t", e.t},
               {"final_mean", rows.back().mean},
               {"final_variance", rows.back().variance},
               {"final_hist_l1_error", rows.back().hist_l1_error},
               {"final_var_error", rows.back().var_error}};
}

void run_verify(std::ostream& out, CommandResult& r) {
  const auto results = run_acceptance();
  int passed = 0;
  for (const auto& c : results) {
    out << format_result(c) << '\n';
    passed += c.passed ? 1 : 0;
  }
  r.summary = {{"passed", passed}, {"total", results.size()}};
  r.exit_code = passed == static_cast<int>(results.size()) ? kExitOk : kExitValidation;
}

}  // namespace

CommandResult run(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
  CLI::App app{"Navier-Stokes-Korteweg uncertainty toolkit", "nsk"};
  app.require_subcommand(1);

  ParamOptions params_opts;
  auto* params = app.add_subcommand("params", "Derived transport and structural matrices");
  add_param_options(params, params_opts, false);

  MinStateOptions ms;
  auto* min_state = app.add_subcommand("min-state", "Minimum-uncertainty Gaussian state");
  add_param_options(min_state, ms.params, true);
  min_state->add_option("--A", ms.a, "Gaussian width parameter A")->capture_default_str();
  min_state->add_option("--x0", ms.x0, "Centre")->capture_default_str();
  min_state->add_option("--v0", ms.v0, "Velocity offset")->capture_default_str();

  UncertaintyOptions uo;
  auto* unc = app.add_subcommand("uncertainty", "Uncertainty report of a sampled state");
  add_param_options(unc, uo.params, true);
  unc->add_option("--state-file", uo.state_file, "CSV with columns x, rho, v")->required();
  unc->add_option("--t", uo.t, "Time stamp for the CSV row")->capture_default_str();
  unc->add_option("--tol", uo.tol, "Relative tolerance of the holds flag")->capture_default_str();
  unc->add_option("--out", uo.out, "Directory for uncertainty.csv");

  PhaseOptions po;
  auto* phase = app.add_subcommand("phase-diagram", "Improvement-region scan");
  phase->add_option("--k-max", po.k_max, "Upper kappa/nu^2")->capture_default_str();
  phase->add_option("--s-max", po.s_max, "Upper xi^2/nu^2")->capture_default_str();
  phase->add_option("--nk", po.nk, "Grid points in k")->capture_default_str();
  phase->add_option("--ns", po.ns, "Grid points in s")->capture_default_str();
  phase->add_option("--out", po.out, "Output directory")->required();

  CurveOptions co;
  auto* curve = app.add_subcommand("min-curve", "Viscous minimum along kappa = nu^2");
  curve->add_option("--xi-max", co.xi_max, "Upper xi/nu")->capture_default_str();
  curve->add_option("--n", co.n, "Number of points")->capture_default_str();
  curve->add_option("--mass", co.mass, "Mass M")->capture_default_str();
  curve->add_option("--nu", co.nu, "nu")->capture_default_str();
  curve->add_option("--out", co.out, "Output directory")->required();

  BoundsOptions bo;
  auto* bounds = app.add_subcommand("bounds", "KSS, kappa and nu bounds; media estimates");
  bounds->add_option("--mass", bo.mass, "Mass M");
  bounds->add_option("--nu", bo.nu, "nu");
  bounds->add_option("--hbar", bo.hbar, "hbar (SI for --water/--vapor, else 1)");
  bounds->add_option("--alpha-b", bo.alpha_b, "alpha_B for the nu lower bound");
  bounds->add_flag("--water", bo.water, "Liquid-water estimate");
  bounds->add_flag("--vapor", bo.vapor, "Water-vapor estimates (both readings)");

  EvolveOptions eo;
  auto* evolve_cmd = app.add_subcommand("evolve", "Integrate the NSK equations");
  evolve_cmd->add_option("--config", eo.config, "key=value run file")->required();
  evolve_cmd->add_option("--out", eo.out, "Output directory")->required();

  SdeOptions so;
  auto* sde = app.add_subcommand("sde", "Forward-SDE particle ensemble");
  add_param_options(sde, so.params, true);
  sde->add_option("--drift", so.drift, "Drift source")->capture_default_str()
      ->check(CLI::IsMember({"ground-state", "from-snapshot"}));
  sde->add_option("--snapshot", so.snapshot, "Snapshot CSV for --drift from-snapshot");
  sde->add_option("--init", so.init, "Initial ensemble")->capture_default_str()
      ->check(CLI::IsMember({"stationary", "point"}));
  sde->add_option("--A", so.a, "Ground-state width parameter A")->capture_default_str();
  sde->add_option("--particles", so.particles, "Number of particles")->capture_default_str();
  sde->add_option("--seed", so.seed, "RNG seed")->capture_default_str();
  sde->add_option("--dt", so.dt, "Time step")->capture_default_str();
  sde->add_option("--steps", so.steps, "Number of steps")->capture_default_str();
  sde->add_option("--checkpoints", so.checkpoints, "Summary rows after t = 0")->capture_default_str();
  sde->add_option("--bins", so.bins, "Histogram bins")->capture_default_str();
  sde->add_option("--out", so.out, "Output directory")->required();

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");

  CommandResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    result.exit_code = kExitValidation;
    return result;
  }

  try {
    if (params->parsed()) {
      result.summary = params_json(build_params(params_opts, params));
    } else if (min_state->parsed()) {
      run_min_state(ms, min_state, result);
    } else if (unc->parsed()) {
      run_uncertainty(uo, unc, result);
    } else if (phase->parsed()) {
      run_phase(po, result);
    } else if (curve->parsed()) {
      run_curve(co, result);
    } else if (bounds->parsed()) {
      run_bounds(bo, result);
    } else if (evolve_cmd->parsed()) {
      run_evolve(eo, result);
    } else if (sde->parsed()) {
      run_sde(so, sde, result);
    } else if (verify->parsed()) {
      run_verify(out, result);
    }
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << " (t = " << e.time() << ", step " << e.step()
        << ")\n";
    result.exit_code = kExitNumerical;
    result.artifacts.clear();
    return result;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    result.exit_code = kExitValidation;
    result.artifacts.clear();
    return result;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    result.exit_code = kExitValidation;
    result.artifacts.clear();
    return result;
  }

  if (!result.artifacts.empty()) result.summary["artifacts"] = artifact_list(result);
  out << result.summary.dump() << '\n';
  return result;
}

}  // namespace nsk::cli
