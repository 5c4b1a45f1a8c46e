#include "nsk/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>

#include "nsk/csv.hpp"
#include "nsk/errors.hpp"

namespace nsk {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(key + ": not a finite number: '" + value + "'");
}

std::size_t to_count(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used == value.size() && v >= 0) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw ValidationError(key + ": not a non-negative integer: '" + value + "'");
}

}  // namespace

RunConfig parse_run_config(std::istream& in,
                           const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(n) +
                            ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key)) throw ValidationError(key + ": given twice");
    kv[key] = trim(line.substr(eq + 1));
  }

  RunConfig rc;
  SolverConfig& s = rc.solver;
  InitialSpec& init = rc.initial;
  double mass = 1.0, nu = 1.0, alpha_a = 0.0, alpha_b = 0.5, mu = 0.0, hbar = 1.0;
  std::optional<std::string> preset;
  bool alpha_given = false, nu_given = false, dt_auto = false;

  for (const auto& [key, value] : kv) {
    if (key == "mass") mass = to_double(key, value);
    else if (key == "nu") { nu = to_double(key, value); nu_given = true; }
    else if (key == "alpha_a") { alpha_a = to_double(key, value); alpha_given = true; }
    else if (key == "alpha_b") { alpha_b = to_double(key, value); alpha_given = true; }
    else if (key == "mu") mu = to_double(key, value);
    else if (key == "hbar") hbar = to_double(key, value);
    else if (key == "preset") {
      if (value != "quantum") throw ValidationError("preset: unknown '" + value + "'");
      preset = value;
    }
    else if (key == "x_min") s.x_min = to_double(key, value);
    else if (key == "x_max") s.x_max = to_double(key, value);
    else if (key == "n_cells") s.n_cells = to_count(key, value);
    else if (key == "dt") {
      if (value == "auto") dt_auto = true;
      else s.dt = to_double(key, value);
    }
    else if (key == "t_end") s.t_end = to_double(key, value);
    else if (key == "boundary") {
      if (value == "periodic") s.boundary = Boundary::periodic;
      else if (value == "reflecting") s.boundary = Boundary::reflecting;
      else throw ValidationError("boundary: expected periodic or reflecting");
    }
    else if (key == "eos_k") s.eos.k = to_double(key, value);
    else if (key == "eos_gamma") s.eos.gamma = to_double(key, value);
    else if (key == "potential_omega") s.potential.omega = to_double(key, value);
    else if (key == "potential_center") s.potential.center = to_double(key, value);
    else if (key == "rho_floor") s.rho_floor = to_double(key, value);
    else if (key == "diag_stride") s.diag_stride = to_count(key, value);
    else if (key == "c_safety") s.c_safety = to_double(key, value);
    else if (key == "initial") {
      if (value == "gaussian") init.kind = InitialKind::gaussian;
      else if (value == "min-state") init.kind = InitialKind::min_state;
      else if (value == "ek-stationary") init.kind = InitialKind::ek_stationary;
      else if (value == "file") init.kind = InitialKind::file;
      else throw ValidationError("initial: expected gaussian, min-state, ek-stationary or file");
    }
    else if (key == "initial_a") init.a = to_double(key, value);
    else if (key == "initial_b") init.b = to_double(key, value);
    else if (key == "initial_x0") init.x0 = to_double(key, value);
    else if (key == "initial_v0") init.v0 = to_double(key, value);
    else if (key == "initial_file") {
      std::filesystem::path p(value);
      init.file = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    else throw ValidationError(key + ": unknown key");
  }

  if (preset) {
    if (alpha_given || nu_given) {
      throw ValidationError("preset: cannot be combined with alpha_a, alpha_b or nu");
    }
    const ModelParameters q = quantum_preset(mass, hbar);
    s.params = ModelParameters::create(q.mass(), q.nu(), q.alpha_a(), q.alpha_b(),
                                       mu, hbar);
  } else {
    s.params = ModelParameters::create(mass, nu, alpha_a, alpha_b, mu, hbar);
  }
  if (init.kind == InitialKind::file && init.file.empty()) {
    throw ValidationError("initial_file: required when initial = file");
  }
  validate(s);
  if (dt_auto) {
    s.dt = 0.5 * max_stable_dt(s, build_initial_field(rc));
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  return parse_run_config(in, path.parent_path());
}

FluidField1D build_initial_field(const RunConfig& rc) {
  const SolverConfig& s = rc.solver;
  const InitialSpec& init = rc.initial;
  const std::vector<double> x = cell_centers(s);
  GaussianState g;
  switch (init.kind) {
    case InitialKind::gaussian:
      g = GaussianState::create(init.a, init.b, init.x0, init.v0);
      break;
    case InitialKind::min_state:
      g = make_min_uncertainty_state(s.params.coefficients(), init.a, init.x0,
                                     init.v0);
      break;
    case InitialKind::ek_stationary:
      if (s.eos.gamma != 1.0) {
        throw ValidationError("eos_gamma: ek-stationary requires eos_gamma = 1");
      }
      g = euler_korteweg_stationary(s.potential.omega, s.eos.k,
                                    s.params.transport().kappa, s.params.mass());
      g.x0 = s.potential.center;
      break;
    case InitialKind::file: {
      auto cols = csv::read_snapshot(init.file);
      if (cols.x.size() != x.size()) {
        throw ValidationError("initial_file: has " + std::to_string(cols.x.size()) +
                              " rows, n_cells is " + std::to_string(x.size()));
      }
      return FluidField1D::create(std::move(cols.x), std::move(cols.rho),
                                  std::move(cols.v), std::nullopt);
    }
  }
  return sample_on_grid(g, x).field;
}

}  // namespace nsk
