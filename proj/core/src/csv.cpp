#include "nsk/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nsk/errors.hpp"

namespace nsk::csv {
namespace {

std::string flag(bool b) { return b ? "1" : "0"; }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_cell(const std::string& s, std::size_t line) {
  // strtod rather than stod: subnormal tail densities must read back.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ValidationError("snapshot: line " + std::to_string(line) +
                          ": not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

void write_diagnostics(std::ostream& out, std::span<const DiagnosticRow> rows) {
  out << "t,mass,sigma2_x,sigma2_p,cov_xv,lhs,rhs,std_product,margin,holds,"
         "clipped_mass\n";
  for (const auto& r : rows) {
    const auto& u = r.report;
    out << format(r.t) << ',' << format(r.mass) << ',' << format(u.sigma2_x)
        << ',' << format(u.sigma2_p) << ',' << format(u.cov_xv) << ','
        << format(u.lhs) << ',' << format(u.rhs) << ',' << format(u.std_product)
        << ',' << format(u.margin) << ',' << flag(u.holds) << ','
        << format(r.clipped_mass) << '\n';
  }
}

void write_snapshot(std::ostream& out, const FluidField1D& field) {
  out << "x,rho,v\n";
  for (std::size_t i = 0; i < field.size(); ++i) {
    out << format(field.grid()[i]) << ',' << format(field.rho()[i]) << ','
        << format(field.v()[i]) << '\n';
  }
}

void write_uncertainty_row(std::ostream& out, double t,
                           const UncertaintyReport& u) {
  out << "t,sigma2_x,sigma2_p,cov_xv,lhs,rhs,std_product,rhs_sqrt,margin,holds\n";
  out << format(t) << ',' << format(u.sigma2_x) << ',' << format(u.sigma2_p)
      << ',' << format(u.cov_xv) << ',' << format(u.lhs) << ','
      << format(u.rhs) << ',' << format(u.std_product) << ','
      << format(u.rhs_sqrt) << ',' << format(u.margin) << ',' << flag(u.holds)
      << '\n';
}

void write_phase_diagram(std::ostream& out,
                         std::span<const PhaseDiagramCell> cells) {
  out << "k,s,min_over_mnu,improves_paper,improves_direct\n";
  for (const auto& c : cells) {
    out << format(c.k) << ',' << format(c.s) << ',' << format(c.min_over_mnu)
        << ',' << flag(c.improves_paper) << ',' << flag(c.improves_direct)
        << '\n';
  }
}

void write_curve(std::ostream& out, std::span<const CurvePoint> points) {
  out << "xi_over_nu,std_product\n";
  for (const auto& p : points) {
    out << format(p.xi_over_nu) << ',' << format(p.std_product) << '\n';
  }
}

void write_ensemble_summary(std::ostream& out,
                            std::span<const EnsembleSummaryRow> rows) {
  out << "t,n_particles,mean,variance,hist_l1_error,var_error,seed\n";
  for (const auto& r : rows) {
    out << format(r.t) << ',' << r.n_particles << ',' << format(r.mean) << ','
        << format(r.variance) << ',' << format(r.hist_l1_error) << ','
        << format(r.var_error) << ',' << r.seed << '\n';
  }
}

SnapshotColumns read_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("snapshot: empty file");
  const auto header = split(line);
  int ix = -1, ir = -1, iv = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x") ix = static_cast<int>(i);
    if (header[i] == "rho") ir = static_cast<int>(i);
    if (header[i] == "v") iv = static_cast<int>(i);
  }
  if (ix < 0 || ir < 0 || iv < 0) {
    throw ValidationError("snapshot: header must contain x, rho and v");
  }
  SnapshotColumns c;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ValidationError("snapshot: line " + std::to_string(n) + " has " +
                            std::to_string(cells.size()) + " columns");
    }
    c.x.push_back(parse_cell(cells[ix], n));
    c.rho.push_back(parse_cell(cells[ir], n));
    c.v.push_back(parse_cell(cells[iv], n));
  }
  return c;
}

SnapshotColumns read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("state_file: cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace nsk::csv
