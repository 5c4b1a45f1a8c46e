#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nsk/bounds.hpp"
#include "nsk/field.hpp"
#include "nsk/solver.hpp"
#include "nsk/uncertainty.hpp"

namespace nsk::csv {

/// Scientific notation with 17 significant digits, enough to round-trip any
/// double.
std::string format(double value);

void write_diagnostics(std::ostream& out, std::span<const DiagnosticRow> rows);
void write_snapshot(std::ostream& out, const FluidField1D& field);
void write_uncertainty_row(std::ostream& out, double t,
                           const UncertaintyReport& r);
void write_phase_diagram(std::ostream& out,
                         std::span<const PhaseDiagramCell> cells);
void write_curve(std::ostream& out, std::span<const CurvePoint> points);

struct EnsembleSummaryRow {
  double t = 0.0;
  std::size_t n_particles = 0;
  double mean = 0.0;
  double variance = 0.0;
  double hist_l1_error = 0.0;
  double var_error = 0.0;
  std::uint64_t seed = 0;
};

void write_ensemble_summary(std::ostream& out,
                            std::span<const EnsembleSummaryRow> rows);

/// Columns x, rho, v (header required, extra whitespace ignored). The mass
/// check is left to the caller.
struct SnapshotColumns {
  std::vector<double> x;
  std::vector<double> rho;
  std::vector<double> v;
};

SnapshotColumns read_snapshot(std::istream& in);
SnapshotColumns read_snapshot(const std::filesystem::path& path);

}  // namespace nsk::csv
