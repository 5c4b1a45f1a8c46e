#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nsk {

/// Uniformly spaced node positions x_min, ..., x_max (n >= 2 points).
std::vector<double> uniform_grid(double x_min, double x_max, std::size_t n);

/// Sampled density and velocity on a uniform grid.
///
/// Invariants (checked by create): equal lengths, at least three samples,
/// spacing constant to 1e-12 relative, finite samples, rho >= 0 and, when a
/// mass tolerance is given, |trapezoid mass - 1| <= tolerance.
class FluidField1D {
 public:
  static constexpr double kDefaultMassTolerance = 1e-6;

  static FluidField1D create(
      std::vector<double> grid, std::vector<double> rho, std::vector<double> v,
      std::optional<double> mass_tolerance = kDefaultMassTolerance);

  std::span<const double> grid() const { return grid_; }
  std::span<const double> rho() const { return rho_; }
  std::span<const double> v() const { return v_; }
  std::size_t size() const { return grid_.size(); }
  double spacing() const { return spacing_; }

  /// Trapezoid integral of rho over the grid.
  double mass() const;

 private:
  FluidField1D(std::vector<double> grid, std::vector<double> rho,
               std::vector<double> v, double spacing)
      : grid_(std::move(grid)), rho_(std::move(rho)), v_(std::move(v)),
        spacing_(spacing) {}

  std::vector<double> grid_;
  std::vector<double> rho_;
  std::vector<double> v_;
  double spacing_;
};

/// Closed index range [first, last] of samples kept for moments.
struct Support {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
};

/// Default retained-support threshold, relative to max(rho).
inline constexpr double kRelativeDensityFloor = 1e-12;

/// Contiguous range between the first and last samples with
/// rho >= relative_floor * max(rho). Throws ValidationError if a sample
/// inside that range is below the floor or fewer than three samples remain.
Support retained_support(const FluidField1D& field,
                         double relative_floor = kRelativeDensityFloor);

/// First derivative on a uniform grid: 2nd-order central differences in the
/// interior, 2nd-order one-sided at the two ends.
std::vector<double> gradient(std::span<const double> f, double h);

/// Trapezoid weights sum_i w_i f_i over a uniform grid.
double trapezoid(std::span<const double> f, double h);

}  // namespace nsk
