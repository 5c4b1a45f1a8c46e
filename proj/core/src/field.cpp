#include "nsk/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nsk/errors.hpp"

namespace nsk {

std::vector<double> uniform_grid(double x_min, double x_max, std::size_t n) {
  if (n < 2 || !std::isfinite(x_min) || !std::isfinite(x_max) ||
      !(x_max > x_min)) {
    throw ValidationError("uniform_grid needs n >= 2 and x_max > x_min");
  }
  std::vector<double> x(n);
  const double width = x_max - x_min;
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = x_min + width * (static_cast<double>(i) / last);
  }
  return x;
}

FluidField1D FluidField1D::create(std::vector<double> grid,
                                  std::vector<double> rho,
                                  std::vector<double> v,
                                  std::optional<double> mass_tolerance) {
  const std::size_t n = grid.size();
  if (rho.size() != n || v.size() != n) {
    throw ValidationError("field: grid, rho and v lengths differ");
  }
  if (n < 3) {
    throw ValidationError("field: need at least 3 samples");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(rho[i]) ||
        !std::isfinite(v[i])) {
      throw ValidationError("field: non-finite sample at index " +
                            std::to_string(i));
    }
    if (rho[i] < 0.0) {
      throw ValidationError("field: negative density at index " +
                            std::to_string(i));
    }
  }
  const double h = (grid[n - 1] - grid[0]) / static_cast<double>(n - 1);
  if (!(h > 0.0)) {
    throw ValidationError("field: grid must be strictly increasing");
  }
  // Rounding in x_min + width * t scales with the domain extent, not with x.
  const double extent = std::max(std::abs(grid[0]), std::abs(grid[n - 1]));
  const double slack = 1e-12 * h + 8.0 * std::numeric_limits<double>::epsilon() * extent;
  for (std::size_t i = 1; i < n; ++i) {
    const double step = grid[i] - grid[i - 1];
    if (std::abs(step - h) > slack) {
      throw ValidationError("field: grid spacing is not uniform at index " +
                            std::to_string(i));
    }
  }
  FluidField1D field(std::move(grid), std::move(rho), std::move(v), h);
  if (mass_tolerance) {
    const double mass = field.mass();
    if (std::abs(mass - 1.0) > *mass_tolerance) {
      throw ValidationError("field: mass " + std::to_string(mass) +
                            " differs from 1 by more than the tolerance");
    }
  }
  return field;
}

double FluidField1D::mass() const { return trapezoid(rho_, spacing_); }

Support retained_support(const FluidField1D& field, double relative_floor) {
  const auto rho = field.rho();
  const double peak = *std::max_element(rho.begin(), rho.end());
  if (!(peak > 0.0)) {
    throw ValidationError("field: density vanishes everywhere");
  }
  const double floor = relative_floor * peak;
  Support s;
  s.first = static_cast<std::size_t>(
      std::find_if(rho.begin(), rho.end(), [&](double r) { return r >= floor; }) -
      rho.begin());
  s.last = rho.size() - 1 -
           static_cast<std::size_t>(
               std::find_if(rho.rbegin(), rho.rend(),
                            [&](double r) { return r >= floor; }) -
               rho.rbegin());
  for (std::size_t i = s.first; i <= s.last; ++i) {
    if (rho[i] < floor) {
      throw ValidationError("field: density drops below the floor inside the "
                            "retained support at index " + std::to_string(i));
    }
  }
  if (s.size() < 3) {
    throw ValidationError("field: retained support has fewer than 3 samples");
  }
  return s;
}

std::vector<double> gradient(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) {
    throw ValidationError("gradient: need at least 3 samples");
  }
  std::vector<double> df(n);
  const double inv2h = 0.5 / h;
  df[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    df[i] = (f[i + 1] - f[i - 1]) * inv2h;
  }
  df[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
  return df;
}

double trapezoid(std::span<const double> f, double h) {
  if (f.empty()) {
    return 0.0;
  }
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    sum += f[i];
  }
  return sum * h;
}

}  // namespace nsk
