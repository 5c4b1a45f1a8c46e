#include "nsk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nsk/errors.hpp"
#include "nsk/parallel.hpp"

namespace nsk {
namespace {

void require_non_negative(double value, const char* what) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError(std::string(what) + " must be finite and >= 0");
  }
}

double linspace_at(Range r, std::size_t i, std::size_t n) {
  if (i + 1 == n) return r.hi;
  return r.lo + (r.hi - r.lo) * static_cast<double>(i) /
                    static_cast<double>(n - 1);
}

}  // namespace

XiStar xi_star_paper(double k) {
  require_non_negative(k, "k = kappa/nu^2");
  const double root = std::sqrt(k * (1.0 + 1.25 * k));
  XiStar out;
  out.max = std::sqrt(1.5 * k + root);
  if (k >= 1.0) {
    // The radicand vanishes at k = 1; clamp rounding below zero.
    out.min = std::sqrt(std::max(0.0, 1.5 * k - root));
  }
  return out;
}

double min_over_mnu(double k, double s) {
  return std::abs(k - s) / std::sqrt(1.0 + s);
}

Improvement improvement_region(double k, double s) {
  require_non_negative(k, "k = kappa/nu^2");
  require_non_negative(s, "s = xi^2/nu^2");
  // (xi*_min/nu)^2 and (xi*_max/nu)^2 are the roots of s^2 - 3ks + k^2 - k;
  // testing the sign of the quadratic keeps boundary cells off by rounding.
  Improvement out;
  out.paper = s > 0.0 && s * s - 3.0 * k * s + k * k - k < 0.0;
  out.direct = min_over_mnu(k, s) < k;
  return out;
}

std::vector<PhaseDiagramCell> scan_phase_diagram(Range k_range, Range s_range,
                                                 std::size_t nk,
                                                 std::size_t ns) {
  if (nk < 2 || ns < 2) {
    throw ValidationError("phase diagram needs nk, ns >= 2");
  }
  for (const Range r : {k_range, s_range}) {
    require_non_negative(r.lo, "range start");
    require_non_negative(r.hi, "range end");
    if (r.hi < r.lo) {
      throw ValidationError("phase diagram range is empty");
    }
  }
  std::vector<PhaseDiagramCell> cells(nk * ns);
  parallel_for(cells.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      PhaseDiagramCell& c = cells[idx];
      c.k = linspace_at(k_range, idx / ns, nk);
      c.s = linspace_at(s_range, idx % ns, ns);
      c.min_over_mnu = min_over_mnu(c.k, c.s);
      const Improvement imp = improvement_region(c.k, c.s);
      c.improves_paper = imp.paper;
      c.improves_direct = imp.direct;
    }
  });
  return cells;
}

std::vector<CurvePoint> min_curve(std::span<const double> xi_over_nu,
                                  double mass, double nu) {
  if (!(mass > 0.0) || !(nu > 0.0)) {
    throw ValidationError("min_curve needs M > 0 and nu > 0");
  }
  std::vector<CurvePoint> out;
  out.reserve(xi_over_nu.size());
  for (const double r : xi_over_nu) {
    require_non_negative(r, "xi/nu sample");
    const double s = r * r;
    out.push_back({r, mass * nu * std::abs(1.0 - s) / std::sqrt(1.0 + s)});
  }
  return out;
}

KssBounds kss_and_kappa_bounds(double mass, double nu, double hbar,
                               std::optional<double> alpha_b) {
  if (!(mass > 0.0) || !(nu > 0.0) || !(hbar > 0.0)) {
    throw ValidationError("bounds need positive mass, nu and hbar");
  }
  KssBounds out;
  out.xi_kss = hbar / (8.0 * std::numbers::pi * mass);
  out.kappa_lb = hbar * nu / (2.0 * mass);
  if (alpha_b) {
    if (!std::isfinite(*alpha_b) || *alpha_b == 0.0) {
      throw ValidationError("alpha_b must be finite and non-zero for nu_lb");
    }
    out.nu_lb = hbar / (4.0 * mass * *alpha_b);
  }
  out.xi_star_max_quantum = 0.5 * std::numbers::sqrt3 * hbar / mass;
  out.ratio = out.xi_star_max_quantum / out.xi_kss;
  return out;
}

MediaEstimate media_estimate(double mass, double xi, double nu, double hbar) {
  if (!(mass > 0.0) || !(nu > 0.0) || !(hbar > 0.0)) {
    throw ValidationError("media estimate needs positive mass, nu and hbar");
  }
  require_non_negative(xi, "xi");
  MediaEstimate out;
  out.std_product = mass * xi * xi / std::hypot(nu, xi);
  out.in_units_of_half_hbar = out.std_product / (0.5 * hbar);
  return out;
}

}  // namespace nsk
