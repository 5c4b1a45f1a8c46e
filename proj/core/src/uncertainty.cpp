#include "nsk/uncertainty.hpp"

#include <cmath>

#include "nsk/errors.hpp"

namespace nsk {
namespace {

void require_coefficients(const FluidCoefficients& c) {
  if (!(c.mass > 0.0) || !(c.nu > 0.0) || !std::isfinite(c.kappa) ||
      !std::isfinite(c.xi)) {
    throw ValidationError("coefficients need finite kappa, xi and M, nu > 0");
  }
}

// Weighted mean of f over [s.first, s.last] with trapezoid weights rho.
struct Moments {
  Support s;
  std::span<const double> rho;
  double h;
  double mass;

  double mean(std::span<const double> f) const {
    double sum = 0.0;
    for (std::size_t i = s.first; i <= s.last; ++i) {
      const double w = (i == s.first || i == s.last) ? 0.5 : 1.0;
      sum += w * rho[i] * f[i - s.first];
    }
    return sum * h / mass;
  }
};

Moments make_moments(const FluidField1D& field, const Support& s) {
  const auto rho = field.rho();
  Moments m{s, rho, field.spacing(), 0.0};
  m.mass = trapezoid(rho.subspan(s.first, s.size()), field.spacing());
  return m;
}

std::vector<double> centered(std::vector<double> f, const Moments& m) {
  const double mu = m.mean(f);
  for (double& x : f) x -= mu;
  return f;
}

}  // namespace

double expectation(const FluidField1D& field, std::span<const double> f) {
  if (f.size() != field.size()) {
    throw ValidationError("expectation: f is not sampled on the field grid");
  }
  const auto rho = field.rho();
  std::vector<double> weighted(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) weighted[i] = rho[i] * f[i];
  const double mass = field.mass();
  if (!(mass > 0.0)) {
    throw ValidationError("expectation: field has no mass");
  }
  return trapezoid(weighted, field.spacing()) / mass;
}

MomentumFields momentum_fields(const FluidField1D& field,
                               const FluidCoefficients& c,
                               double relative_floor) {
  require_coefficients(c);
  const Support s = retained_support(field, relative_floor);
  const auto rho = field.rho().subspan(s.first, s.size());
  const auto v = field.v().subspan(s.first, s.size());

  std::vector<double> log_rho(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) log_rho[i] = std::log(rho[i]);
  const std::vector<double> dlog = gradient(log_rho, field.spacing());

  const double k = c.kappa / (c.nu * c.nu);
  const double r = c.xi / c.nu;
  MomentumFields out{s, std::vector<double>(rho.size()),
                     std::vector<double>(rho.size())};
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double osmotic = -c.nu * dlog[i];
    const double diff = 2.0 * c.mass * (k * osmotic - r * v[i]);
    const double sum = 2.0 * c.mass * (-r * osmotic + v[i]);
    out.p_minus[i] = 0.5 * (sum + diff);
    out.p_plus[i] = 0.5 * (sum - diff);
  }
  return out;
}

double uncertainty_bound(const FluidCoefficients& c, double cov_xv) {
  require_coefficients(c);
  const double nu2 = c.nu * c.nu;
  const double xi2 = c.xi * c.xi;
  const double m2 = c.mass * c.mass;
  const double gap = xi2 - c.kappa;
  const double shift = cov_xv - c.xi * (nu2 + c.kappa) / (nu2 + xi2);
  return m2 * gap * gap / (nu2 + xi2) + m2 * (1.0 + xi2 / nu2) * shift * shift;
}

UncertaintyReport uncertainty_report(const FluidField1D& field,
                                     const FluidCoefficients& c, double tol,
                                     double relative_floor) {
  const MomentumFields p = momentum_fields(field, c, relative_floor);
  const Moments m = make_moments(field, p.support);
  const std::size_t n = p.support.size();
  const auto x = field.grid().subspan(p.support.first, n);
  const auto v = field.v().subspan(p.support.first, n);

  std::vector<double> half_sum(n), half_diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    half_sum[i] = 0.5 * (p.p_minus[i] + p.p_plus[i]);
    half_diff[i] = 0.5 * (p.p_minus[i] - p.p_plus[i]);
  }
  const auto dx = centered({x.begin(), x.end()}, m);
  const auto dv = centered({v.begin(), v.end()}, m);
  const auto ds = centered(std::move(half_sum), m);
  const auto dd = centered(std::move(half_diff), m);

  std::vector<double> tmp(n);
  auto mean_of = [&](auto&& fn) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = fn(i);
    return m.mean(tmp);
  };

  UncertaintyReport r;
  r.sigma2_x = mean_of([&](std::size_t i) { return dx[i] * dx[i]; });
  r.sigma2_p = mean_of([&](std::size_t i) { return ds[i] * ds[i]; }) +
               mean_of([&](std::size_t i) { return dd[i] * dd[i]; });
  r.cov_xv = mean_of([&](std::size_t i) { return dx[i] * dv[i]; });
  r.lhs = r.sigma2_x * r.sigma2_p;
  r.rhs = uncertainty_bound(c, r.cov_xv);
  r.std_product = std::sqrt(r.lhs);
  r.rhs_sqrt = std::sqrt(r.rhs);
  r.margin = r.lhs - r.rhs;
  r.holds = r.margin >= -tol * (1.0 + std::abs(r.lhs));
  return r;
}

double momentum_variance_direct(const FluidField1D& field,
                                const FluidCoefficients& c,
                                double relative_floor) {
  const MomentumFields p = momentum_fields(field, c, relative_floor);
  const Moments m = make_moments(field, p.support);
  const auto dp_plus = centered(p.p_plus, m);
  const auto dp_minus = centered(p.p_minus, m);
  std::vector<double> sq(dp_plus.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    sq[i] = 0.5 * (dp_plus[i] * dp_plus[i] + dp_minus[i] * dp_minus[i]);
  }
  return m.mean(sq);
}

double min_std_product(const FluidCoefficients& c) {
  require_coefficients(c);
  if (c.kappa < 0.0) {
    throw ValidationError("min_std_product requires kappa >= 0");
  }
  const double k = c.kappa / (c.nu * c.nu);
  const double s = c.xi * c.xi / (c.nu * c.nu);
  return c.mass * c.nu * std::abs(k - s) / std::sqrt(1.0 + s);
}

}  // namespace nsk
