#include "nsk/sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nsk/errors.hpp"
#include "nsk/parallel.hpp"

namespace nsk {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform on (0, 1].
double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

constexpr std::uint64_t kInitialSalt = 0xa5a5a5a5a5a5a5a5ULL;

}  // namespace

DriftField::DriftField(std::vector<double> x, std::vector<double> u_plus)
    : x_(std::move(x)), u_(std::move(u_plus)) {
  if (x_.size() < 2 || x_.size() != u_.size()) {
    throw ValidationError("drift: need at least two matching samples");
  }
  h_ = x_[1] - x_[0];
}

double DriftField::operator()(double x) const {
  if (!(x > x_.front())) return u_.front();
  if (!(x < x_.back())) return u_.back();
  const double s = (x - x_.front()) / h_;
  const auto i = std::min(static_cast<std::size_t>(s), x_.size() - 2);
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * u_[i] + w * u_[i + 1];
}

DriftField drift_field(const FluidField1D& field, const FluidCoefficients& c,
                       double relative_floor) {
  const Support s = retained_support(field, relative_floor);
  const auto rho = field.rho().subspan(s.first, s.size());
  const auto v = field.v().subspan(s.first, s.size());
  const auto x = field.grid().subspan(s.first, s.size());
  std::vector<double> log_rho(rho.size());
  std::transform(rho.begin(), rho.end(), log_rho.begin(),
                 [](double r) { return std::log(r); });
  const std::vector<double> dlog = gradient(log_rho, field.spacing());
  std::vector<double> u(rho.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = v[i] + c.nu * dlog[i];
  return DriftField({x.begin(), x.end()}, std::move(u));
}

double standard_normal(std::uint64_t seed, std::uint64_t particle,
                       std::uint64_t step) {
  const std::uint64_t key =
      splitmix64(splitmix64(seed) ^ splitmix64(particle * 0x9e3779b97f4a7c15ULL + step));
  const double u1 = to_unit(splitmix64(key));
  const double u2 = to_unit(splitmix64(key ^ 0xd1b54a32d192ed03ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Ensemble sample_gaussian_ensemble(std::size_t n, double a, double x0,
                                  std::uint64_t seed, double reference_width) {
  if (!(a > 0.0)) throw ValidationError("A: must be > 0");
  if (!(reference_width > 0.0)) {
    throw ValidationError("reference_width: must be > 0");
  }
  Ensemble e;
  e.seed = seed;
  e.reference_width = reference_width;
  e.positions.resize(n);
  const double sigma = std::sqrt(0.5 / a);
  for (std::size_t i = 0; i < n; ++i) {
    e.positions[i] = x0 + sigma * standard_normal(seed ^ kInitialSalt, i, 0);
  }
  return e;
}

Ensemble sample_field_ensemble(std::size_t n, const FluidField1D& field,
                               std::uint64_t seed) {
  const auto x = field.grid();
  const auto rho = field.rho();
  const double h = field.spacing();
  std::vector<double> cdf(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * h * (rho[i - 1] + rho[i]);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw ValidationError("field: zero mass");

  Ensemble e;
  e.seed = seed;
  e.reference_width = x.back() - x.front();
  e.positions.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint64_t bits = splitmix64(splitmix64(seed ^ kInitialSalt) + p);
    const double target = (to_unit(bits) - 0x1.0p-54) * total;
    const auto it = std::lower_bound(cdf.begin() + 1, cdf.end(), target);
    const auto i = static_cast<std::size_t>(it - cdf.begin());
    // Invert the quadratic CDF of the linear density on cell [i-1, i].
    const double r0 = rho[i - 1];
    const double slope = (rho[i] - r0) / h;
    const double need = target - cdf[i - 1];
    double d;
    if (std::abs(slope) * h < 1e-12 * std::max(r0, 1e-300)) {
      d = r0 > 0.0 ? need / r0 : 0.5 * h;
    } else {
      d = 2.0 * need / (r0 + std::sqrt(std::max(0.0, r0 * r0 + 2.0 * slope * need)));
    }
    e.positions[p] = x[i - 1] + std::clamp(d, 0.0, h);
  }
  return e;
}

Ensemble propagate_ensemble(Ensemble e, const Drift& drift, double nu,
                            double dt, std::size_t n_steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt: must be > 0");
  if (!(nu >= 0.0)) throw ValidationError("nu: must be >= 0");
  if (!drift) throw ValidationError("drift: not set");
  const double noise = std::sqrt(2.0 * nu * dt);
  const double limit = 1e3 * e.reference_width;
  const std::uint64_t first_step = e.steps_taken;
  constexpr auto kNone = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> failed_at(e.positions.size(), kNone);

  parallel_for(e.positions.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      double x = e.positions[p];
      for (std::size_t k = 0; k < n_steps; ++k) {
        const std::uint64_t step = first_step + k + 1;
        x += drift(x) * dt;
        if (noise > 0.0) x += noise * standard_normal(e.seed, p, step);
        if (!std::isfinite(x) || std::abs(x) > limit) {
          failed_at[p] = step;
          break;
        }
      }
      e.positions[p] = x;
    }
  });

  const auto worst = std::min_element(failed_at.begin(), failed_at.end());
  if (worst != failed_at.end() && *worst != kNone) {
    const double t_fail = e.t + static_cast<double>(*worst - first_step) * dt;
    throw NumericalError("divergence: particle " +
                             std::to_string(worst - failed_at.begin()) +
                             " left the domain at step " + std::to_string(*worst),
                         t_fail, static_cast<long long>(*worst));
  }
  e.t += static_cast<double>(n_steps) * dt;
  e.steps_taken += n_steps;
  return e;
}

Histogram histogram(std::span<const double> samples, double x_min,
                    double x_max, std::size_t bins) {
  if (bins == 0 || !(x_max > x_min)) {
    throw ValidationError("histogram: need bins >= 1 and x_max > x_min");
  }
  Histogram h;
  h.x_min = x_min;
  h.width = (x_max - x_min) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (const double x : samples) {
    const double s = (x - x_min) / h.width;
    if (s >= 0.0 && s < static_cast<double>(bins)) {
      ++counts[static_cast<std::size_t>(s)];
    } else {
      ++h.outside;
    }
  }
  h.density.resize(bins);
  const double scale = samples.empty()
                           ? 0.0
                           : 1.0 / (static_cast<double>(samples.size()) * h.width);
  for (std::size_t b = 0; b < bins; ++b) {
    h.density[b] = static_cast<double>(counts[b]) * scale;
  }
  return h;
}

SampleMoments sample_moments(std::span<const double> samples) {
  SampleMoments m;
  if (samples.empty()) return m;
  const double n = static_cast<double>(samples.size());
  for (const double x : samples) m.mean += x;
  m.mean /= n;
  for (const double x : samples) {
    const double d = (x - m.mean) * (x - m.mean);
    m.variance += d;
    m.fourth_central += d * d;
  }
  m.variance /= n;
  m.fourth_central /= n;
  return m;
}

EmpiricalComparison empirical_compare(const Ensemble& e,
                                      const FluidField1D& reference,
                                      std::size_t bins) {
  if (bins < 10) throw ValidationError("bins: must be >= 10");
  if (e.positions.empty()) throw ValidationError("ensemble: no particles");
  const auto x = reference.grid();
  const auto rho = reference.rho();
  const double h = reference.spacing();
  const double mass = trapezoid(rho, h);

  const Histogram hist = histogram(e.positions, x.front(), x.back(), bins);
  const auto n = static_cast<double>(e.positions.size());

  // Bin-averaged reference density from the piecewise-linear interpolant.
  constexpr int kSub = 32;
  auto rho_at = [&](double xq) {
    const double s = std::clamp((xq - x.front()) / h, 0.0,
                                static_cast<double>(x.size() - 1));
    const auto i = std::min(static_cast<std::size_t>(s), x.size() - 2);
    const double w = s - static_cast<double>(i);
    return ((1.0 - w) * rho[i] + w * rho[i + 1]) / mass;
  };

  EmpiricalComparison out;
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = hist.x_min + static_cast<double>(b) * hist.width;
    double avg = 0.0;
    for (int k = 0; k < kSub; ++k) {
      avg += rho_at(lo + (k + 0.5) * hist.width / kSub);
    }
    avg /= kSub;
    out.hist_l1_error += std::abs(hist.density[b] - avg) * hist.width;
    const double p = std::clamp(avg * hist.width, 0.0, 1.0);
    out.hist_l1_se += std::sqrt(2.0 / std::numbers::pi) * std::sqrt(p * (1.0 - p) / n);
  }
  out.hist_l1_error += static_cast<double>(hist.outside) / n;

  const double ref_mean = [&] {
    std::vector<double> f(x.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = rho[i] * x[i];
    return trapezoid(f, h) / mass;
  }();
  const double ref_var = [&] {
    std::vector<double> f(x.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = rho[i] * (x[i] - ref_mean) * (x[i] - ref_mean);
    }
    return trapezoid(f, h) / mass;
  }();

  const SampleMoments m = sample_moments(e.positions);
  out.mean_error = m.mean - ref_mean;
  out.mean_se = std::sqrt(m.variance / n);
  out.var_error = m.variance - ref_var;
  out.var_se = std::sqrt(std::max(0.0, m.fourth_central - m.variance * m.variance) / n);
  return out;
}

double histogram_l1(const Histogram& a, const Histogram& b) {
  if (a.density.size() != b.density.size() || a.width != b.width ||
      a.x_min != b.x_min) {
    throw ValidationError("histogram: binning mismatch");
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.density.size(); ++i) {
    l1 += std::abs(a.density[i] - b.density[i]) * a.width;
  }
  return l1;
}

}  // namespace nsk
