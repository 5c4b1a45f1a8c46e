#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nsk/field.hpp"
#include "nsk/params.hpp"

namespace nsk {

/// Forward drift u+ = v + nu d(ln rho) sampled on the retained support of a
/// field. Off-grid positions interpolate linearly; beyond the support the
/// nearest edge value is used.
class DriftField {
 public:
  DriftField(std::vector<double> x, std::vector<double> u_plus);

  double operator()(double x) const;
  std::span<const double> grid() const { return x_; }
  std::span<const double> values() const { return u_; }

 private:
  std::vector<double> x_;
  std::vector<double> u_;
  double h_;
};

/// Throws ValidationError if the support has a gap below the floor.
DriftField drift_field(const FluidField1D& field, const FluidCoefficients& c,
                       double relative_floor = kRelativeDensityFloor);

using Drift = std::function<double(double)>;

struct Ensemble {
  std::vector<double> positions;
  std::uint64_t seed = 0;
  double t = 0.0;
  /// Steps already taken; keys the noise so resumed runs continue the stream.
  std::uint64_t steps_taken = 0;
  /// Width of the initial domain; the divergence guard is 1e3 times this.
  double reference_width = 1.0;
};

/// Standard normal for (seed, particle, step); pure function of its inputs.
double standard_normal(std::uint64_t seed, std::uint64_t particle,
                       std::uint64_t step);

/// N draws from a Gaussian density (A, x0) using the ensemble noise stream
/// at step index 0 offset by a fixed salt.
Ensemble sample_gaussian_ensemble(std::size_t n, double a, double x0,
                                  std::uint64_t seed, double reference_width);

/// N draws from a sampled density by inverting its piecewise-linear CDF.
Ensemble sample_field_ensemble(std::size_t n, const FluidField1D& field,
                               std::uint64_t seed);

/// Euler-Maruyama: x <- x + u+(x) dt + sqrt(2 nu dt) zeta. Particles run in
/// parallel; the result does not depend on the worker count. Throws
/// NumericalError if a position leaves 1e3 * reference_width.
Ensemble propagate_ensemble(Ensemble e, const Drift& drift, double nu,
                            double dt, std::size_t n_steps);

struct Histogram {
  double x_min = 0.0;
  double width = 0.0;
  std::vector<double> density;  ///< normalised so sum density * width = 1
  std::size_t outside = 0;      ///< samples outside [x_min, x_max)
};

Histogram histogram(std::span<const double> samples, double x_min,
                    double x_max, std::size_t bins);

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
  double fourth_central = 0.0;
};

SampleMoments sample_moments(std::span<const double> samples);

struct EmpiricalComparison {
  double hist_l1_error = 0.0;
  double hist_l1_se = 0.0;  ///< expected L1 noise floor for this N and binning
  double mean_error = 0.0;
  double mean_se = 0.0;
  double var_error = 0.0;
  double var_se = 0.0;
};

/// Histogram over the reference grid against the bin-averaged reference
/// density; mean and variance against the reference moments. Errors are
/// signed sample - reference (L1 is non-negative). Requires bins >= 10.
EmpiricalComparison empirical_compare(const Ensemble& e,
                                      const FluidField1D& reference,
                                      std::size_t bins);

/// L1 distance between two histograms on the same binning.
double histogram_l1(const Histogram& a, const Histogram& b);

}  // namespace nsk
