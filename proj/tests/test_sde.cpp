#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "nsk/errors.hpp"
#include "nsk/sde.hpp"
#include "nsk/solver.hpp"
#include "nsk/states.hpp"
#include "nsk/uncertainty.hpp"

namespace nsk {
namespace {

FluidCoefficients coeffs(double nu) {
  FluidCoefficients c;
  c.mass = 1.0;
  c.nu = nu;
  return c;
}

FluidField1D gaussian_field(const GaussianState& g, double half_width, std::size_t n) {
  return sample_on_grid(g, uniform_grid(-half_width, half_width, n)).field;
}

// Variance standard error for a Gaussian sample of size n.
double gaussian_var_se(double var, std::size_t n) {
  return var * std::sqrt(2.0 / static_cast<double>(n));
}

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) {
    if (const char* old = std::getenv("NSK_THREADS")) saved_ = old, had_ = true;
    setenv("NSK_THREADS", value, 1);
  }
  ~ThreadsEnv() {
    if (had_) {
      setenv("NSK_THREADS", saved_.c_str(), 1);
    } else {
      unsetenv("NSK_THREADS");
    }
  }

 private:
  std::string saved_;
  bool had_ = false;
};

TEST(Drift, FlatDensityGivesFluidVelocity) {
  const auto x = uniform_grid(-1.0, 1.0, 41);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = 0.3 + 0.2 * x[i];
  const auto f = FluidField1D::create(x, std::vector<double>(x.size(), 0.5), v);
  const DriftField u = drift_field(f, coeffs(0.7));
  for (const double q : {-0.93, -0.2, 0.0, 0.41, 0.99}) {
    EXPECT_NEAR(u(q), 0.3 + 0.2 * q, 1e-14) << q;
  }
}

TEST(Drift, GaussianAtRestIsOrnsteinUhlenbeck) {
  const double a = 1.7, x0 = 0.4, nu = 0.35;
  const DriftField u = drift_field(gaussian_field(GaussianState::create(a, 0, x0, 0), 6.0, 601),
                                   coeffs(nu));
  for (const double q : {-2.0, -0.5, 0.4, 1.13, 2.7}) {
    EXPECT_NEAR(u(q), -2.0 * a * nu * (q - x0), 1e-9) << q;
  }
}

TEST(Drift, AffineFlowSuperposes) {
  const double a = 0.8, b = -0.3, x0 = -0.2, v0 = 0.6, nu = 0.5;
  const DriftField u = drift_field(gaussian_field(GaussianState::create(a, b, x0, v0), 8.0, 801),
                                   coeffs(nu));
  for (const double q : {-3.0, -1.0, 0.05, 2.2}) {
    EXPECT_NEAR(u(q), v0 + b * q - 2.0 * a * nu * (q - x0), 1e-9) << q;
  }
}

TEST(Drift, OffGridUsesNearestEdge) {
  const DriftField u({0.0, 1.0, 2.0}, {1.0, 3.0, -1.0});
  EXPECT_DOUBLE_EQ(u(-5.0), 1.0);
  EXPECT_DOUBLE_EQ(u(7.0), -1.0);
  EXPECT_DOUBLE_EQ(u(0.25), 1.5);
  EXPECT_DOUBLE_EQ(u(1.5), 1.0);
}

TEST(Ensemble, ZeroNoiseTranslatesExactly) {
  Ensemble e;
  e.reference_width = 10.0;
  for (int i = -8; i <= 8; ++i) e.positions.push_back(i / 8.0);
  const Ensemble out = propagate_ensemble(e, [](double) { return 0.5; }, 0.0, 0.25, 12);
  for (std::size_t i = 0; i < e.positions.size(); ++i) {
    EXPECT_EQ(out.positions[i], e.positions[i] + 0.5 * 0.25 * 12);
  }
  EXPECT_DOUBLE_EQ(out.t, 3.0);
  EXPECT_EQ(out.steps_taken, 12u);
}

TEST(Ensemble, SameSeedIsBitIdentical) {
  const Drift ou = [](double x) { return -x; };
  const Ensemble e = sample_gaussian_ensemble(2000, 1.0, 0.0, 99, 10.0);
  const Ensemble a = propagate_ensemble(e, ou, 0.5, 1e-2, 50);
  const Ensemble b = propagate_ensemble(e, ou, 0.5, 1e-2, 50);
  EXPECT_EQ(a.positions, b.positions);
  const Ensemble c = propagate_ensemble(sample_gaussian_ensemble(2000, 1.0, 0.0, 100, 10.0),
                                        ou, 0.5, 1e-2, 50);
  EXPECT_NE(a.positions, c.positions);
}

TEST(Ensemble, WorkerCountDoesNotChangeResult) {
  const Drift ou = [](double x) { return -x; };
  const Ensemble e = sample_gaussian_ensemble(3001, 1.0, 0.0, 7, 10.0);
  std::vector<double> serial, threaded;
  {
    ThreadsEnv env("1");
    serial = propagate_ensemble(e, ou, 0.5, 1e-2, 40).positions;
  }
  {
    ThreadsEnv env("5");
    threaded = propagate_ensemble(e, ou, 0.5, 1e-2, 40).positions;
  }
  EXPECT_EQ(serial, threaded);
}

TEST(Ensemble, SplitRunMatchesSingleRun) {
  const Drift ou = [](double x) { return -0.5 * x; };
  const Ensemble e = sample_gaussian_ensemble(500, 2.0, 0.1, 3, 10.0);
  const Ensemble once = propagate_ensemble(e, ou, 0.5, 1e-2, 30);
  const Ensemble twice = propagate_ensemble(propagate_ensemble(e, ou, 0.5, 1e-2, 10),
                                            ou, 0.5, 1e-2, 20);
  EXPECT_EQ(once.positions, twice.positions);
  EXPECT_DOUBLE_EQ(once.t, twice.t);
}

TEST(Ensemble, StandardNormalHasUnitMoments) {
  const std::size_t n = 200000;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = standard_normal(12345, i, 17);
  const SampleMoments m = sample_moments(z);
  EXPECT_NEAR(m.mean, 0.0, 3.0 / std::sqrt(double(n)));
  EXPECT_NEAR(m.variance, 1.0, 3.0 * gaussian_var_se(1.0, n));
  EXPECT_NEAR(m.fourth_central, 3.0, 3.0 * std::sqrt(96.0 / double(n)));
}

TEST(Ensemble, OrnsteinUhlenbeckStaysStationary) {
  const double a = 1.0, nu = 0.5;
  const std::size_t n = 40000;
  const Drift ou = [&](double x) { return -2.0 * a * nu * x; };
  Ensemble e = sample_gaussian_ensemble(n, a, 0.0, 2024, 10.0);
  const double var = 0.5 / a;
  for (int k = 0; k < 4; ++k) {
    e = propagate_ensemble(e, ou, nu, 1e-3, 250);
    const SampleMoments m = sample_moments(e.positions);
    EXPECT_NEAR(m.variance, var, 3.0 * gaussian_var_se(var, n)) << "t = " << e.t;
    EXPECT_NEAR(m.mean, 0.0, 3.0 * std::sqrt(var / double(n))) << "t = " << e.t;
  }
}

TEST(Ensemble, RelaxationFromPointFollowsOrnsteinUhlenbeck) {
  const double a = 1.5, nu = 0.5;
  const std::size_t n = 40000;
  const Drift ou = [&](double x) { return -2.0 * a * nu * x; };
  Ensemble e;
  e.positions.assign(n, 0.0);
  e.seed = 5;
  e.reference_width = 10.0;
  for (int k = 0; k < 5; ++k) {
    e = propagate_ensemble(e, ou, nu, 1e-3, 100);
    const double var = (0.5 / a) * (1.0 - std::exp(-4.0 * a * nu * e.t));
    const SampleMoments m = sample_moments(e.positions);
    EXPECT_NEAR(m.variance, var, 3.0 * gaussian_var_se(var, n)) << "t = " << e.t;
  }
}

TEST(Ensemble, FieldSamplingReproducesMoments) {
  const GaussianState g = GaussianState::create(2.0, 0.0, 0.3, 0.0);
  const FluidField1D f = gaussian_field(g, 6.0, 1201);
  const std::size_t n = 50000;
  const Ensemble e = sample_field_ensemble(n, f, 11);
  const SampleMoments m = sample_moments(e.positions);
  EXPECT_NEAR(m.mean, 0.3, 3.0 * std::sqrt(g.variance() / double(n)));
  EXPECT_NEAR(m.variance, g.variance(), 3.0 * gaussian_var_se(g.variance(), n));
}

TEST(Ensemble, DivergenceGuardReportsStep) {
  Ensemble e;
  e.positions = {0.0, 1.0, -2.0};
  e.reference_width = 1.0;
  try {
    propagate_ensemble(e, [](double x) { return 50.0 * x; }, 0.0, 0.1, 100);
    FAIL() << "expected divergence";
  } catch (const NumericalError& err) {
    // |x| grows by 6x per step from 2: 2 * 6^4 > 1000 at step 4.
    EXPECT_EQ(err.step(), 4);
    EXPECT_NEAR(err.time(), 0.4, 1e-12);
  }
}

TEST(Ensemble, RejectsBadInputs) {
  Ensemble e;
  e.positions = {0.0};
  const Drift zero = [](double) { return 0.0; };
  EXPECT_THROW(propagate_ensemble(e, zero, 0.5, 0.0, 1), ValidationError);
  EXPECT_THROW(propagate_ensemble(e, zero, -0.5, 0.1, 1), ValidationError);
  EXPECT_THROW(propagate_ensemble(e, Drift{}, 0.5, 0.1, 1), ValidationError);
  EXPECT_THROW(sample_gaussian_ensemble(10, 0.0, 0.0, 1, 1.0), ValidationError);
}

TEST(Compare, HistogramAgainstItselfIsZero) {
  const Ensemble e = sample_gaussian_ensemble(5000, 1.0, 0.0, 8, 10.0);
  const Histogram h = histogram(e.positions, -5.0, 5.0, 50);
  EXPECT_EQ(histogram_l1(h, h), 0.0);
  double mass = 0.0;
  for (const double d : h.density) mass += d * h.width;
  EXPECT_NEAR(mass + double(h.outside) / 5000.0, 1.0, 1e-12);
}

TEST(Compare, StationaryGroundStateWithinNoise) {
  const double a = 1.0, nu = 0.5;
  const std::size_t n = 50000;
  const FluidField1D ref = gaussian_field(GaussianState::create(a, 0, 0, 0), 8.0, 1601);
  Ensemble e = sample_gaussian_ensemble(n, a, 0.0, 31337, 16.0);
  e = propagate_ensemble(e, [&](double x) { return -2.0 * a * nu * x; }, nu, 1e-3, 500);
  const EmpiricalComparison c = empirical_compare(e, ref, 64);
  EXPECT_LT(std::abs(c.mean_error), 3.0 * c.mean_se);
  EXPECT_LT(std::abs(c.var_error), 3.0 * c.var_se);
  // L1 of a multinomial histogram concentrates near its expectation.
  EXPECT_GT(c.hist_l1_error, 0.5 * c.hist_l1_se);
  EXPECT_LT(c.hist_l1_error, 1.5 * c.hist_l1_se);
  EXPECT_THROW(empirical_compare(e, ref, 9), ValidationError);
}

TEST(Compare, HistogramErrorFollowsMonteCarloRate) {
  const double a = 1.0, nu = 0.5;
  const FluidField1D ref = gaussian_field(GaussianState::create(a, 0, 0, 0), 8.0, 1601);
  const Drift ou = [&](double x) { return -2.0 * a * nu * x; };
  auto mean_l1 = [&](std::size_t n) {
    double sum = 0.0;
    constexpr int kSeeds = 16;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      Ensemble e = sample_gaussian_ensemble(n, a, 0.0, seed * 1000 + n, 16.0);
      e = propagate_ensemble(e, ou, nu, 1e-3, 100);
      sum += empirical_compare(e, ref, 40).hist_l1_error;
    }
    return sum / kSeeds;
  };
  const double ratio = mean_l1(5000) / mean_l1(20000);
  EXPECT_GT(ratio, 1.7);
  EXPECT_LT(ratio, 2.3);
}

TEST(Compare, MeanMomentumMatchesFieldAverage) {
  // Sample average of M v(x_i) against the rho-weighted average of
  // (p_+ + p_-)/2 from the momentum fields.
  const auto params = ModelParameters::create(1.3, 1.0, 0.2, 0.4);
  const FluidCoefficients c = params.coefficients();
  const GaussianState g = GaussianState::create(0.9, 0.35, 0.2, -0.4);
  const FluidField1D f = gaussian_field(g, 9.0, 1801);
  const MomentumFields mf = momentum_fields(f, c);
  std::vector<double> avg(f.size(), 0.0);
  for (std::size_t i = 0; i < mf.p_plus.size(); ++i) {
    avg[mf.support.first + i] = 0.5 * (mf.p_plus[i] + mf.p_minus[i]);
  }
  const double field_mean = expectation(f, avg);

  const std::size_t n = 60000;
  const Ensemble e = sample_field_ensemble(n, f, 404);
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = c.mass * g.velocity(e.positions[i]);
  const SampleMoments m = sample_moments(p);
  EXPECT_NEAR(m.mean, field_mean, 3.0 * std::sqrt(m.variance / double(n)));
  EXPECT_NEAR(field_mean, c.mass * g.velocity(g.x0), 1e-8);
}

TEST(Compare, EnsembleTracksNavierStokesRun) {
  // Drift refreshed from every PDE step; the ensemble variance must follow
  // the evolving density at each checkpoint.
  SolverConfig cfg;
  cfg.params = ModelParameters::create(1.0, 1.0, 0.1, 0.0);
  cfg.x_min = -5.0;
  cfg.x_max = 5.0;
  cfg.n_cells = 256;
  cfg.eos = {1.0, 5.0 / 3.0};
  cfg.boundary = Boundary::reflecting;
  const FluidField1D init =
      sample_on_grid(GaussianState::create(2.0, 0, 0, 0), cell_centers(cfg)).field;
  cfg.dt = 1e-3;
  cfg.t_end = 0.25;
  cfg.diag_stride = 1;
  const Trajectory tr = evolve(init, cfg);
  const FluidCoefficients c = cfg.params.coefficients();

  const std::size_t n = 30000;
  Ensemble e = sample_field_ensemble(n, tr.snapshots.front(), 77);
  int checked = 0;
  for (std::size_t k = 0; k + 1 < tr.snapshots.size(); ++k) {
    const DriftField u = drift_field(tr.snapshots[k], c);
    e = propagate_ensemble(e, u, c.nu, tr.times[k + 1] - tr.times[k], 1);
    if ((k + 1) % 50 == 0) {
      const EmpiricalComparison cmp = empirical_compare(e, tr.snapshots[k + 1], 40);
      EXPECT_LT(std::abs(cmp.var_error), 3.0 * cmp.var_se) << "t = " << tr.times[k + 1];
      ++checked;
    }
  }
  EXPECT_EQ(checked, 5);
  // The pressure-driven spread is well above the noise of the comparison.
  const double v0 = sample_moments(sample_field_ensemble(n, tr.snapshots.front(), 1).positions).variance;
  EXPECT_GT(sample_moments(e.positions).variance - v0, 10.0 * gaussian_var_se(v0, n));
}

}  // namespace
}  // namespace nsk
