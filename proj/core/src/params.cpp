#include "nsk/params.hpp"

#include <cmath>
#include <string>

#include "nsk/errors.hpp"

namespace nsk {
namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

void require_positive(double value, const char* name) {
  require_finite(value, name);
  if (!(value > 0.0)) {
    throw ValidationError(std::string(name) + " must be > 0");
  }
}

}  // namespace

ModelParameters ModelParameters::create(double mass, double nu, double alpha_a,
                                        double alpha_b, double mu,
                                        double hbar) {
  require_positive(mass, "mass");
  require_positive(nu, "nu");
  require_positive(hbar, "hbar");
  require_finite(alpha_a, "alpha_a");
  require_finite(alpha_b, "alpha_b");
  require_finite(mu, "mu");
  if (mu < 0.0) {
    throw ValidationError("mu must be >= 0");
  }
  if (lagrangian_matrix_det(alpha_a, alpha_b).degenerate) {
    throw DegenerateParametersError(
        "degenerate parameters: det(M) = 0 (kappa = xi^2), momenta undefined");
  }
  return ModelParameters(mass, nu, alpha_a, alpha_b, mu, hbar);
}

ModelParameters ModelParameters::from_transport(double mass, double nu,
                                                double kappa, double xi,
                                                double mu, double hbar) {
  require_positive(nu, "nu");
  require_finite(kappa, "kappa");
  require_finite(xi, "xi");
  const double alpha_b = kappa / (2.0 * nu * nu);
  const double weight = 1.0 + 2.0 * alpha_b;
  if (weight == 0.0) {
    throw ValidationError("kappa = -nu^2 does not determine alpha_a");
  }
  const double alpha_a = xi / (weight * nu);
  return create(mass, nu, alpha_a, alpha_b, mu, hbar);
}

TransportSet ModelParameters::transport() const {
  return derive_transport(*this);
}

FluidCoefficients ModelParameters::coefficients() const {
  const TransportSet t = transport();
  return FluidCoefficients{mass_, nu_, t.kappa, t.xi};
}

TransportSet derive_transport(const ModelParameters& p) {
  const double nu = p.nu();
  const double weight = 1.0 + 2.0 * p.alpha_b();
  TransportSet t;
  t.kappa = 2.0 * p.alpha_b() * nu * nu;
  t.xi = p.alpha_a() * weight * nu;
  t.eta_per_density = 2.0 * p.alpha_a() * weight * nu * p.mass();
  require_finite(t.kappa, "kappa");
  require_finite(t.xi, "xi");
  return t;
}

LagrangianMatrix lagrangian_matrix_det(double alpha_a, double alpha_b) {
  require_finite(alpha_a, "alpha_a");
  require_finite(alpha_b, "alpha_b");
  const double half_b = 0.5 + alpha_b;
  LagrangianMatrix out;
  out.matrix.a11 = (0.5 + alpha_a) * half_b;
  out.matrix.a12 = 0.25 - 0.5 * alpha_b;
  out.matrix.a22 = (0.5 - alpha_a) * half_b;
  // Expanded form; cheaper on cancellation than a11*a22 - a12^2.
  out.det = 0.5 * alpha_b - alpha_a * alpha_a * half_b * half_b;
  const double scale = 1.0 + std::abs(alpha_a) + std::abs(alpha_b);
  out.degenerate = std::abs(out.det) < 1e-14 * scale * scale;
  return out;
}

MomentumSpectrum momentum_matrix_spectrum(double kappa, double xi, double nu) {
  require_positive(nu, "nu");
  require_finite(kappa, "kappa");
  require_finite(xi, "xi");
  const double k = kappa / (nu * nu);
  const double r = xi / nu;

  MomentumSpectrum s;
  s.g = SymMatrix2{k, -r, 1.0};
  const double trace = 1.0 + k;
  const double det = k - r * r;
  const double disc = std::sqrt((1.0 - k) * (1.0 - k) + 4.0 * r * r);
  // Take the larger-magnitude root from the closed form and recover the
  // other from the determinant; disc >= |1 - k| keeps the two roots apart.
  if (trace >= 0.0) {
    s.lambda_plus = 0.5 * (trace + disc);
    s.lambda_minus = det / s.lambda_plus;
  } else {
    s.lambda_minus = 0.5 * (trace - disc);
    s.lambda_plus = det / s.lambda_minus;
  }
  return s;
}

MomentumSpectrum momentum_matrix_spectrum(const TransportSet& t, double nu) {
  return momentum_matrix_spectrum(t.kappa, t.xi, nu);
}

StructuralMatrices structural_matrices(const ModelParameters& p) {
  const LagrangianMatrix m = lagrangian_matrix_det(p.alpha_a(), p.alpha_b());
  StructuralMatrices out;
  out.m_cal = m.matrix;
  out.det_m_cal = m.det;
  out.spectrum = momentum_matrix_spectrum(p.transport(), p.nu());
  return out;
}

ModelParameters quantum_preset(double mass, double hbar) {
  require_positive(mass, "mass");
  require_positive(hbar, "hbar");
  return ModelParameters::create(mass, hbar / (2.0 * mass), 0.0, 0.5, 0.0,
                                 hbar);
}

ModelParameters natural_units() { return quantum_preset(1.0, 1.0); }

}  // namespace nsk
