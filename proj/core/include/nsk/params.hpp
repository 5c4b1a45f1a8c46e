#pragma once

#include <array>

namespace nsk {

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct SymMatrix2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a12; }
  double trace() const { return a11 + a22; }
};

/// Transport coefficients implied by the stochastic weights.
struct TransportSet {
  double kappa = 0.0;            ///< capillarity / quantum coefficient [m^4/s^2]
  double xi = 0.0;               ///< kinematic viscosity eta/(2 M rho) [m^2/s]
  double eta_per_density = 0.0;  ///< eta/rho, so eta(x) = rho(x) * eta_per_density
};

/// The physical view consumed by the closed-form and field-level routines.
/// Unlike ModelParameters this is a plain aggregate: it may sit on the
/// degenerate line kappa = xi^2, which closed-form checks need to reach.
struct FluidCoefficients {
  double mass = 1.0;
  double nu = 1.0;
  double kappa = 0.0;
  double xi = 0.0;
};

struct LagrangianMatrix {
  SymMatrix2 matrix;
  double det = 0.0;
  bool degenerate = false;
};

/// G with its eigenvalues, lambda_plus >= lambda_minus.
struct MomentumSpectrum {
  SymMatrix2 g;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
};

struct StructuralMatrices {
  SymMatrix2 m_cal;
  double det_m_cal = 0.0;
  MomentumSpectrum spectrum;
};

/// Stochastic-variational inputs. Immutable; construction enforces
/// M, nu, hbar > 0, finite alphas and det(M) != 0.
class ModelParameters {
 public:
  static ModelParameters create(double mass, double nu, double alpha_a,
                                double alpha_b, double mu = 0.0,
                                double hbar = 1.0);

  /// Inverts kappa = 2 alpha_B nu^2, xi = alpha_A (1 + 2 alpha_B) nu.
  /// Requires kappa != -nu^2 (1 + 2 alpha_B = 0 leaves alpha_A free).
  static ModelParameters from_transport(double mass, double nu, double kappa,
                                        double xi, double mu = 0.0,
                                        double hbar = 1.0);

  double mass() const { return mass_; }
  double nu() const { return nu_; }
  double alpha_a() const { return alpha_a_; }
  double alpha_b() const { return alpha_b_; }
  double mu() const { return mu_; }
  double hbar() const { return hbar_; }

  TransportSet transport() const;
  FluidCoefficients coefficients() const;

 private:
  ModelParameters(double mass, double nu, double alpha_a, double alpha_b,
                  double mu, double hbar)
      : mass_(mass), nu_(nu), alpha_a_(alpha_a), alpha_b_(alpha_b), mu_(mu),
        hbar_(hbar) {}

  double mass_;
  double nu_;
  double alpha_a_;
  double alpha_b_;
  double mu_;
  double hbar_;
};

TransportSet derive_transport(const ModelParameters& p);

/// det(M) = alpha_B/2 - alpha_A^2 (1/2 + alpha_B)^2. The degenerate flag
/// uses |det| < 1e-14 (1 + |alpha_A| + |alpha_B|)^2.
LagrangianMatrix lagrangian_matrix_det(double alpha_a, double alpha_b);

MomentumSpectrum momentum_matrix_spectrum(const TransportSet& t, double nu);
MomentumSpectrum momentum_matrix_spectrum(double kappa, double xi, double nu);

StructuralMatrices structural_matrices(const ModelParameters& p);

/// (alpha_A, alpha_B, nu) = (0, 1/2, hbar/(2M)): Madelung hydrodynamics.
ModelParameters quantum_preset(double mass, double hbar);

/// quantum_preset(1, 1).
ModelParameters natural_units();

}  // namespace nsk
