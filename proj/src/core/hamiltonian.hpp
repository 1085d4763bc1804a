#pragma once

#include <string>

#include "core/grid.hpp"
#include "core/hardy.hpp"
#include "core/symplectic.hpp"

namespace mpk {

/// hbar convention used throughout: 1/(2 pi).
inline constexpr double kDefaultHbar = 1.0 / (2.0 * M_PI);

/// Quadratic Hamiltonian H(z) = 1/2 <Mcal z, z> on R^{2d}, Mcal symmetric.
class QuadraticHamiltonian {
public:
  QuadraticHamiltonian(int dim, Matrix mcal);

  int dim() const { return dim_; }
  const Matrix& mcal() const { return mcal_; }
  /// X = J Mcal, the infinitesimal generator of the flow.
  const Matrix& generator() const { return x_; }

  std::string to_json() const;
  static QuadraticHamiltonian from_json_file(const std::string& path);
  static QuadraticHamiltonian from_json_text(const std::string& text);

private:
  int dim_;
  Matrix mcal_;
  Matrix x_;
};

/// Preset: 2d anisotropic oscillator with Mcal = diag(0, 1, 0, 1)
/// (free first coordinate, unit oscillator in the second).
QuadraticHamiltonian anisotropic_oscillator_2d();

/// Preset: harmonic oscillator with frequencies omega_j, mass m and the
/// given hbar. Position entries m omega_j^2 / (2 pi hbar), momentum entries
/// (2 pi hbar)/m; at hbar = 1/(2 pi) this is the mechanical
/// diag(m omega^2, 1/m).
QuadraticHamiltonian harmonic_oscillator(const Vector& omega, double mass,
                                         double hbar = kDefaultHbar);

struct FlowSample {
  double t = 0.0;
  SymplecticMatrix s;
};

/// S_t = exp(t J Mcal), verified symplectic. Guards |t| * ||J Mcal|| < 1e4.
FlowSample flow(const QuadraticHamiltonian& h, double t);

/// Closed-form oscillator blocks at hbar = 1/(2 pi): A = D = diag(cos w t),
/// B = (1/m) diag(sin(w t)/w), C = -m diag(w sin(w t)). Analytic oracle for
/// flow().
void oscillator_blocks(const Vector& omega, double mass, double t, Matrix* a,
                       Matrix* b, Matrix* c, Matrix* d);

/// u(., t) = apply_metaplectic(S_t, u0); modulus-faithful, global phase
/// unspecified.
GridFunction propagate(const GridFunction& u0, const QuadraticHamiltonian& h,
                       double t, WarningSink* warnings = nullptr);

/// classify() against the flow at time t1. B_{t1} = 0 yields a
/// DegenerateTime verdict instead of a classification.
HardyVerdict dynamical_hardy_check(const DecayCertificate& cert,
                                   const QuadraticHamiltonian& h, double t1,
                                   double tau_eig = kDefaultTauEig);

/// Operator-norm (max-eigenvalue) vanishing criterion next to the
/// full-spectrum one, for isotropic certificates M = a P, N = b Q with P, Q
/// the projectors onto ker(B)^perp and R(B).
struct KnutsenReport {
  double a = 0.0;
  double b = 0.0;
  double sigma_max_b = 0.0;
  double operator_norm_value = 0.0;  // a b sigma_max(B)^2
  bool operator_norm_fires = false;
  Vector eigenvalues;                // full spectrum, descending
  double max_lambda = 0.0;
  bool spectrum_fires = false;
  bool agree = false;
  int binding_axis = -1;  // argmax of per-axis lambda when B is diagonal
};

KnutsenReport knutsen_comparison(const DecayCertificate& cert,
                                 const QuadraticHamiltonian& h, double t1,
                                 double tau_eig = kDefaultTauEig);

}  // namespace mpk
