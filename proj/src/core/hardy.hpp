#pragma once

#include <functional>
#include <optional>
#include <string>

#include "core/grid.hpp"
#include "core/symplectic.hpp"

namespace mpk {

inline constexpr double kDefaultTauEig = 1e-8;

/// Gaussian-decay assumptions: |f| <= alpha e^{-pi M x1.x1} along
/// ker(B)^perp and |Sf| <= beta e^{-pi N xi1.xi1} along R(B), with alpha and
/// beta uniform fiber bounds.
struct DecayCertificate {
  Matrix m;
  Matrix n;
  double alpha_bound = 1.0;
  double beta_bound = 1.0;

  DecayCertificate(Matrix m_in, Matrix n_in, double alpha = 1.0,
                   double beta = 1.0);
};

enum class HardyStatus {
  Vanishing,
  Extremal,
  Admissible,
  ConditionsViolated,
  DegenerateTime,
};

const char* hardy_status_name(HardyStatus s);

/// Parameters of the boundary-case family gamma(x) e^{-pi(M + i B^+A)x1.x1}
/// e^{2 pi i C^T A x . x1}.
struct ExtremalWitness {
  Matrix m;
  Matrix b_pinv_a;
  Matrix ct_a;
  Matrix ker_perp_basis;
  Matrix ker_basis;
};

struct HardyVerdict {
  HardyStatus status = HardyStatus::ConditionsViolated;
  Vector eigenvalues;  // nonzero spectrum, descending
  double max_eigenvalue = 0.0;
  double ker_residual = 0.0;
  double range_residual = 0.0;
  std::optional<ExtremalWitness> witness;
  std::string note;

  std::string to_json() const;
};

struct ConditionsReport {
  bool ok = false;
  double ker_residual = 0.0;    // principal-angle gap ker(M) vs ker(B)
  double range_residual = 0.0;  // principal-angle gap R(N) vs R(B)
};

/// Checks ker(M) = ker(B) and R(N) = R(B) at the given tolerance.
ConditionsReport check_conditions(const Matrix& m, const Matrix& n,
                                  const SymplecticMatrix& s, double tol = 1e-8);

/// Nonzero spectrum of M B^T N B via the restriction to ker(B)^perp,
/// descending. Throws ConditionsViolated when the kernel/range conditions
/// fail.
Vector hardy_eigenvalues(const Matrix& m, const Matrix& n,
                         const SymplecticMatrix& s, double tol_rank = -1.0,
                         double cond_tol = 1e-8);

HardyVerdict classify(const DecayCertificate& cert, const SymplecticMatrix& s,
                      double tau_eig = kDefaultTauEig, double tol_rank = -1.0);

/// Samples the extremal family member with the given M and fiber function
/// gamma (given in ker(B) coordinates, dimension d - r).
GridFunction extremal_function(
    const SymplecticMatrix& s, const Matrix& m,
    const std::function<Complex(const Vector&)>& gamma, int n, double l,
    double tol_rank = -1.0);

struct GaussianFit {
  Matrix m_fit;      // r x r, PSD, in the subspace coordinates
  double residual;   // RMS misfit of -log|f| against the quadratic model
  bool non_gaussian;
  int samples_used;
};

/// Least-squares fit of -log|f| along the subspace against
/// pi * M u.u + c (one constant per fiber offset). Uses samples with
/// |f| > 1e-12 * peak; needs at least 10 r^2 of them.
GaussianFit fit_gaussian_decay(const GridFunction& f, const SubspaceBasis& along,
                               const std::vector<Vector>& offsets = {});

struct SharpnessReport {
  GridFunction f;
  GridFunction sf;
  double outside_mass_fraction;  // mass of Sf outside the predicted slab
};

/// Compactly-supported-in-x2 witness: Gaussian along ker(B)^perp times the
/// indicator of a box of the given half-width in D^T(R(B)^perp) coordinates.
/// Requires 1 <= rank(B) < d.
SharpnessReport sharpness_witness(const SymplecticMatrix& s, double k_halfwidth,
                                  int n, double l, double tol_rank = -1.0,
                                  WarningSink* warnings = nullptr);

}  // namespace mpk
