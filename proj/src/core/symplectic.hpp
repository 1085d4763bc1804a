#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "core/linalg.hpp"

namespace mpk {

inline constexpr double kDefaultTauSymp = 1e-9;

/// The standard symplectic form J on R^{2d}.
Matrix standard_j(int d);

/// A verified real symplectic matrix with its cached d x d block
/// decomposition
///
///     S = [ A  B ]
///         [ C  D ]
///
/// Construction rejects matrices whose symplectic residual, block relations
/// or block-formula inverse exceed tau_symp. Instances are immutable.
class SymplecticMatrix {
public:
  SymplecticMatrix(Matrix entries, double tau_symp = kDefaultTauSymp);

  int dim() const { return d_; }
  const Matrix& entries() const { return s_; }
  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  const Matrix& d_block() const { return d_blk_; }
  double tau_symp() const { return tau_; }

  /// max-norm of S^T J S - J.
  double symplectic_residual() const { return residual_; }

  /// Inverse from the block formula (D^T, -B^T; -C^T, A^T).
  SymplecticMatrix inverse() const;

  SymplecticMatrix transpose() const;

  friend SymplecticMatrix operator*(const SymplecticMatrix& x,
                                    const SymplecticMatrix& y);

private:
  int d_;
  double tau_;
  double residual_;
  Matrix s_, a_, b_, c_, d_blk_;
};

// ---- generators -----------------------------------------------------------

SymplecticMatrix make_j(int d);
/// [[I,0],[Q,I]] for symmetric Q.
SymplecticMatrix make_vq(const Matrix& q);
/// [[E^{-1},0],[0,E^T]] for invertible E.
SymplecticMatrix make_de(const Matrix& e);
/// [[I,P],[0,I]] for symmetric P.
SymplecticMatrix make_up(const Matrix& p);
/// Direct sum of plane rotations by the angles theta_j (diagonal
/// cos/sin blocks); sin(theta_j) = 0 is allowed.
SymplecticMatrix make_frft(const Vector& theta);
/// The 4d x 4d matrix acting on tensor products: every block of the result
/// is the direct sum of the factors' corresponding blocks.
SymplecticMatrix make_tensor(const SymplecticMatrix& s1,
                             const SymplecticMatrix& s2);

// ---- geometry of the B block ----------------------------------------------

struct SymplecticGeometry {
  FourSubspaces b_spaces;     // ker/range geometry of B
  Matrix b_pinv;              // Moore-Penrose inverse of B
  int rank = 0;               // numerical rank of B
  double tol = 0.0;           // rank tolerance used
};

SymplecticGeometry analyze_b(const SymplecticMatrix& s, double tol = -1.0);

/// Normalization constant (q_{R(B)^perp}(A^T) * prod of nonzero sv of B)^{-1/2}.
/// Rejects rank(B) = 0; the B = 0 operator is handled by the rescaling route.
double mu_s(const SymplecticMatrix& s, double tol = -1.0);

/// Split xi = xi1 + xi2 with xi1 in R(B) and xi2 in A(ker B).
struct ObliqueSplit {
  Vector part1;
  Vector part2;
};
ObliqueSplit decompose_output(const SymplecticMatrix& s, const Vector& xi,
                              double tol = -1.0);
/// Split x = x1 + x2 with x1 in ker(B)^perp and x2 in D^T A(ker B).
ObliqueSplit decompose_input(const SymplecticMatrix& s, const Vector& x,
                             double tol = -1.0);

// ---- block-relation reports (the eight derived rows) ------------------------

struct BlockRelationReport {
  int relation_id = 0;     // 1..8
  bool satisfied = false;
  double residual = 0.0;   // max subset residual; >= tau when an isomorphism fails
  double min_singular = 0.0;  // smallest singular value of the restricted map
};

std::array<BlockRelationReport, 8> verify_block_relations(
    const SymplecticMatrix& s, double tol = -1.0);

// ---- I/O --------------------------------------------------------------------

/// CSV: one header line "# symplectic d=<d>" then 2d rows of 2d values,
/// 17 significant digits.
void save_csv(const SymplecticMatrix& s, const std::string& path);
SymplecticMatrix load_symplectic_csv(const std::string& path,
                                     double tau_symp = kDefaultTauSymp);

/// JSON: {"d": n, "rows": [[...], ...]}.
std::string to_json(const SymplecticMatrix& s);
void save_json(const SymplecticMatrix& s, const std::string& path);
SymplecticMatrix load_symplectic_json(const std::string& path,
                                      double tau_symp = kDefaultTauSymp);

/// Generic square-matrix JSON ({"rows": [[...]]}), used for M/N certificates.
Matrix load_matrix_json(const std::string& path);

}  // namespace mpk
