#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "core/errors.hpp"

namespace mpk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Orthonormal basis of a subspace of R^d together with the rank tolerance
/// that produced it. rank == 0 is legal (basis has zero columns).
struct SubspaceBasis {
  int ambient_dim = 0;
  int rank = 0;
  Matrix basis;  // ambient_dim x rank, orthonormal columns
  double tol = 0.0;
};

/// The four fundamental subspaces of a square matrix, from one SVD.
struct FourSubspaces {
  SubspaceBasis ker;
  SubspaceBasis ker_perp;
  SubspaceBasis range;
  SubspaceBasis range_perp;
  Eigen::VectorXd singular_values;
  int rank = 0;
};

/// Default numerical-rank tolerance: d * sigma_max * 1e-12.
double default_rank_tol(const Matrix& m);

FourSubspaces subspace_bases(const Matrix& b, double tol);

/// Moore-Penrose inverse via SVD truncation at tol.
Matrix pseudo_inverse(const Matrix& b, double tol);

/// Gram-determinant volume of the parallelepiped spanned by E*v_1,...,E*v_r,
/// v_i an orthonormal basis of the subspace. Equals |det E| for the full
/// space and 1 for the zero subspace.
double simplex_volume(const SubspaceBasis& space, const Matrix& e,
                      double tol = 1e-12);

/// Product of the singular values above tol.
double sigma_product(const Matrix& b, double tol);
/// Largest singular value.
double sigma_max(const Matrix& b);

bool is_symmetric(const Matrix& m, double tol = 1e-12);
Matrix symmetrized(const Matrix& m);

double condition_number(const Matrix& m);

/// Largest principal angle (as a sine) between the column spans of two
/// orthonormal bases. Returns 1 if the ranks differ.
double subspace_gap(const Matrix& u, const Matrix& v);

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
Matrix project_psd(const Matrix& m);

bool is_psd(const Matrix& m, double tol = 1e-10);

/// Eigenvalues of the (generally non-symmetric) product of two symmetric PSD
/// matrices via the similarity sqrt(P)*Q*sqrt(P); guaranteed real.
Vector psd_product_eigenvalues(const Matrix& p, const Matrix& q);

}  // namespace mpk
