#include "core/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace mpk {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::NonSymmetricInput: return "NonSymmetricInput";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::DimensionCollapse: return "DimensionCollapse";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::IllConditionedSplit: return "IllConditionedSplit";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ConditionsViolated: return "ConditionsViolated";
    case ErrorCode::FreeBlock: return "FreeBlock";
    case ErrorCode::InsufficientSupport: return "InsufficientSupport";
    case ErrorCode::DegenerateTime: return "DegenerateTime";
    case ErrorCode::ConditioningGuard: return "ConditioningGuard";
    case ErrorCode::NonIsotropic: return "NonIsotropic";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

double default_rank_tol(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return static_cast<double>(std::max(m.rows(), m.cols())) * smax * 1e-12;
}

FourSubspaces subspace_bases(const Matrix& b, double tol) {
  if (tol <= 0) fail(ErrorCode::InvalidArgument, "rank tolerance must be > 0");
  const int d = static_cast<int>(b.rows());
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++r;

  FourSubspaces out;
  out.singular_values = sv;
  out.rank = r;
  out.range = {d, r, svd.matrixU().leftCols(r), tol};
  out.range_perp = {d, d - r, svd.matrixU().rightCols(d - r), tol};
  out.ker_perp = {d, r, svd.matrixV().leftCols(r), tol};
  out.ker = {d, d - r, svd.matrixV().rightCols(d - r), tol};
  return out;
}

Matrix pseudo_inverse(const Matrix& b, double tol) {
  if (tol <= 0) fail(ErrorCode::InvalidArgument, "rank tolerance must be > 0");
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Vector inv = Vector::Zero(sv.size());
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double simplex_volume(const SubspaceBasis& space, const Matrix& e, double tol) {
  if (space.rank == 0) return 1.0;
  Matrix img = e * space.basis;  // d x r
  Eigen::JacobiSVD<Matrix> svd(img);
  const auto& sv = svd.singularValues();
  double vol = 1.0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol)
      fail(ErrorCode::DimensionCollapse,
           "image of the subspace is rank-deficient under the given map");
    vol *= sv(i);
  }
  return vol;
}

double sigma_product(const Matrix& b, double tol) {
  Eigen::JacobiSVD<Matrix> svd(b);
  const auto& sv = svd.singularValues();
  double p = 1.0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) p *= sv(i);
  return p;
}

double sigma_max(const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(b);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0.0;
  double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

double subspace_gap(const Matrix& u, const Matrix& v) {
  if (u.cols() != v.cols()) return 1.0;
  if (u.cols() == 0) return 0.0;
  // Principal angles: singular values of U^T V are the cosines.
  Eigen::JacobiSVD<Matrix> svd(u.transpose() * v);
  double cmin = svd.singularValues()(svd.singularValues().size() - 1);
  cmin = std::clamp(cmin, -1.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - cmin * cmin));
}

Matrix project_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(m));
  Vector ev = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

bool is_psd(const Matrix& m, double tol) {
  if (!is_symmetric(m, 1e-12)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  return eig.eigenvalues().minCoeff() >= -tol;
}

Vector psd_product_eigenvalues(const Matrix& p, const Matrix& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> eigp(symmetrized(p));
  Vector ev = eigp.eigenvalues().cwiseMax(0.0);
  Matrix sqrtp = eigp.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                 eigp.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sqrtp * symmetrized(q) * sqrtp);
  return eig.eigenvalues();
}

}  // namespace mpk
