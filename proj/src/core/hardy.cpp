#include "core/hardy.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "core/metaplectic.hpp"

namespace mpk {

DecayCertificate::DecayCertificate(Matrix m_in, Matrix n_in, double alpha,
                                   double beta)
    : m(std::move(m_in)), n(std::move(n_in)), alpha_bound(alpha),
      beta_bound(beta) {
  if (m.rows() != m.cols() || n.rows() != n.cols() || m.rows() != n.rows())
    fail(ErrorCode::InvalidArgument, "certificate matrices must be d x d");
  if (!is_symmetric(m) || !is_symmetric(n))
    fail(ErrorCode::NonSymmetricInput, "certificate matrices must be symmetric");
  if (!is_psd(m) || !is_psd(n))
    fail(ErrorCode::InvalidArgument,
         "certificate matrices must be positive-semidefinite");
  if (!(alpha_bound > 0) || !(beta_bound > 0))
    fail(ErrorCode::InvalidArgument, "envelope constants must be positive");
}

const char* hardy_status_name(HardyStatus s) {
  switch (s) {
    case HardyStatus::Vanishing: return "Vanishing";
    case HardyStatus::Extremal: return "Extremal";
    case HardyStatus::Admissible: return "Admissible";
    case HardyStatus::ConditionsViolated: return "ConditionsViolated";
    case HardyStatus::DegenerateTime: return "DegenerateTime";
  }
  return "Unknown";
}

std::string HardyVerdict::to_json() const {
  nlohmann::json j;
  j["status"] = hardy_status_name(status);
  auto eigs = nlohmann::json::array();
  for (int i = 0; i < eigenvalues.size(); ++i) eigs.push_back(eigenvalues(i));
  j["eigenvalues"] = eigs;
  j["max_eigenvalue"] = max_eigenvalue;
  j["residuals"] = {{"ker", ker_residual}, {"range", range_residual}};
  if (!note.empty()) j["note"] = note;
  if (witness) {
    auto mat = [](const Matrix& m) {
      auto rows = nlohmann::json::array();
      for (int i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
      }
      return rows;
    };
    j["witness"] = {{"M", mat(witness->m)},
                    {"B_pinv_A", mat(witness->b_pinv_a)},
                    {"Ct_A", mat(witness->ct_a)},
                    {"ker_perp_basis", mat(witness->ker_perp_basis)},
                    {"ker_basis", mat(witness->ker_basis)}};
  }
  return j.dump();
}

ConditionsReport check_conditions(const Matrix& m, const Matrix& n,
                                  const SymplecticMatrix& s, double tol) {
  ConditionsReport rep;
  FourSubspaces sm = subspace_bases(m, std::max(default_rank_tol(m), 1e-14));
  FourSubspaces sn = subspace_bases(n, std::max(default_rank_tol(n), 1e-14));
  FourSubspaces sb =
      subspace_bases(s.b(), std::max(default_rank_tol(s.b()), 1e-14));
  rep.ker_residual = sm.ker.rank == sb.ker.rank
                         ? subspace_gap(sm.ker.basis, sb.ker.basis)
                         : 1.0;
  rep.range_residual = sn.range.rank == sb.range.rank
                           ? subspace_gap(sn.range.basis, sb.range.basis)
                           : 1.0;
  rep.ok = rep.ker_residual <= tol && rep.range_residual <= tol;
  return rep;
}

Vector hardy_eigenvalues(const Matrix& m, const Matrix& n,
                         const SymplecticMatrix& s, double tol_rank,
                         double cond_tol) {
  ConditionsReport rep = check_conditions(m, n, s, cond_tol);
  if (!rep.ok)
    fail(ErrorCode::ConditionsViolated,
         "kernel/range conditions fail: ker gap " +
             std::to_string(rep.ker_residual) + ", range gap " +
             std::to_string(rep.range_residual));
  SymplecticGeometry geo = analyze_b(s, tol_rank);
  const Matrix& v = geo.b_spaces.ker_perp.basis;
  Matrix bv = s.b() * v;
  Matrix mp = symmetrized(v.transpose() * m * v);
  Matrix k = symmetrized(bv.transpose() * n * bv);
  Vector eig = psd_product_eigenvalues(mp, k);
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

HardyVerdict classify(const DecayCertificate& cert, const SymplecticMatrix& s,
                      double tau_eig, double tol_rank) {
  HardyVerdict verdict;
  ConditionsReport rep = check_conditions(cert.m, cert.n, s);
  verdict.ker_residual = rep.ker_residual;
  verdict.range_residual = rep.range_residual;
  if (!rep.ok) {
    verdict.status = HardyStatus::ConditionsViolated;
    verdict.note = "ker(M) = ker(B) and R(N) = R(B) are required";
    return verdict;
  }
  verdict.eigenvalues = hardy_eigenvalues(cert.m, cert.n, s, tol_rank);
  verdict.max_eigenvalue =
      verdict.eigenvalues.size() ? verdict.eigenvalues(0) : 0.0;

  const Vector& ev = verdict.eigenvalues;
  if (verdict.max_eigenvalue > 1.0 + tau_eig) {
    verdict.status = HardyStatus::Vanishing;
    return verdict;
  }
  bool all_one = ev.size() > 0;
  bool some_one = false;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - 1.0) > tau_eig) all_one = false;
    else some_one = true;
  }
  if (all_one) {
    verdict.status = HardyStatus::Extremal;
    SymplecticGeometry geo = analyze_b(s, tol_rank);
    ExtremalWitness w;
    w.m = cert.m;
    w.b_pinv_a = geo.b_pinv * s.a();
    w.ct_a = s.c().transpose() * s.a();
    w.ker_perp_basis = geo.b_spaces.ker_perp.basis;
    w.ker_basis = geo.b_spaces.ker.basis;
    verdict.witness = std::move(w);
    return verdict;
  }
  verdict.status = HardyStatus::Admissible;
  if (some_one)
    verdict.note =
        "some eigenvalues sit on the boundary; partial extremal structure "
        "is not classified";
  return verdict;
}

GridFunction extremal_function(
    const SymplecticMatrix& s, const Matrix& m,
    const std::function<Complex(const Vector&)>& gamma, int n, double l,
    double tol_rank) {
  const int d = s.dim();
  SymplecticGeometry geo = analyze_b(s, tol_rank);
  const int r = geo.rank;
  if (r == 0)
    fail(ErrorCode::InvalidArgument, "extremal family requires B != 0");
  const Matrix v = geo.b_spaces.ker_perp.basis;  // d x r
  const Matrix wk = geo.b_spaces.ker.basis;      // d x (d-r)
  const Matrix bpa = symmetrized(v.transpose() * geo.b_pinv * s.a() * v);
  const Matrix mr = symmetrized(v.transpose() * m * v);
  const Matrix cta = s.c().transpose() * s.a();

  // Oblique frame [V | D^T A Wk] for y = x1 + x2, x2 = D^T A x, x in ker(B).
  Matrix t(d, d);
  t.leftCols(r) = v;
  if (r < d) t.rightCols(d - r) = s.d_block().transpose() * s.a() * wk;
  if (condition_number(t) > 1e10)
    fail(ErrorCode::IllConditionedSplit,
         "ker(B)^perp and D^T A(ker B) are nearly tangent");
  Eigen::PartialPivLU<Matrix> lu(t);

  GridFunction out(d, n, l);
  for (std::int64_t i = 0; i < out.size(); ++i) {
    Vector y = out.point(i);
    Vector c = lu.solve(y);
    Vector c1 = c.head(r);
    Vector c2 = c.tail(d - r);
    // x1 = V c1 has coordinates c1; x = Wk c2 in ker(B).
    double decay = M_PI * c1.dot(mr * c1);
    double phase = -M_PI * c1.dot(bpa * c1);
    if (r < d) {
      Vector x = wk * c2;
      Vector x1 = v * c1;
      phase += 2.0 * M_PI * (cta * x).dot(x1);
    }
    out.samples()[static_cast<size_t>(i)] =
        gamma(c2) * std::exp(-decay) * std::polar(1.0, phase);
  }
  return out;
}

GaussianFit fit_gaussian_decay(const GridFunction& f, const SubspaceBasis& along,
                               const std::vector<Vector>& offsets) {
  const int d = f.dim();
  const int r = along.rank;
  if (r < 1 || along.ambient_dim != d)
    fail(ErrorCode::InvalidArgument, "fit subspace must have rank >= 1");
  double peak = f.peak_abs();
  if (peak <= 0) fail(ErrorCode::InsufficientSupport, "function is zero");

  std::vector<Vector> offs = offsets;
  if (offs.empty()) offs.push_back(Vector::Zero(d));

  Interpolator fi(f);
  const double delta = f.spacing();
  const double floor_abs = 1e-12 * peak;
  const int half = static_cast<int>(std::floor(
      f.half_extent() * std::sqrt(static_cast<double>(d)) / delta));

  // Unknowns: upper triangle of M (r(r+1)/2) then one constant per fiber.
  const int nq = r * (r + 1) / 2;
  std::vector<double> rows;   // design matrix, row-major
  std::vector<double> rhs;
  int used = 0;

  std::vector<int> idx(static_cast<size_t>(r), -half);
  for (size_t fi_idx = 0; fi_idx < offs.size(); ++fi_idx) {
    std::fill(idx.begin(), idx.end(), -half);
    while (true) {
      Vector u(r);
      for (int k = 0; k < r; ++k) u(k) = idx[static_cast<size_t>(k)] * delta;
      Vector x = along.basis * u + offs[fi_idx];
      bool in_range = true;
      for (int ax = 0; ax < d; ++ax)
        if (std::abs(x(ax)) > f.half_extent()) in_range = false;
      if (in_range) {
        double val = std::abs(fi.at(x.data()));
        if (val > floor_abs) {
          std::vector<double> row(static_cast<size_t>(nq) + offs.size(), 0.0);
          int col = 0;
          for (int a = 0; a < r; ++a)
            for (int b = a; b < r; ++b)
              row[static_cast<size_t>(col++)] =
                  M_PI * (a == b ? u(a) * u(a) : 2.0 * u(a) * u(b));
          row[static_cast<size_t>(nq) + fi_idx] = 1.0;
          rows.insert(rows.end(), row.begin(), row.end());
          rhs.push_back(-std::log(val));
          ++used;
        }
      }
      int k = r - 1;
      while (k >= 0 && ++idx[static_cast<size_t>(k)] > half)
        idx[static_cast<size_t>(k--)] = -half;
      if (k < 0) break;
    }
  }

  if (used < 10 * r * r)
    fail(ErrorCode::InsufficientSupport,
         "only " + std::to_string(used) + " usable samples for the fit");

  const int ncols = nq + static_cast<int>(offs.size());
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>>
      a(rows.data(), used, ncols);
  Eigen::Map<Vector> b(rhs.data(), used);
  Vector sol = a.colPivHouseholderQr().solve(b);

  GaussianFit fit;
  fit.m_fit = Matrix::Zero(r, r);
  int col = 0;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      fit.m_fit(i, j) = sol(col);
      fit.m_fit(j, i) = sol(col);
      ++col;
    }
  fit.m_fit = project_psd(fit.m_fit);
  fit.residual = std::sqrt((a * sol - b).squaredNorm() / used);
  fit.non_gaussian = fit.residual > 1e-2;
  fit.samples_used = used;
  return fit;
}

SharpnessReport sharpness_witness(const SymplecticMatrix& s, double k_halfwidth,
                                  int n, double l, double tol_rank,
                                  WarningSink* warnings) {
  const int d = s.dim();
  SymplecticGeometry geo = analyze_b(s, tol_rank);
  const int r = geo.rank;
  if (r == d)
    fail(ErrorCode::FreeBlock, "R(B)^perp is trivial for invertible B");
  if (r == 0)
    fail(ErrorCode::InvalidArgument,
         "B = 0 propagates compact supports by rescaling; no witness needed");
  if (!(k_halfwidth > 0))
    fail(ErrorCode::InvalidArgument, "box half-width must be positive");

  const Matrix v = geo.b_spaces.ker_perp.basis;       // d x r
  const Matrix wp = geo.b_spaces.range_perp.basis;    // d x (d-r)
  Matrix t(d, d);
  t.leftCols(r) = v;
  t.rightCols(d - r) = s.d_block().transpose() * wp;
  if (condition_number(t) > 1e10)
    fail(ErrorCode::IllConditionedSplit,
         "ker(B)^perp and D^T(R(B)^perp) are nearly tangent");
  Eigen::PartialPivLU<Matrix> lu(t);

  SharpnessReport rep{GridFunction(d, n, l), GridFunction(d, n, l), 0.0};
  for (std::int64_t i = 0; i < rep.f.size(); ++i) {
    Vector y = rep.f.point(i);
    Vector c = lu.solve(y);
    bool in_box = true;
    for (int k = r; k < d; ++k)
      if (std::abs(c(k)) > k_halfwidth) in_box = false;
    rep.f.samples()[static_cast<size_t>(i)] =
        in_box ? Complex(std::exp(-M_PI * c.head(r).squaredNorm()), 0)
               : Complex(0, 0);
  }

  rep.sf = apply_metaplectic(s, rep.f, warnings, tol_rank);

  // Predicted slab: |coordinates of xi on R(B)^perp| <= half-width, with a
  // tolerance band of two grid spacings.
  const double band = k_halfwidth + 2.0 * rep.sf.spacing();
  double outside = 0.0, total = 0.0;
  for (std::int64_t i = 0; i < rep.sf.size(); ++i) {
    Vector xi = rep.sf.point(i);
    Vector q = wp.transpose() * xi;
    double mass = std::norm(rep.sf.samples()[static_cast<size_t>(i)]);
    total += mass;
    if (q.cwiseAbs().maxCoeff() > band) outside += mass;
  }
  rep.outside_mass_fraction = total > 0 ? outside / total : 0.0;
  return rep;
}

}  // namespace mpk
