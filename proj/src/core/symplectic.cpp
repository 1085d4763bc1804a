#include "core/symplectic.hpp"

#include <Eigen/LU>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace mpk {

Matrix standard_j(int d) {
  Matrix j = Matrix::Zero(2 * d, 2 * d);
  j.topRightCorner(d, d) = Matrix::Identity(d, d);
  j.bottomLeftCorner(d, d) = -Matrix::Identity(d, d);
  return j;
}

SymplecticMatrix::SymplecticMatrix(Matrix entries, double tau_symp)
    : tau_(tau_symp), s_(std::move(entries)) {
  if (s_.rows() != s_.cols() || s_.rows() % 2 != 0 || s_.rows() == 0)
    fail(ErrorCode::InvalidArgument, "symplectic matrix must be 2d x 2d");
  d_ = static_cast<int>(s_.rows()) / 2;

  a_ = s_.topLeftCorner(d_, d_);
  b_ = s_.topRightCorner(d_, d_);
  c_ = s_.bottomLeftCorner(d_, d_);
  d_blk_ = s_.bottomRightCorner(d_, d_);

  const Matrix j = standard_j(d_);
  residual_ = (s_.transpose() * j * s_ - j).cwiseAbs().maxCoeff();
  if (residual_ > tau_)
    fail(ErrorCode::NotSymplectic,
         "S^T J S - J residual " + std::to_string(residual_) +
             " exceeds tau_symp");

  const Matrix id = Matrix::Identity(d_, d_);
  double rel = (a_.transpose() * c_ - c_.transpose() * a_).cwiseAbs().maxCoeff();
  rel = std::max(rel, (b_.transpose() * d_blk_ - d_blk_.transpose() * b_)
                          .cwiseAbs()
                          .maxCoeff());
  rel = std::max(rel, (a_.transpose() * d_blk_ - c_.transpose() * b_ - id)
                          .cwiseAbs()
                          .maxCoeff());
  if (rel > tau_)
    fail(ErrorCode::NotSymplectic, "block relations violate tau_symp");

  // Block-formula inverse must agree with the numerical inverse.
  Matrix binv(2 * d_, 2 * d_);
  binv.topLeftCorner(d_, d_) = d_blk_.transpose();
  binv.topRightCorner(d_, d_) = -b_.transpose();
  binv.bottomLeftCorner(d_, d_) = -c_.transpose();
  binv.bottomRightCorner(d_, d_) = a_.transpose();
  double inv_res =
      (binv * s_ - Matrix::Identity(2 * d_, 2 * d_)).cwiseAbs().maxCoeff();
  if (inv_res > tau_ * std::max(1.0, s_.cwiseAbs().maxCoeff()))
    fail(ErrorCode::NotSymplectic, "block-formula inverse inconsistent");
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  Matrix binv(2 * d_, 2 * d_);
  binv.topLeftCorner(d_, d_) = d_blk_.transpose();
  binv.topRightCorner(d_, d_) = -b_.transpose();
  binv.bottomLeftCorner(d_, d_) = -c_.transpose();
  binv.bottomRightCorner(d_, d_) = a_.transpose();
  return SymplecticMatrix(binv, tau_);
}

SymplecticMatrix SymplecticMatrix::transpose() const {
  return SymplecticMatrix(s_.transpose(), tau_);
}

SymplecticMatrix operator*(const SymplecticMatrix& x,
                           const SymplecticMatrix& y) {
  if (x.dim() != y.dim())
    fail(ErrorCode::InvalidArgument, "dimension mismatch in product");
  // Products accumulate roundoff; scale the acceptance threshold.
  double tau = std::max(x.tau_, y.tau_) *
               std::max(1.0, x.s_.norm() * y.s_.norm());
  return SymplecticMatrix(x.s_ * y.s_, tau);
}

SymplecticMatrix make_j(int d) { return SymplecticMatrix(standard_j(d)); }

SymplecticMatrix make_vq(const Matrix& q) {
  if (!is_symmetric(q))
    fail(ErrorCode::NonSymmetricInput, "V_Q requires symmetric Q");
  const int d = static_cast<int>(q.rows());
  Matrix s = Matrix::Identity(2 * d, 2 * d);
  s.bottomLeftCorner(d, d) = q;
  double tau = std::max(kDefaultTauSymp,
                        1e-14 * std::max(1.0, q.cwiseAbs().maxCoeff() *
                                                  q.cwiseAbs().maxCoeff()));
  return SymplecticMatrix(s, tau);
}

SymplecticMatrix make_up(const Matrix& p) {
  if (!is_symmetric(p))
    fail(ErrorCode::NonSymmetricInput, "U_P requires symmetric P");
  const int d = static_cast<int>(p.rows());
  Matrix s = Matrix::Identity(2 * d, 2 * d);
  s.topRightCorner(d, d) = p;
  return SymplecticMatrix(s);
}

SymplecticMatrix make_de(const Matrix& e) {
  if (e.rows() != e.cols())
    fail(ErrorCode::InvalidArgument, "D_E requires a square matrix");
  if (condition_number(e) > 1e12)
    fail(ErrorCode::SingularInput, "D_E requires cond(E) <= 1e12");
  const int d = static_cast<int>(e.rows());
  Matrix s = Matrix::Zero(2 * d, 2 * d);
  s.topLeftCorner(d, d) = e.partialPivLu().inverse();
  s.bottomRightCorner(d, d) = e.transpose();
  double tau = std::max(kDefaultTauSymp, 1e-13 * condition_number(e));
  return SymplecticMatrix(s, tau);
}

SymplecticMatrix make_frft(const Vector& theta) {
  const int d = static_cast<int>(theta.size());
  Matrix s = Matrix::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    double c = std::cos(theta(i)), sn = std::sin(theta(i));
    s(i, i) = c;
    s(i, d + i) = sn;
    s(d + i, i) = -sn;
    s(d + i, d + i) = c;
  }
  return SymplecticMatrix(s);
}

SymplecticMatrix make_tensor(const SymplecticMatrix& s1,
                             const SymplecticMatrix& s2) {
  const int d1 = s1.dim(), d2 = s2.dim(), d = d1 + d2;
  Matrix s = Matrix::Zero(2 * d, 2 * d);
  auto put = [&](int bi, int bj, const Matrix& m1, const Matrix& m2) {
    s.block(bi * d, bj * d, d1, d1) = m1;
    s.block(bi * d + d1, bj * d + d1, d2, d2) = m2;
  };
  put(0, 0, s1.a(), s2.a());
  put(0, 1, s1.b(), s2.b());
  put(1, 0, s1.c(), s2.c());
  put(1, 1, s1.d_block(), s2.d_block());
  return SymplecticMatrix(s, std::max(s1.tau_symp(), s2.tau_symp()));
}

SymplecticGeometry analyze_b(const SymplecticMatrix& s, double tol) {
  SymplecticGeometry g;
  g.tol = tol > 0 ? tol : default_rank_tol(s.b());
  if (g.tol <= 0) g.tol = 1e-15;  // B identically zero
  g.b_spaces = subspace_bases(s.b(), g.tol);
  g.rank = g.b_spaces.rank;
  g.b_pinv = pseudo_inverse(s.b(), g.tol);
  return g;
}

double mu_s(const SymplecticMatrix& s, double tol) {
  SymplecticGeometry g = analyze_b(s, tol);
  if (g.rank == 0)
    fail(ErrorCode::InvalidArgument,
         "mu_S undefined for B = 0; use the rescaling route");
  double q = simplex_volume(g.b_spaces.range_perp, s.a().transpose());
  if (q <= g.tol)
    fail(ErrorCode::DegenerateGeometry,
         "simplex volume q_{R(B)^perp}(A^T) is numerically zero");
  double sigma = sigma_product(s.b(), g.tol);
  return 1.0 / std::sqrt(q * sigma);
}

namespace {

ObliqueSplit oblique_split(const Matrix& basis1, const Matrix& basis2,
                           const Vector& v) {
  const int d = static_cast<int>(v.size());
  Matrix t(d, d);
  t.leftCols(basis1.cols()) = basis1;
  t.rightCols(basis2.cols()) = basis2;
  if (condition_number(t) > 1e10)
    fail(ErrorCode::IllConditionedSplit,
         "concatenated basis condition number exceeds 1e10");
  Vector c = t.partialPivLu().solve(v);
  ObliqueSplit out;
  out.part1 = basis1 * c.head(basis1.cols());
  out.part2 = basis2 * c.tail(basis2.cols());
  return out;
}

}  // namespace

ObliqueSplit decompose_output(const SymplecticMatrix& s, const Vector& xi,
                              double tol) {
  SymplecticGeometry g = analyze_b(s, tol);
  if (g.rank < 1)
    fail(ErrorCode::InvalidArgument, "decompose_output requires rank(B) >= 1");
  return oblique_split(g.b_spaces.range.basis, s.a() * g.b_spaces.ker.basis,
                       xi);
}

ObliqueSplit decompose_input(const SymplecticMatrix& s, const Vector& x,
                             double tol) {
  SymplecticGeometry g = analyze_b(s, tol);
  if (g.rank < 1)
    fail(ErrorCode::InvalidArgument, "decompose_input requires rank(B) >= 1");
  return oblique_split(g.b_spaces.ker_perp.basis,
                       s.d_block().transpose() * s.a() * g.b_spaces.ker.basis,
                       x);
}

namespace {

// Residual of span(M * source) being inside span(target): worst distance of
// M*v to the target span over unit vectors v of the source basis.
double subset_residual(const Matrix& m, const SubspaceBasis& source,
                       const SubspaceBasis& target) {
  if (source.rank == 0) return 0.0;
  Matrix img = m * source.basis;
  Matrix rem = img - target.basis * (target.basis.transpose() * img);
  return rem.colwise().norm().maxCoeff();
}

// Smallest singular value of the restriction of M to the source span,
// composed with the projection onto the target span.
double restricted_min_sv(const Matrix& m, const SubspaceBasis& source,
                         const SubspaceBasis& target) {
  if (source.rank == 0) return std::numeric_limits<double>::infinity();
  Matrix restricted = target.basis.transpose() * (m * source.basis);
  Eigen::JacobiSVD<Matrix> svd(restricted);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace

std::array<BlockRelationReport, 8> verify_block_relations(
    const SymplecticMatrix& s, double tol) {
  const Matrix& a = s.a();
  const Matrix& b = s.b();
  const Matrix& c = s.c();
  const Matrix& d = s.d_block();
  double t = tol > 0 ? tol : -1.0;
  auto spaces = [&](const Matrix& m) {
    double use = t > 0 ? t : std::max(default_rank_tol(m), 1e-14);
    return subspace_bases(m, use);
  };
  FourSubspaces sa = spaces(a), sb = spaces(b), sc = spaces(c), sd = spaces(d);

  struct Row {
    const Matrix* subset_map;        // candidate = map(source) subset of target
    const SubspaceBasis* subset_src;
    const SubspaceBasis* subset_tgt;
    const Matrix* iso_map;           // map : iso_src -> iso_tgt isomorphism
    const SubspaceBasis* iso_src;
    const SubspaceBasis* iso_tgt;
    const SubspaceBasis* incl_small;  // incl_small subset of incl_big
    const SubspaceBasis* incl_big;
  };
  Matrix at = a.transpose(), bt = b.transpose(), ct = c.transpose(),
         dt = d.transpose();

  // Rows (i)..(viii): reference matrices S, SJ, JS, JSJ, S^{-1}, S^{-1}J,
  // JS^{-1}, JS^{-1}J.
  const Row rows[8] = {
      {&dt, &sb.range, &sb.ker_perp, &d, &sb.ker, &sb.range_perp, &sb.range_perp,
       &sd.range},
      {&ct, &sa.range, &sa.ker_perp, &c, &sa.ker, &sa.range_perp, &sa.range_perp,
       &sc.range},
      {&bt, &sd.range, &sd.ker_perp, &b, &sd.ker, &sd.range_perp, &sd.range_perp,
       &sb.range},
      {&at, &sc.range, &sc.ker_perp, &a, &sc.ker, &sc.range_perp, &sc.range_perp,
       &sa.range},
      {&a, &sb.ker_perp, &sb.range, &at, &sb.range_perp, &sb.ker, &sb.ker,
       &sa.ker_perp},
      {&c, &sd.ker_perp, &sd.range, &ct, &sd.range_perp, &sd.ker, &sd.ker,
       &sc.ker_perp},
      {&b, &sa.ker_perp, &sa.range, &bt, &sa.range_perp, &sa.ker, &sa.ker,
       &sb.ker_perp},
      {&d, &sc.ker_perp, &sc.range, &dt, &sc.range_perp, &sc.ker, &sc.ker,
       &sd.ker_perp},
  };

  std::array<BlockRelationReport, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Row& r = rows[i];
    BlockRelationReport rep;
    rep.relation_id = i + 1;
    double res = subset_residual(*r.subset_map, *r.subset_src, *r.subset_tgt);
    // Inclusion between plain subspaces: identity as the map.
    Matrix id = Matrix::Identity(s.dim(), s.dim());
    res = std::max(res, subset_residual(id, *r.incl_small, *r.incl_big));
    res = std::max(res, subset_residual(*r.iso_map, *r.iso_src, *r.iso_tgt));
    rep.min_singular = restricted_min_sv(*r.iso_map, *r.iso_src, *r.iso_tgt);
    // A rank-collapsed restriction forces the report unsatisfied even when
    // the subset residuals vanish.
    double iso_floor = std::sqrt(s.tau_symp());
    bool iso_ok = r.iso_src->rank == 0 || rep.min_singular > iso_floor;
    rep.residual = iso_ok ? res : std::max(res, 2.0 * s.tau_symp());
    rep.satisfied = rep.residual <= s.tau_symp();
    out[static_cast<size_t>(i)] = rep;
  }
  return out;
}

// ---- I/O --------------------------------------------------------------------

namespace {

void write_matrix_17(std::ostream& os, const Matrix& m, char sep) {
  os.precision(17);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) os << sep;
      os << m(i, j);
    }
    os << '\n';
  }
}

}  // namespace

void save_csv(const SymplecticMatrix& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  f << "# symplectic d=" << s.dim() << '\n';
  write_matrix_17(f, s.entries(), ',');
}

SymplecticMatrix load_symplectic_csv(const std::string& path,
                                     double tau_symp) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  std::string header;
  std::getline(f, header);
  int d = 0;
  if (std::sscanf(header.c_str(), "# symplectic d=%d", &d) != 1 || d <= 0)
    fail(ErrorCode::Io, "bad CSV header in " + path);
  Matrix m(2 * d, 2 * d);
  std::string line;
  for (int i = 0; i < 2 * d; ++i) {
    if (!std::getline(f, line)) fail(ErrorCode::Io, "truncated CSV " + path);
    std::stringstream ss(line);
    std::string cell;
    for (int j = 0; j < 2 * d; ++j) {
      if (!std::getline(ss, cell, ','))
        fail(ErrorCode::Io, "short row in CSV " + path);
      m(i, j) = std::stod(cell);
    }
  }
  return SymplecticMatrix(m, tau_symp);
}

std::string to_json(const SymplecticMatrix& s) {
  nlohmann::json j;
  j["d"] = s.dim();
  auto rows = nlohmann::json::array();
  for (int i = 0; i < s.entries().rows(); ++i) {
    auto row = nlohmann::json::array();
    for (int k = 0; k < s.entries().cols(); ++k) row.push_back(s.entries()(i, k));
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump();
}

void save_json(const SymplecticMatrix& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  f << to_json(s) << '\n';
}

namespace {

Matrix rows_to_matrix(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty())
    fail(ErrorCode::Io, "JSON \"rows\" must be a non-empty array");
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(rows[0].size());
  Matrix m(nr, nc);
  for (int i = 0; i < nr; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != nc)
      fail(ErrorCode::Io, "ragged JSON rows");
    for (int j = 0; j < nc; ++j)
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)]
                    .get<double>();
  }
  return m;
}

nlohmann::json parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::Io, std::string("JSON parse error: ") + e.what());
  }
  return j;
}

}  // namespace

SymplecticMatrix load_symplectic_json(const std::string& path,
                                      double tau_symp) {
  nlohmann::json j = parse_file(path);
  if (!j.contains("rows")) fail(ErrorCode::Io, "missing \"rows\" in " + path);
  Matrix m = rows_to_matrix(j["rows"]);
  if (j.contains("d")) {
    int d = j["d"].get<int>();
    if (m.rows() != 2 * d)
      fail(ErrorCode::Io, "\"d\" inconsistent with row count in " + path);
  }
  return SymplecticMatrix(m, tau_symp);
}

Matrix load_matrix_json(const std::string& path) {
  nlohmann::json j = parse_file(path);
  if (!j.contains("rows")) fail(ErrorCode::Io, "missing \"rows\" in " + path);
  return rows_to_matrix(j["rows"]);
}

}  // namespace mpk
