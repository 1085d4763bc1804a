#include <cstdio>
#include <random>

#include "core/symplectic.hpp"
#include "testutil.hpp"

using namespace mpk;
using namespace testutil;

namespace {

SymplecticMatrix example_s() {
  Matrix m(4, 4);
  m << 1, 0, 0, -2,
       1, 0, 0, -1,
       0, 1, -1, 0,
       0, -1, 2, 0;
  return SymplecticMatrix(m);
}

// D_E V_P^T with P = diag(0,1), E = [[-1,2],[-1,1]]: same B block as the
// example above but A = E^{-1}, so A(ker B) is oblique to R(B).
SymplecticMatrix oblique_s() {
  Matrix p(2, 2), e(2, 2);
  p << 0, 0, 0, 1;
  e << -1, 2, -1, 1;
  return make_de(e) * make_up(p);
}

double span_gap(const Matrix& basis, const Vector& v) {
  Vector r = v - basis * (basis.transpose() * v);
  return r.norm() / v.norm();
}

void test_subspace_bases() {
  section("subspace_bases");
  SymplecticMatrix s = example_s();
  FourSubspaces sp = subspace_bases(s.b(), default_rank_tol(s.b()));
  check(sp.rank == 1, "example rank(B) = 1");
  Vector kp(2), rg(2);
  kp << 0, 1;
  rg << 2, 1;
  check_lt(span_gap(sp.ker_perp.basis, kp), 1e-12, "ker(B)^perp span");
  check_lt(span_gap(sp.range.basis, rg), 1e-12, "R(B) span");

  FourSubspaces z = subspace_bases(Matrix::Zero(3, 3), 1e-12);
  check(z.rank == 0 && z.ker.rank == 3 && z.ker_perp.rank == 0,
        "B = 0 subspaces");

  SymplecticMatrix so = oblique_s();
  FourSubspaces spo = subspace_bases(so.b(), default_rank_tol(so.b()));
  Vector ker(2);
  ker << 1, 0;
  check_lt(span_gap(spo.ker.basis, ker), 1e-12, "oblique example ker(B)");
  check_lt(span_gap(spo.range.basis, rg), 1e-12, "oblique example R(B)");

  std::mt19937_64 rng(5);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int d = 2 + static_cast<int>(rng() % 3);
    Matrix b(d, d);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) b(i, j) = u(rng);
    if (trial % 3 == 0) b.col(0).setZero();
    FourSubspaces f = subspace_bases(b, default_rank_tol(b));
    auto gram = [&](const Matrix& m) {
      if (m.cols() == 0) return 0.0;
      return (m.transpose() * m -
              Matrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
    };
    worst = std::max({worst, gram(f.ker.basis), gram(f.ker_perp.basis),
                      gram(f.range.basis), gram(f.range_perp.basis)});
    if (f.ker.rank && f.ker_perp.rank)
      worst = std::max(
          worst,
          (f.ker.basis.transpose() * f.ker_perp.basis).cwiseAbs().maxCoeff());
    if (f.range.rank && f.range_perp.rank)
      worst = std::max(worst, (f.range.basis.transpose() * f.range_perp.basis)
                                  .cwiseAbs()
                                  .maxCoeff());
  }
  check_lt(worst, 1e-12, "orthonormality and mutual orthogonality");
}

void test_pseudo_inverse() {
  section("pseudo_inverse");
  Matrix b = Matrix::Zero(2, 2);
  b(1, 1) = std::sin(M_PI / 2.0);
  Matrix bp = pseudo_inverse(b, 1e-12);
  Matrix want = Matrix::Zero(2, 2);
  want(1, 1) = 1.0;
  check_lt((bp - want).cwiseAbs().maxCoeff(), 1e-15, "diag(0, sin t) at t=pi/2");

  check_lt(pseudo_inverse(Matrix::Zero(3, 3), 1e-12).cwiseAbs().maxCoeff(),
           1e-300, "pinv(0) = 0");

  std::mt19937_64 rng(17);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int d = 2 + static_cast<int>(rng() % 3);
    Matrix m = random_invertible(rng, d, 0.8);
    if (trial % 2 == 0) m.row(d - 1).setZero();
    double tol = std::max(default_rank_tol(m), 1e-14);
    Matrix mp = pseudo_inverse(m, tol);
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    double pscale = std::max(1.0, mp.cwiseAbs().maxCoeff());
    worst = std::max(
        {worst, (m * mp * m - m).cwiseAbs().maxCoeff() / scale,
         (mp * m * mp - mp).cwiseAbs().maxCoeff() / pscale,
         ((m * mp) - (m * mp).transpose()).cwiseAbs().maxCoeff() / scale,
         ((mp * m) - (mp * m).transpose()).cwiseAbs().maxCoeff() / scale});
    if (trial % 2 == 1)
      worst = std::max(worst, (mp - m.inverse()).cwiseAbs().maxCoeff() /
                                  m.inverse().cwiseAbs().maxCoeff());
  }
  check_lt(worst, 1e-10, "Penrose identities and inverse agreement");
}

void test_simplex_volume_and_mu() {
  section("simplex_volume and mu_S");
  std::mt19937_64 rng(23);
  for (int d = 1; d <= 3; ++d) {
    Matrix e = random_invertible(rng, d, 0.7);
    SubspaceBasis full{d, d, Matrix::Identity(d, d), 1e-12};
    check_close(simplex_volume(full, e), std::abs(e.determinant()), 1e-12,
                "q over the full space = |det E|");
    check_close(simplex_volume(full, Matrix::Identity(d, d)), 1.0, 0.0,
                "q(I) = 1");
  }

  // Example geometry: L = R(B)^perp spanned by (1,-2)/sqrt(5), E = A^T.
  SymplecticMatrix s = example_s();
  FourSubspaces sp = subspace_bases(s.b(), default_rank_tol(s.b()));
  check_close(simplex_volume(sp.range_perp, s.a().transpose()),
              1.0 / std::sqrt(5.0), 1e-12, "example q value");

  check_throws(ErrorCode::DimensionCollapse, "rank-collapsed image", [&] {
    Matrix e = Matrix::Zero(2, 2);
    e(0, 0) = 1.0;  // kills the (0,1) direction
    SubspaceBasis l{2, 1, (Matrix(2, 1) << 0, 1).finished(), 1e-12};
    simplex_volume(l, e);
  });

  check_close(mu_s(make_j(2)), 1.0, 1e-14, "mu_S(J) = 1");
  check_close(mu_s(s), 1.0, 1e-12, "example mu_S = 1");

  for (int trial = 0; trial < 50; ++trial) {
    int d = 1 + static_cast<int>(rng() % 2);
    SymplecticMatrix f = random_generator_product(rng, d, 3);
    if (analyze_b(f).rank == d)
      check_close(mu_s(f), 1.0 / std::sqrt(std::abs(f.b().determinant())),
                  1e-9 / std::abs(f.b().determinant()),
                  "free mu_S = |det B|^{-1/2}");
  }

  check_throws(ErrorCode::InvalidArgument, "mu_S rejects B = 0", [] {
    mu_s(SymplecticMatrix(Matrix::Identity(4, 4)));
  });
}

void test_decompositions() {
  section("oblique decompositions");
  SymplecticMatrix so = oblique_s();
  Vector xi(2);
  xi << 1, 0;
  ObliqueSplit sp = decompose_output(so, xi);
  check_close(sp.part1(0), 2.0, 1e-12, "xi1 x-component");
  check_close(sp.part1(1), 1.0, 1e-12, "xi1 y-component");
  check_close(sp.part2(0), -1.0, 1e-12, "xi2 x-component");
  check_close(sp.part2(1), -1.0, 1e-12, "xi2 y-component");

  SymplecticMatrix se = example_s();
  // x in ker(B): the constructive identity x = -B^T C x + D^T A x.
  Vector x(2);
  x << 1, 0;
  ObliqueSplit in = decompose_input(se, x);
  Vector x1_want = -se.b().transpose() * se.c() * x;
  Vector x2_want = se.d_block().transpose() * se.a() * x;
  check_lt((in.part1 - x1_want).norm(), 1e-12, "input split x1 closed form");
  check_lt((in.part2 - x2_want).norm(), 1e-12, "input split x2 closed form");
  check_lt((in.part1 + in.part2 - x).norm(), 1e-12, "recomposition");

  std::mt19937_64 rng(31);
  double worst_rec = 0, worst_idem = 0, worst_dim = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int d = 2 + static_cast<int>(rng() % 2);
    int r = 1 + static_cast<int>(rng() % (d - 1));
    SymplecticMatrix s = random_singular_symplectic(rng, d, r);
    std::uniform_real_distribution<double> u(-2, 2);
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = u(rng);

    ObliqueSplit o = decompose_output(s, v);
    worst_rec = std::max(worst_rec, (o.part1 + o.part2 - v).norm());
    ObliqueSplit oo = decompose_output(s, o.part1);
    worst_idem = std::max(worst_idem, oo.part2.norm());

    ObliqueSplit i2 = decompose_input(s, v);
    worst_rec = std::max(worst_rec, (i2.part1 + i2.part2 - v).norm());

    // rank(R(B)) + rank(A ker(B)) = d.
    SymplecticGeometry g = analyze_b(s);
    Matrix akb = s.a() * g.b_spaces.ker.basis;
    Eigen::JacobiSVD<Matrix> svd(akb);
    int rk = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-10) ++rk;
    worst_dim = std::max(worst_dim, std::abs(g.rank + rk - d) + 0.0);

    // Free case: trivial split.
    SymplecticMatrix fr = random_generator_product(rng, d, 3);
    if (analyze_b(fr).rank == d) {
      ObliqueSplit of = decompose_output(fr, v);
      worst_idem = std::max(worst_idem, of.part2.norm());
    }
  }
  check_lt(worst_rec, 1e-12, "recomposition over corpus");
  check_lt(worst_idem, 1e-11, "idempotence over corpus");
  check(worst_dim == 0.0, "rank(R(B)) + rank(A ker B) = d");
}

void test_psd_spectrum() {
  section("PSD product spectra");
  std::mt19937_64 rng(47);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int d = 1 + static_cast<int>(rng() % 4);
    Matrix m = random_psd(rng, d, 0.0, 2.0);
    Matrix n = random_psd(rng, d, 0.0, 2.0);
    Matrix b = random_invertible(rng, d, 1.0);
    Matrix prod = m * b.transpose() * n * b;
    Eigen::EigenSolver<Matrix> eig(prod);
    for (int i = 0; i < eig.eigenvalues().size(); ++i) {
      worst = std::max(worst, -eig.eigenvalues()(i).real());
      worst = std::max(worst, std::abs(eig.eigenvalues()(i).imag()));
    }
  }
  check_lt(worst, 1e-10, "M B^T N B has nonnegative real spectrum");
}

}  // namespace

int main() {
  test_subspace_bases();
  test_pseudo_inverse();
  test_simplex_volume_and_mu();
  test_decompositions();
  test_psd_spectrum();
  return summary("test_subspaces");
}
