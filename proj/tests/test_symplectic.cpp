#include <cstdio>
#include <random>

#include "core/symplectic.hpp"
#include "testutil.hpp"

using namespace mpk;
using namespace testutil;

namespace {

// The rank-one-B example: partial Fourier transform composed with a
// unimodular coordinate change.
SymplecticMatrix example_s() {
  Matrix m(4, 4);
  m << 1, 0, 0, -2,
       1, 0, 0, -1,
       0, 1, -1, 0,
       0, -1, 2, 0;
  return SymplecticMatrix(m);
}

void test_generators() {
  section("generators");
  SymplecticMatrix j1 = make_j(1);
  Matrix want(2, 2);
  want << 0, 1, -1, 0;
  check((j1.entries() - want).cwiseAbs().maxCoeff() == 0.0, "J at d=1");

  SymplecticMatrix v0 = make_vq(Matrix::Zero(3, 3));
  check((v0.entries() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0,
        "V_0 = I");

  Vector theta(2);
  theta << M_PI / 2.0, 0.0;
  SymplecticMatrix fr = make_frft(theta);
  check_close(fr.a()(0, 0), 0.0, 1e-15, "frft A11 = cos(pi/2)");
  check_close(fr.a()(1, 1), 1.0, 0.0, "frft A22 = cos 0");
  check_close(fr.b()(0, 0), 1.0, 0.0, "frft B11 = sin(pi/2)");
  check_close(fr.b()(1, 1), 0.0, 0.0, "frft B22 = sin 0");
  check_close(fr.c()(0, 0), -1.0, 0.0, "frft C11");
  check_close(fr.c()(1, 1), 0.0, 0.0, "frft C22");
  check_close(fr.d_block()(0, 0), 0.0, 1e-15, "frft D11");
  check_close(fr.d_block()(1, 1), 1.0, 0.0, "frft D22");

  check_throws(ErrorCode::NonSymmetricInput, "asymmetric Q rejected", [] {
    Matrix q(2, 2);
    q << 0, 1, 0, 0;
    make_vq(q);
  });
  check_throws(ErrorCode::SingularInput, "singular E rejected", [] {
    Matrix e = Matrix::Zero(2, 2);
    make_de(e);
  });
  check_throws(ErrorCode::NotSymplectic, "non-symplectic rejected", [] {
    Matrix m = Matrix::Identity(4, 4);
    m(0, 0) = 2.0;
    SymplecticMatrix s(m);
  });
}

void test_blocks_and_inverse() {
  section("block decomposition and inverse");
  SymplecticMatrix s = example_s();
  Matrix a(2, 2), b(2, 2), c(2, 2), d(2, 2);
  a << 1, 0, 1, 0;
  b << 0, -2, 0, -1;
  c << 0, 1, 0, -1;
  d << -1, 0, 2, 0;
  check((s.a() - a).cwiseAbs().maxCoeff() == 0.0, "example A block");
  check((s.b() - b).cwiseAbs().maxCoeff() == 0.0, "example B block");
  check((s.c() - c).cwiseAbs().maxCoeff() == 0.0, "example C block");
  check((s.d_block() - d).cwiseAbs().maxCoeff() == 0.0, "example D block");

  SymplecticMatrix id(Matrix::Identity(4, 4));
  check(id.b().cwiseAbs().maxCoeff() == 0.0 &&
            (id.a() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0,
        "identity blocks");

  SymplecticMatrix j2 = make_j(2);
  check((j2.b() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0 &&
            (j2.c() + Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0,
        "J blocks");

  SymplecticMatrix j1 = make_j(1);
  check((j1.inverse().entries() + j1.entries()).cwiseAbs().maxCoeff() == 0.0,
        "J^{-1} = -J");

  Matrix q = Matrix::Identity(2, 2) * 0.7;
  check((make_vq(q).inverse().entries() - make_vq(-q).entries())
                .cwiseAbs()
                .maxCoeff() == 0.0,
        "V_Q^{-1} = V_{-Q}");

  check_lt((s.inverse().entries() * s.entries() - Matrix::Identity(4, 4))
               .cwiseAbs()
               .maxCoeff(),
           1e-12, "example inverse residual");
}

void test_tensor() {
  section("tensor generator");
  std::mt19937_64 rng(7);
  SymplecticMatrix s1 = random_generator_product(rng, 1, 3);
  SymplecticMatrix s2 = random_generator_product(rng, 1, 3);
  SymplecticMatrix t = make_tensor(s1, s2);
  check(t.dim() == 2, "tensor dimension");
  check_close(t.a()(0, 0), s1.a()(0, 0), 0.0, "tensor A interleaves factor 1");
  check_close(t.a()(1, 1), s2.a()(0, 0), 0.0, "tensor A interleaves factor 2");
  check_close(t.b()(0, 0), s1.b()(0, 0), 0.0, "tensor B interleaves factor 1");
  check_close(t.d_block()(1, 1), s2.d_block()(0, 0), 0.0,
              "tensor D interleaves factor 2");
  check(t.a()(0, 1) == 0.0 && t.b()(1, 0) == 0.0, "tensor off-blocks vanish");
}

void test_random_corpus() {
  section("random generator-product corpus");
  std::mt19937_64 rng(42);
  double worst_symp = 0, worst_inv = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int d = 1 + static_cast<int>(rng() % 3);
    SymplecticMatrix s = random_generator_product(rng, d, 4);
    Matrix j = standard_j(d);
    worst_symp = std::max(
        worst_symp,
        (s.entries().transpose() * j * s.entries() - j).cwiseAbs().maxCoeff());
    worst_inv = std::max(
        worst_inv, (s.inverse().entries() * s.entries() -
                    Matrix::Identity(2 * d, 2 * d))
                       .cwiseAbs()
                       .maxCoeff());
  }
  check_lt(worst_symp, 1e-10, "S^T J S - J over corpus");
  check_lt(worst_inv, 1e-10, "block inverse over corpus");
}

void test_block_relations() {
  section("block relations");
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int d = 1 + static_cast<int>(rng() % 3);
    SymplecticMatrix s = random_generator_product(rng, d, 4);
    auto reports = verify_block_relations(s);
    for (const auto& r : reports)
      check(r.satisfied, "relation " + std::to_string(r.relation_id) +
                             " on random S (residual " +
                             std::to_string(r.residual) + ")");
  }

  auto rj = verify_block_relations(make_j(1));
  check(rj[0].satisfied && rj[0].residual == 0.0, "J row (i) trivial");

  // Row (v) subset claim A(ker(B)^perp) in R(B) for the example matrix.
  auto re = verify_block_relations(example_s());
  check(re[4].satisfied, "example row (v)");
  check_lt(re[4].residual, 1e-12, "example row (v) residual");
}

void test_io_roundtrip() {
  section("matrix I/O");
  std::mt19937_64 rng(3);
  SymplecticMatrix s = random_generator_product(rng, 2, 5);
  save_csv(s, "sym_io_test.csv");
  SymplecticMatrix back = load_symplectic_csv("sym_io_test.csv");
  check((back.entries() - s.entries()).cwiseAbs().maxCoeff() == 0.0,
        "CSV round-trip is exact");
  save_json(s, "sym_io_test.json");
  SymplecticMatrix back2 = load_symplectic_json("sym_io_test.json");
  check((back2.entries() - s.entries()).cwiseAbs().maxCoeff() == 0.0,
        "JSON round-trip is exact");
  std::remove("sym_io_test.csv");
  std::remove("sym_io_test.json");
}

}  // namespace

int main() {
  test_generators();
  test_blocks_and_inverse();
  test_tensor();
  test_random_corpus();
  test_block_relations();
  test_io_roundtrip();
  return summary("test_symplectic");
}
