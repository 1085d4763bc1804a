#include <cstdio>
#include <random>

#include "core/fft.hpp"
#include "core/grid.hpp"
#include "core/metaplectic.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace mpk;
using namespace testutil;

namespace {

double rel_l2(const GridFunction& a, const GridFunction& b) {
  double num = 0, den = 0;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.samples()[static_cast<size_t>(i)] -
                     b.samples()[static_cast<size_t>(i)]);
    den += std::norm(b.samples()[static_cast<size_t>(i)]);
  }
  return std::sqrt(num / den);
}

GridFunction gaussian_1d(int n, double l) {
  GridFunction f(1, n, l);
  f.fill([](const Vector& x) {
    return Complex(std::exp(-M_PI * x.squaredNorm()), 0);
  });
  return f;
}

void test_gaussian_self_duality() {
  section("Gaussian self-duality");
  GridFunction f = gaussian_1d(256, 8.0);
  GridFunction fh = fourier_transform(f, -1);
  check_close(fh.half_extent(), 8.0, 1e-14, "self-dual grid extent");
  double worst = 0;
  for (std::int64_t i = 0; i < fh.size(); ++i) {
    double xi = fh.point(i)(0);
    worst = std::max(worst, std::abs(fh.samples()[static_cast<size_t>(i)] -
                                     Complex(std::exp(-M_PI * xi * xi), 0)));
  }
  check_lt(worst, 1e-8, "e^{-pi x^2} maps to e^{-pi xi^2}");

  // 2-d as well.
  GridFunction g(2, 64, 4.0);
  g.fill([](const Vector& x) {
    return Complex(std::exp(-M_PI * x.squaredNorm()), 0);
  });
  GridFunction gh = fourier_transform(g, -1);
  double worst2 = 0;
  for (std::int64_t i = 0; i < gh.size(); ++i) {
    Vector xi = gh.point(i);
    worst2 = std::max(worst2, std::abs(gh.samples()[static_cast<size_t>(i)] -
                                       Complex(std::exp(-M_PI * xi.squaredNorm()), 0)));
  }
  check_lt(worst2, 1e-8, "2-d Gaussian self-duality");
}

void test_derivative_oracle() {
  section("x e^{-pi x^2} against quadrature");
  GridFunction f(1, 256, 8.0);
  f.fill([](const Vector& x) {
    return Complex(x(0) * std::exp(-M_PI * x(0) * x(0)), 0);
  });
  GridFunction fh = fourier_transform(f, -1);
  auto cf = [](const Vector& x) {
    return Complex(x(0) * std::exp(-M_PI * x(0) * x(0)), 0);
  };
  // Closed form -i xi e^{-pi xi^2}, frozen from the quadrature oracle below.
  double worst_closed = 0, worst_quad = 0;
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    std::int64_t i = static_cast<std::int64_t>(rng() % 256);
    double xi = fh.point(i)(0);
    Complex got = fh.samples()[static_cast<size_t>(i)];
    Complex closed = Complex(0, -xi * std::exp(-M_PI * xi * xi));
    worst_closed = std::max(worst_closed, std::abs(got - closed));
    if (std::abs(xi) < 4) {
      Vector xiv(1);
      xiv << xi;
      Complex quad = oracles::fourier_quadrature(cf, xiv, 8.0, 1024);
      worst_quad = std::max(worst_quad, std::abs(got - quad));
    }
  }
  check_lt(worst_closed, 1e-8, "closed form agreement");
  check_lt(worst_quad, 1e-8, "4x oversampled quadrature agreement");
}

void test_inversion_and_unitarity() {
  section("inversion and unitarity");
  std::mt19937_64 rng(9);
  GridFunction f(1, 128, 8.0);
  f.fill([&](const Vector& x) {
    return Complex(std::exp(-0.7 * M_PI * x.squaredNorm()),
                   0.3 * std::exp(-M_PI * (x(0) - 0.5) * (x(0) - 0.5)));
  });
  GridFunction round = fourier_transform(fourier_transform(f, 1), -1);
  check_lt(rel_l2(round, f), 1e-12, "F^{-1} F = id");
  GridFunction fh = fourier_transform(f, -1);
  check_close(fh.norm_l2(), f.norm_l2(), 1e-10 * f.norm_l2(), "Plancherel");
}

void test_grid_io() {
  section("grid binary and CSV");
  std::mt19937_64 rng(13);
  GridFunction f(2, 16, 2.0);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& z : f.samples()) z = Complex(u(rng), u(rng));
  f.save("grid_io_test.mpgf");
  GridFunction back = GridFunction::load("grid_io_test.mpgf");
  check(back.dim() == 2 && back.n() == 16 && back.half_extent() == 2.0,
        "binary metadata");
  check(back.samples() == f.samples(), "binary samples bit-exact");
  back.save_csv("grid_io_test.csv");
  std::remove("grid_io_test.mpgf");
  std::remove("grid_io_test.csv");

  check_throws(ErrorCode::InvalidArgument, "n must be a power of two",
               [] { GridFunction g(1, 100, 4.0); });
  check_throws(ErrorCode::Io, "missing file",
               [] { GridFunction::load("no_such_file.mpgf"); });
}

void test_interpolation() {
  section("band-limited interpolation");
  GridFunction f(1, 256, 8.0);
  f.fill([](const Vector& x) {
    return Complex(std::exp(-M_PI * x.squaredNorm()) * std::cos(2.0 * x(0)),
                   std::exp(-2.0 * M_PI * x.squaredNorm()));
  });
  Interpolator fi(f);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0;
  for (int k = 0; k < 500; ++k) {
    Vector x(1);
    x << u(rng);
    Complex want(std::exp(-M_PI * x.squaredNorm()) * std::cos(2.0 * x(0)),
                 std::exp(-2.0 * M_PI * x.squaredNorm()));
    worst = std::max(worst, std::abs(fi(x) - want));
  }
  check_lt(worst, 2e-6, "1-d off-grid evaluation");

  GridFunction g(2, 64, 4.0);
  g.fill([](const Vector& x) {
    return Complex(std::exp(-M_PI * x.squaredNorm()), 0);
  });
  Interpolator gi(g);
  double worst2 = 0;
  for (int k = 0; k < 500; ++k) {
    Vector x(2);
    x << u(rng) * 0.6, u(rng) * 0.6;
    worst2 = std::max(
        worst2, std::abs(gi(x) - Complex(std::exp(-M_PI * x.squaredNorm()), 0)));
  }
  check_lt(worst2, 2e-6, "2-d off-grid evaluation");

  // Upsampling preserves original nodes exactly.
  GridFunction up = upsample(f, 4);
  double node_err = 0;
  for (int k = 0; k < 256; ++k)
    node_err = std::max(node_err,
                        std::abs(up.samples()[static_cast<size_t>(4 * k)] -
                                 f.samples()[static_cast<size_t>(k)]));
  check_lt(node_err, 1e-12, "upsample node preservation");
}

}  // namespace

int main() {
  test_gaussian_self_duality();
  test_derivative_oracle();
  test_inversion_and_unitarity();
  test_grid_io();
  test_interpolation();
  return summary("test_grid_fft");
}
