#include "core/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace mpk {

namespace {

bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

std::int64_t ipow(int n, int d) {
  std::int64_t r = 1;
  for (int i = 0; i < d; ++i) r *= n;
  return r;
}

}  // namespace

GridFunction::GridFunction(int dim, int n, double half_extent)
    : dim_(dim), n_(n), half_extent_(half_extent) {
  if (dim < 1 || dim > 6)
    fail(ErrorCode::InvalidArgument, "grid dimension out of range");
  if (!power_of_two(n))
    fail(ErrorCode::InvalidArgument, "points per axis must be a power of two");
  if (!(half_extent > 0))
    fail(ErrorCode::InvalidArgument, "half extent must be positive");
  spacing_ = 2.0 * half_extent_ / n_;
  std::int64_t total = ipow(n_, dim_);
  if (total > (std::int64_t{1} << 26))
    fail(ErrorCode::InvalidArgument, "grid too large");
  samples_.assign(static_cast<size_t>(total), Complex(0, 0));
}

Vector GridFunction::point(std::int64_t flat) const {
  Vector x(dim_);
  for (int ax = dim_ - 1; ax >= 0; --ax) {
    int k = static_cast<int>(flat % n_);
    flat /= n_;
    x(ax) = -half_extent_ + k * spacing_;
  }
  return x;
}

std::int64_t GridFunction::flat_index(const std::vector<int>& idx) const {
  std::int64_t flat = 0;
  for (int ax = 0; ax < dim_; ++ax) flat = flat * n_ + idx[static_cast<size_t>(ax)];
  return flat;
}

void GridFunction::fill(const std::function<Complex(const Vector&)>& f) {
  for (std::int64_t i = 0; i < size(); ++i) samples_[static_cast<size_t>(i)] = f(point(i));
}

double GridFunction::norm_l2() const {
  double s = 0;
  for (const Complex& z : samples_) s += std::norm(z);
  return std::sqrt(s * std::pow(spacing_, dim_));
}

double GridFunction::peak_abs() const {
  double m = 0;
  for (const Complex& z : samples_) m = std::max(m, std::abs(z));
  return m;
}

double GridFunction::boundary_max_abs() const {
  double m = 0;
  for (std::int64_t i = 0; i < size(); ++i) {
    std::int64_t rest = i;
    bool boundary = false;
    for (int ax = dim_ - 1; ax >= 0; --ax) {
      int k = static_cast<int>(rest % n_);
      rest /= n_;
      if (k == 0 || k == n_ - 1) boundary = true;
    }
    if (boundary) m = std::max(m, std::abs(samples_[static_cast<size_t>(i)]));
  }
  return m;
}

// MPGF: magic, u32 version, u32 d, u32 n, f64 L, then n^d (re, im) pairs,
// little-endian, row-major.
void GridFunction::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  f.write("MPGF", 4);
  std::uint32_t version = 1, d32 = static_cast<std::uint32_t>(dim_),
                n32 = static_cast<std::uint32_t>(n_);
  f.write(reinterpret_cast<const char*>(&version), 4);
  f.write(reinterpret_cast<const char*>(&d32), 4);
  f.write(reinterpret_cast<const char*>(&n32), 4);
  f.write(reinterpret_cast<const char*>(&half_extent_), 8);
  static_assert(sizeof(Complex) == 16);
  f.write(reinterpret_cast<const char*>(samples_.data()),
          static_cast<std::streamsize>(samples_.size() * sizeof(Complex)));
  if (!f) fail(ErrorCode::Io, "write failed: " + path);
}

GridFunction GridFunction::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "MPGF", 4) != 0)
    fail(ErrorCode::Io, "not an MPGF file: " + path);
  std::uint32_t version = 0, d32 = 0, n32 = 0;
  double l = 0;
  f.read(reinterpret_cast<char*>(&version), 4);
  f.read(reinterpret_cast<char*>(&d32), 4);
  f.read(reinterpret_cast<char*>(&n32), 4);
  f.read(reinterpret_cast<char*>(&l), 8);
  if (!f || version != 1) fail(ErrorCode::Io, "unsupported MPGF version");
  GridFunction g(static_cast<int>(d32), static_cast<int>(n32), l);
  f.read(reinterpret_cast<char*>(g.samples_.data()),
         static_cast<std::streamsize>(g.samples_.size() * sizeof(Complex)));
  if (!f) fail(ErrorCode::Io, "truncated MPGF file: " + path);
  return g;
}

void GridFunction::save_csv(const std::string& path) const {
  if (dim_ > 2)
    fail(ErrorCode::InvalidArgument, "CSV export is limited to d <= 2");
  std::ofstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  f.precision(17);
  for (int ax = 0; ax < dim_; ++ax) f << 'x' << ax + 1 << ',';
  f << "re,im\n";
  for (std::int64_t i = 0; i < size(); ++i) {
    Vector x = point(i);
    for (int ax = 0; ax < dim_; ++ax) f << x(ax) << ',';
    const Complex& z = samples_[static_cast<size_t>(i)];
    f << z.real() << ',' << z.imag() << '\n';
  }
}

void PhaseSpaceGrid::save_csv(const std::string& path) const {
  if (dim != 1)
    fail(ErrorCode::InvalidArgument, "phase-space CSV export is d == 1 only");
  std::ofstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  f.precision(17);
  f << "x,xi,re,im\n";
  for (int i = 0; i < n_x; ++i) {
    double x = -l_x + i * spacing_x();
    for (int j = 0; j < n_xi; ++j) {
      double xi = -l_xi + j * spacing_xi();
      const Complex& z = samples[static_cast<size_t>(i) * n_xi + j];
      f << x << ',' << xi << ',' << z.real() << ',' << z.imag() << '\n';
    }
  }
}

}  // namespace mpk
