#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/linalg.hpp"

namespace mpk {

/// Complex samples of f : R^d -> C on the uniform centered grid
/// x_k = -L + k * (2L/n) per axis, k = 0..n-1, row-major storage.
///
/// n must be a power of two. The grid is self-dual under the
/// unit-frequency Fourier transform exactly when n = 4L^2; the standard
/// working configurations (n=256, L=8), (n=64, L=4), (n=16, L=2) satisfy it.
class GridFunction {
public:
  GridFunction(int dim, int n, double half_extent);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double half_extent() const { return half_extent_; }
  double spacing() const { return spacing_; }
  std::int64_t size() const { return static_cast<std::int64_t>(samples_.size()); }

  std::vector<Complex>& samples() { return samples_; }
  const std::vector<Complex>& samples() const { return samples_; }

  bool same_grid(const GridFunction& other) const {
    return dim_ == other.dim_ && n_ == other.n_ &&
           half_extent_ == other.half_extent_;
  }

  /// Coordinates of the grid point with the given flat index.
  Vector point(std::int64_t flat) const;
  /// Flat index from per-axis indices.
  std::int64_t flat_index(const std::vector<int>& idx) const;

  void fill(const std::function<Complex(const Vector&)>& f);

  /// Riemann-sum L2 norm: sqrt(spacing^d * sum |f|^2).
  double norm_l2() const;
  double peak_abs() const;
  /// Largest |f| over the outermost index layer.
  double boundary_max_abs() const;

  void save(const std::string& path) const;          // MPGF binary
  static GridFunction load(const std::string& path);
  void save_csv(const std::string& path) const;      // d <= 2 only

private:
  int dim_;
  int n_;
  double half_extent_;
  double spacing_;
  std::vector<Complex> samples_;
};

/// Samples of a cross-Wigner distribution W(f,g)(x,xi). The x axes carry the
/// source grid (n_x points, half-extent L_x); the xi axes carry the lag
/// transform's natural dual grid (n_xi = 2 n_x points, half-extent
/// n_x/(4 L_x) * 2L_x ... = 1/(2 spacing)).
struct PhaseSpaceGrid {
  int dim = 0;  // d of the underlying functions; total axes = 2d
  int n_x = 0;
  double l_x = 0.0;
  int n_xi = 0;
  double l_xi = 0.0;
  std::vector<Complex> samples;  // row-major, x axes first, then xi axes

  double spacing_x() const { return 2.0 * l_x / n_x; }
  double spacing_xi() const { return 2.0 * l_xi / n_xi; }
  void save_csv(const std::string& path) const;  // d == 1 only
};

}  // namespace mpk
