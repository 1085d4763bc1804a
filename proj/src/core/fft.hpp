#pragma once

#include "core/grid.hpp"

namespace mpk {

/// Unit-frequency Fourier transform of a centered grid function, realized by
/// FFT with centered-grid phase corrections. sign = -1 uses the kernel
/// e^{-2 pi i xi.x} (analysis), sign = +1 the conjugate kernel. The result
/// lives on the natural dual grid: n points per axis, half-extent
/// 1/(2 spacing); for n = 4L^2 that grid coincides with the input grid.
GridFunction centered_fourier(const GridFunction& f, int sign);

/// Trigonometric (band-limited) upsampling by an integer factor per axis,
/// same extent. Exact on band-limited data; original nodes are preserved.
GridFunction upsample(const GridFunction& f, int factor);

/// Cubic (Catmull-Rom) point evaluation on top of a band-limited upsample.
/// Points outside the grid evaluate to zero. factor <= 0 selects 8 for
/// d <= 2 and 4 above (measured: factor 4 leaves ~1e-5 pointwise error on
/// working grids, factor 8 ~1e-6 or better).
class Interpolator {
public:
  explicit Interpolator(const GridFunction& f, int factor = -1);

  Complex operator()(const Vector& x) const;
  /// Fast path: evaluation with caller-managed per-axis coordinates.
  Complex at(const double* x) const;

  const GridFunction& fine() const { return fine_; }

private:
  GridFunction fine_;
  int dim_;
  int n_;
  double inv_h_;
  double origin_;
};

}  // namespace mpk
