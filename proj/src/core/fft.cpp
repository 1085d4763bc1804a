#include "core/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace mpk {

namespace {

std::mutex fftw_plan_mutex;

// In-place unnormalized DFT over all axes. sign: FFTW_FORWARD (-1) or
// FFTW_BACKWARD (+1).
void fft_nd(std::vector<Complex>& data, int dim, int n, int sign) {
  std::vector<int> dims(static_cast<size_t>(dim), n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft(dim, dims.data(),
                         reinterpret_cast<fftw_complex*>(data.data()),
                         reinterpret_cast<fftw_complex*>(data.data()), sign,
                         FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
}

// Parity of the sum of per-axis indices for the given flat index.
inline int index_parity(std::int64_t flat, int dim, int n) {
  int p = 0;
  for (int ax = 0; ax < dim; ++ax) {
    p ^= static_cast<int>(flat % n) & 1;
    flat /= n;
  }
  return p;
}

}  // namespace

GridFunction centered_fourier(const GridFunction& f, int sign) {
  if (sign != 1 && sign != -1)
    fail(ErrorCode::InvalidArgument, "fourier sign must be +1 or -1");
  const int d = f.dim(), n = f.n();
  const double delta = f.spacing();
  const double delta_f = 1.0 / (n * delta);
  GridFunction out(d, n, 0.5 * n * delta_f);

  std::vector<Complex> work = f.samples();
  for (std::int64_t i = 0; i < f.size(); ++i)
    if (index_parity(i, d, n)) work[static_cast<size_t>(i)] = -work[static_cast<size_t>(i)];

  fft_nd(work, d, n, sign);

  // Per-axis constant e^{-sign * i pi n / 2}; unity for n divisible by 4.
  Complex axis_const = std::polar(1.0, -sign * M_PI * n / 2.0);
  Complex scale = std::pow(delta, d) * std::pow(axis_const, d);
  for (std::int64_t i = 0; i < f.size(); ++i) {
    Complex v = work[static_cast<size_t>(i)] * scale;
    out.samples()[static_cast<size_t>(i)] =
        index_parity(i, d, n) ? -v : v;
  }
  return out;
}

GridFunction upsample(const GridFunction& f, int factor) {
  if (factor < 1 || (factor & (factor - 1)) != 0)
    fail(ErrorCode::InvalidArgument, "upsample factor must be a power of two");
  if (factor == 1) return f;
  const int d = f.dim(), n = f.n();
  const int big_n = n * factor;

  GridFunction spec = centered_fourier(f, -1);

  // Embed the spectrum in the center of the enlarged bin array, splitting
  // the unpaired lowest (Nyquist) bin across its two images.
  std::int64_t big_total = 1;
  for (int ax = 0; ax < d; ++ax) big_total *= big_n;
  std::vector<Complex> work(static_cast<size_t>(big_total), Complex(0, 0));
  {
    const int off = (big_n - n) / 2;
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (std::int64_t i = 0; i < spec.size(); ++i) {
      std::int64_t rest = i;
      for (int ax = d - 1; ax >= 0; --ax) {
        idx[static_cast<size_t>(ax)] = static_cast<int>(rest % n);
        rest /= n;
      }
      int nyq_axes = 0;
      for (int ax = 0; ax < d; ++ax)
        if (idx[static_cast<size_t>(ax)] == 0) ++nyq_axes;
      double weight = std::pow(0.5, nyq_axes);
      for (int mask = 0; mask < (1 << nyq_axes); ++mask) {
        std::int64_t flat = 0;
        int bit = 0;
        for (int ax = 0; ax < d; ++ax) {
          int k = idx[static_cast<size_t>(ax)];
          int big_k = k + off;
          if (k == 0) {
            if (mask & (1 << bit)) big_k += n;  // +Nyquist image
            ++bit;
          }
          flat = flat * big_n + big_k;
        }
        work[static_cast<size_t>(flat)] +=
            weight * spec.samples()[static_cast<size_t>(i)];
      }
    }
  }

  // Synthesize on the fine grid: inverse centered transform with the dual
  // grid's quadrature weight.
  GridFunction out(d, big_n, f.half_extent());
  const double delta_f = 1.0 / (n * f.spacing());
  for (std::int64_t i = 0; i < big_total; ++i)
    if (index_parity(i, d, big_n)) work[static_cast<size_t>(i)] = -work[static_cast<size_t>(i)];
  fft_nd(work, d, big_n, 1);
  Complex axis_const = std::polar(1.0, M_PI * big_n / 2.0);
  Complex scale = std::pow(delta_f, d) * std::pow(axis_const, d);
  for (std::int64_t i = 0; i < out.size(); ++i) {
    Complex v = work[static_cast<size_t>(i)] * scale;
    out.samples()[static_cast<size_t>(i)] = index_parity(i, d, big_n) ? -v : v;
  }
  return out;
}

Interpolator::Interpolator(const GridFunction& f, int factor)
    : fine_(upsample(f, factor > 0 ? factor : (f.dim() <= 2 ? 8 : 4))),
      dim_(fine_.dim()),
      n_(fine_.n()),
      inv_h_(1.0 / fine_.spacing()),
      origin_(-fine_.half_extent()) {}

Complex Interpolator::operator()(const Vector& x) const { return at(x.data()); }

Complex Interpolator::at(const double* x) const {
  // Separable Catmull-Rom; out-of-range taps read as zero.
  int base[6];
  double w[6][4];
  for (int ax = 0; ax < dim_; ++ax) {
    double u = (x[ax] - origin_) * inv_h_;
    double fl = std::floor(u);
    double t = u - fl;
    int i = static_cast<int>(fl);
    base[ax] = i - 1;
    double t2 = t * t, t3 = t2 * t;
    w[ax][0] = -0.5 * t3 + t2 - 0.5 * t;
    w[ax][1] = 1.5 * t3 - 2.5 * t2 + 1.0;
    w[ax][2] = -1.5 * t3 + 2.0 * t2 + 0.5 * t;
    w[ax][3] = 0.5 * t3 - 0.5 * t2;
    if (base[ax] > n_ - 1 || base[ax] + 3 < 0) return Complex(0, 0);
  }

  const std::vector<Complex>& s = fine_.samples();
  // Up to 4^d taps, accumulated with a small index stack.
  Complex acc(0, 0);
  int taps[6] = {0, 0, 0, 0, 0, 0};
  while (true) {
    double weight = 1.0;
    std::int64_t flat = 0;
    bool valid = true;
    for (int ax = 0; ax < dim_; ++ax) {
      int k = base[ax] + taps[ax];
      if (k < 0 || k >= n_) {
        valid = false;
        break;
      }
      weight *= w[ax][taps[ax]];
      flat = flat * n_ + k;
    }
    if (valid && weight != 0.0) acc += weight * s[static_cast<size_t>(flat)];
    int ax = dim_ - 1;
    while (ax >= 0 && ++taps[ax] == 4) taps[ax--] = 0;
    if (ax < 0) break;
  }
  return acc;
}

}  // namespace mpk
