#include "core/metaplectic.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "core/threading.hpp"

namespace mpk {

namespace {

constexpr double kBoundaryDecayWarn = 1e-8;

void check_boundary_decay(const GridFunction& f, WarningSink* w,
                          const char* who) {
  double peak = f.peak_abs();
  if (peak == 0) return;
  double edge = f.boundary_max_abs();
  if (edge > kBoundaryDecayWarn * peak)
    warn(w, "AliasRisk",
         std::string(who) + ": boundary samples reach " +
             std::to_string(edge / peak) + " of peak; wrap-around likely");
}

void check_chirp_bandwidth(const Matrix& q, double extent, double nyquist,
                           WarningSink* w, const char* who) {
  double slope = sigma_max(q) * extent;  // peak instantaneous frequency
  if (slope > nyquist)
    warn(w, "AliasRisk",
         std::string(who) + ": chirp instantaneous frequency " +
             std::to_string(slope) + " exceeds Nyquist " +
             std::to_string(nyquist));
}

// Axis-aligned index box where |f| is above threshold, padded by two cells.
struct SupportBox {
  std::vector<int> lo, hi;  // inclusive index bounds per axis; lo > hi = empty
  bool empty = true;
};

SupportBox support_box(const GridFunction& f, double rel_threshold) {
  const int d = f.dim(), n = f.n();
  SupportBox box;
  box.lo.assign(static_cast<size_t>(d), n);
  box.hi.assign(static_cast<size_t>(d), -1);
  double cut = rel_threshold * f.peak_abs();
  for (std::int64_t i = 0; i < f.size(); ++i) {
    if (std::abs(f.samples()[static_cast<size_t>(i)]) <= cut) continue;
    box.empty = false;
    std::int64_t rest = i;
    for (int ax = d - 1; ax >= 0; --ax) {
      int k = static_cast<int>(rest % n);
      rest /= n;
      box.lo[static_cast<size_t>(ax)] = std::min(box.lo[static_cast<size_t>(ax)], k);
      box.hi[static_cast<size_t>(ax)] = std::max(box.hi[static_cast<size_t>(ax)], k);
    }
  }
  for (int ax = 0; ax < d; ++ax) {
    box.lo[static_cast<size_t>(ax)] = std::max(0, box.lo[static_cast<size_t>(ax)] - 2);
    box.hi[static_cast<size_t>(ax)] = std::min(n - 1, box.hi[static_cast<size_t>(ax)] + 2);
  }
  return box;
}

// out(t) = amp * g(E t) for t on the target grid.
GridFunction sample_linear_map(const GridFunction& g, const Matrix& e,
                               double amp, int out_n, double out_l) {
  const int d = g.dim();
  GridFunction out(d, out_n, out_l);
  Interpolator gi(g);
  parallel_for(0, out.size(), [&](std::int64_t lo, std::int64_t hi) {
    Vector y(d);
    for (std::int64_t i = lo; i < hi; ++i) {
      Vector t = out.point(i);
      y.noalias() = e * t;
      out.samples()[static_cast<size_t>(i)] = amp * gi.at(y.data());
    }
  });
  return out;
}

bool nearly_identity(const Matrix& e) {
  return (e - Matrix::Identity(e.rows(), e.cols())).cwiseAbs().maxCoeff() <
         1e-15;
}

// B treated as identically zero when its largest singular value is
// negligible against the matrix scale (a relative rank tolerance would
// report spurious rank on a pure-noise block).
bool b_block_vanishes(const SymplecticMatrix& s) {
  return sigma_max(s.b()) <=
         1e-10 * std::max(1.0, s.entries().cwiseAbs().maxCoeff());
}

GridFunction apply_b_zero(const SymplecticMatrix& s, const GridFunction& f,
                          WarningSink* w) {
  // S = diag-block(A, A^{-T}) * V_{A^T C}: chirp then rescale by A^{-1}.
  Matrix atc = symmetrized(s.a().transpose() * s.c());
  GridFunction g = chirp_multiply(f, atc, w);
  Matrix ainv = s.a().partialPivLu().inverse();
  return rescale(g, ainv, w);
}

GridFunction apply_free(const SymplecticMatrix& s, const GridFunction& f,
                        WarningSink* w) {
  const Matrix& b = s.b();
  Matrix binv = b.partialPivLu().inverse();
  Matrix binv_a = symmetrized(binv * s.a());
  Matrix d_binv = symmetrized(s.d_block() * binv);

  GridFunction g = chirp_multiply(f, binv_a, w);
  GridFunction gh = fourier_transform(g, -1);
  check_boundary_decay(gh, w, "apply(free)");

  GridFunction h(f.dim(), f.n(), f.half_extent());
  double amp = std::sqrt(std::abs(1.0 / b.determinant()));
  if (nearly_identity(binv) && gh.same_grid(f)) {
    h = gh;  // exact FFT path (self-dual grid, B = I)
  } else {
    h = sample_linear_map(gh, binv, amp, f.n(), f.half_extent());
  }
  return chirp_multiply(h, d_binv, w);
}

GridFunction apply_general(const SymplecticMatrix& s, const GridFunction& f,
                           WarningSink* w, double tol_rank) {
  const int d = f.dim();
  SymplecticGeometry geo = analyze_b(s, tol_rank);
  const int r = geo.rank;
  const Matrix v = geo.b_spaces.ker_perp.basis;           // d x r
  const Matrix q_r = symmetrized(v.transpose() * geo.b_pinv * s.a() * v);
  const Matrix vt_ct = v.transpose() * s.c().transpose();  // r x d
  const Matrix dt = s.d_block().transpose();               // d x d
  const Matrix dct = symmetrized(s.d_block() * s.c().transpose());
  const double mu = mu_s(s, geo.tol);

  const double delta = f.spacing();
  const double delta_u = 0.5 * delta;
  const double big_l = f.half_extent();

  // Integration extent along ker(B)^perp: enough to cover every fiber's
  // intersection with the domain cube for every base point D^T xi.
  const double reach =
      std::sqrt(static_cast<double>(d)) * big_l * (1.0 + sigma_max(dt));
  const std::int64_t half_m = static_cast<std::int64_t>(std::ceil(reach / delta_u)) + 2;
  const std::int64_t m = 2 * half_m + 1;  // u_j = (j - half_m) * delta_u
  if (r >= 2 && m > (1 << 14))
    fail(ErrorCode::GridMismatch,
         "fiber grid too large for rank " + std::to_string(r));

  check_boundary_decay(f, w, "apply(general)");
  // Aliasing on the fiber: signal bandwidth + chirp slope + modulation must
  // stay below the fiber Nyquist rate.
  {
    double bw_signal = 0.5 / delta;
    double chirp_slope = sigma_max(q_r) * reach;
    double mod = sigma_max(vt_ct) * big_l * std::sqrt(static_cast<double>(d));
    if (bw_signal + chirp_slope + mod > 1.0 / delta_u)
      warn(w, "AliasRisk",
           "apply(general): fiber integrand bandwidth " +
               std::to_string(bw_signal + chirp_slope + mod) +
               " exceeds fiber Nyquist " + std::to_string(1.0 / delta_u));
  }

  Interpolator fi(f);
  SupportBox box = support_box(f, 1e-17);
  GridFunction out(d, f.n(), big_l);
  if (box.empty) return out;

  // Box corners in coordinates.
  Vector box_lo(d), box_hi(d);
  for (int ax = 0; ax < d; ++ax) {
    box_lo(ax) = -big_l + box.lo[static_cast<size_t>(ax)] * delta;
    box_hi(ax) = -big_l + box.hi[static_cast<size_t>(ax)] * delta;
  }

  if (r == 1) {
    // Chirp table over the fiber lattice.
    std::vector<Complex> chirp(static_cast<size_t>(m));
    for (std::int64_t j = 0; j < m; ++j) {
      double u = (j - half_m) * delta_u;
      chirp[static_cast<size_t>(j)] = std::polar(1.0, M_PI * q_r(0, 0) * u * u);
    }
    const Vector vcol = v.col(0);

    parallel_for(0, out.size(), [&](std::int64_t lo_i, std::int64_t hi_i) {
      Vector base(d), pt(d);
      for (std::int64_t i = lo_i; i < hi_i; ++i) {
        Vector xi = out.point(i);
        base.noalias() = dt * xi;
        // Window: u with  V u + base  inside the support box.
        double u_lo = -(half_m * delta_u), u_hi = half_m * delta_u;
        bool empty = false;
        for (int ax = 0; ax < d && !empty; ++ax) {
          double dir = vcol(ax);
          double lo_c = box_lo(ax) - base(ax), hi_c = box_hi(ax) - base(ax);
          if (std::abs(dir) < 1e-14) {
            if (base(ax) < box_lo(ax) - 1e-12 || base(ax) > box_hi(ax) + 1e-12)
              empty = true;
          } else {
            double t0 = lo_c / dir, t1 = hi_c / dir;
            if (t0 > t1) std::swap(t0, t1);
            u_lo = std::max(u_lo, t0);
            u_hi = std::min(u_hi, t1);
          }
        }
        if (empty || u_lo > u_hi) {
          out.samples()[static_cast<size_t>(i)] = Complex(0, 0);
          continue;
        }
        std::int64_t j0 = std::max<std::int64_t>(
            0, static_cast<std::int64_t>(std::floor(u_lo / delta_u)) + half_m);
        std::int64_t j1 = std::min<std::int64_t>(
            m - 1,
            static_cast<std::int64_t>(std::ceil(u_hi / delta_u)) + half_m);

        double w_freq = vt_ct.row(0).dot(xi);
        double u0 = (j0 - half_m) * delta_u;
        Complex phase = std::polar(1.0, 2.0 * M_PI * w_freq * u0);
        const Complex step = std::polar(1.0, 2.0 * M_PI * w_freq * delta_u);
        Complex acc(0, 0);
        for (std::int64_t j = j0; j <= j1; ++j) {
          double u = (j - half_m) * delta_u;
          for (int ax = 0; ax < d; ++ax) pt(ax) = vcol(ax) * u + base(ax);
          Complex val = fi.at(pt.data());
          acc += val * chirp[static_cast<size_t>(j)] * phase;
          phase *= step;
        }
        double outer = M_PI * xi.dot(dct * xi);
        out.samples()[static_cast<size_t>(i)] =
            mu * std::polar(delta_u, outer) * acc;
      }
    });
    return out;
  }

  // Generic rank >= 2 fiber quadrature (exercised only for d >= 3).
  std::vector<std::int64_t> shape(static_cast<size_t>(r), m);
  std::int64_t fiber_total = 1;
  for (int k = 0; k < r; ++k) fiber_total *= m;

  parallel_for(0, out.size(), [&](std::int64_t lo_i, std::int64_t hi_i) {
    Vector base(d), pt(d), u(r);
    for (std::int64_t i = lo_i; i < hi_i; ++i) {
      Vector xi = out.point(i);
      base.noalias() = dt * xi;
      Vector w_freq = vt_ct * xi;
      Complex acc(0, 0);
      for (std::int64_t jf = 0; jf < fiber_total; ++jf) {
        std::int64_t rest = jf;
        for (int k = r - 1; k >= 0; --k) {
          u(k) = (rest % m - half_m) * delta_u;
          rest /= m;
        }
        pt.noalias() = v * u + base;
        bool inside = true;
        for (int ax = 0; ax < d; ++ax)
          if (pt(ax) < box_lo(ax) || pt(ax) > box_hi(ax)) {
            inside = false;
            break;
          }
        if (!inside) continue;
        Complex val = fi.at(pt.data());
        if (val == Complex(0, 0)) continue;
        double ph = M_PI * u.dot(q_r * u) + 2.0 * M_PI * w_freq.dot(u);
        acc += val * std::polar(1.0, ph);
      }
      double outer = M_PI * xi.dot(dct * xi);
      out.samples()[static_cast<size_t>(i)] =
          mu * std::polar(std::pow(delta_u, r), outer) * acc;
    }
  });
  return out;
}

}  // namespace

GridFunction fourier_transform(const GridFunction& f, int sign) {
  return centered_fourier(f, sign);
}

GridFunction chirp_multiply(const GridFunction& f, const Matrix& q,
                            WarningSink* w) {
  if (q.rows() != f.dim() || q.cols() != f.dim())
    fail(ErrorCode::InvalidArgument, "chirp matrix has wrong size");
  if (!is_symmetric(q))
    fail(ErrorCode::NonSymmetricInput, "chirp requires symmetric Q");
  check_chirp_bandwidth(
      q, f.half_extent() * std::sqrt(static_cast<double>(f.dim())),
      0.5 / f.spacing(), w, "chirp_multiply");
  GridFunction out = f;
  for (std::int64_t i = 0; i < f.size(); ++i) {
    Vector x = f.point(i);
    out.samples()[static_cast<size_t>(i)] *= std::polar(1.0, M_PI * x.dot(q * x));
  }
  return out;
}

GridFunction rescale(const GridFunction& f, const Matrix& e, WarningSink* w) {
  if (e.rows() != f.dim() || e.cols() != f.dim())
    fail(ErrorCode::InvalidArgument, "rescale matrix has wrong size");
  if (condition_number(e) >= 1e10)
    fail(ErrorCode::SingularInput, "rescale requires cond(E) < 1e10");
  check_boundary_decay(f, w, "rescale");
  if (nearly_identity(e)) return f;
  double amp = std::sqrt(std::abs(e.determinant()));
  return sample_linear_map(f, e, amp, f.n(), f.half_extent());
}

GridFunction multiplier(const GridFunction& f, const Matrix& p,
                        WarningSink* w) {
  if (!is_symmetric(p))
    fail(ErrorCode::NonSymmetricInput, "multiplier requires symmetric P");
  GridFunction fh = fourier_transform(f, -1);
  check_chirp_bandwidth(
      p, fh.half_extent() * std::sqrt(static_cast<double>(f.dim())),
      0.5 / fh.spacing(), w, "multiplier");
  for (std::int64_t i = 0; i < fh.size(); ++i) {
    Vector xi = fh.point(i);
    fh.samples()[static_cast<size_t>(i)] *=
        std::polar(1.0, -M_PI * xi.dot(p * xi));
  }
  return fourier_transform(fh, 1);
}

GridFunction apply_metaplectic(const SymplecticMatrix& s, const GridFunction& f,
                               WarningSink* w, double tol_rank) {
  if (s.dim() != f.dim())
    fail(ErrorCode::GridMismatch, "operator and grid dimension differ");
  if (b_block_vanishes(s)) return apply_b_zero(s, f, w);
  SymplecticGeometry geo = analyze_b(s, tol_rank);
  if (geo.rank == f.dim()) return apply_free(s, f, w);
  return apply_general(s, f, w, tol_rank);
}

PhaseSpaceGrid wigner(const GridFunction& f, const GridFunction& g) {
  if (!f.same_grid(g)) fail(ErrorCode::GridMismatch, "wigner grids differ");
  const int d = f.dim(), n = f.n();
  const double delta = f.spacing();
  const int nt = 2 * n;

  std::int64_t total = 1;
  for (int i = 0; i < 2 * d; ++i) total *= (i < d ? n : nt);
  if (total > (std::int64_t{1} << 25))
    fail(ErrorCode::InvalidArgument, "phase-space grid too large");

  PhaseSpaceGrid out;
  out.dim = d;
  out.n_x = n;
  out.l_x = f.half_extent();
  out.n_xi = nt;
  out.l_xi = 0.5 / delta;
  out.samples.assign(static_cast<size_t>(total), Complex(0, 0));

  GridFunction f2 = upsample(f, 2);
  GridFunction g2 = upsample(g, 2);
  const int fine_n = 2 * n;

  std::int64_t n_x_total = 1;
  for (int i = 0; i < d; ++i) n_x_total *= n;
  std::int64_t nt_total = 1;
  for (int i = 0; i < d; ++i) nt_total *= nt;

  // Lag integrand h_x(t) = f(x + t/2) conj(g(x - t/2)) lives exactly on the
  // factor-2 lattice; transform it per x.
  parallel_for(0, n_x_total, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<int> kx(static_cast<size_t>(d)), jv(static_cast<size_t>(d));
    for (std::int64_t ix = lo; ix < hi; ++ix) {
      std::int64_t rest = ix;
      for (int ax = d - 1; ax >= 0; --ax) {
        kx[static_cast<size_t>(ax)] = static_cast<int>(rest % n);
        rest /= n;
      }
      GridFunction lag(d, nt, 0.5 * nt * delta);
      for (std::int64_t jt = 0; jt < nt_total; ++jt) {
        std::int64_t rt = jt;
        for (int ax = d - 1; ax >= 0; --ax) {
          jv[static_cast<size_t>(ax)] = static_cast<int>(rt % nt);
          rt /= nt;
        }
        std::int64_t ip = 0, im = 0;
        bool ok = true;
        for (int ax = 0; ax < d && ok; ++ax) {
          int iplus = 2 * kx[static_cast<size_t>(ax)] + jv[static_cast<size_t>(ax)] - n;
          int iminus = 2 * kx[static_cast<size_t>(ax)] - jv[static_cast<size_t>(ax)] + n;
          if (iplus < 0 || iplus >= fine_n || iminus < 0 || iminus >= fine_n)
            ok = false;
          ip = ip * fine_n + iplus;
          im = im * fine_n + iminus;
        }
        lag.samples()[static_cast<size_t>(jt)] =
            ok ? f2.samples()[static_cast<size_t>(ip)] *
                     std::conj(g2.samples()[static_cast<size_t>(im)])
               : Complex(0, 0);
      }
      GridFunction spec = centered_fourier(lag, -1);
      std::copy(spec.samples().begin(), spec.samples().end(),
                out.samples.begin() + ix * nt_total);
    }
  });
  return out;
}

namespace {

// Greedy pick of `count` per-axis index tuples, strongest weights first,
// keeping a minimum per-axis separation so the probes spread out.
std::vector<std::vector<int>> pick_probe_sites(
    const std::vector<double>& weight, int d, int n, int count,
    int min_separation) {
  std::vector<std::int64_t> order(weight.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    return weight[static_cast<size_t>(a)] > weight[static_cast<size_t>(b)];
  });
  std::vector<std::vector<int>> picked;
  for (std::int64_t flat : order) {
    if (static_cast<int>(picked.size()) >= count) break;
    std::vector<int> idx(static_cast<size_t>(d));
    std::int64_t rest = flat;
    for (int ax = d - 1; ax >= 0; --ax) {
      idx[static_cast<size_t>(ax)] = static_cast<int>(rest % n);
      rest /= n;
    }
    bool far = true;
    for (const auto& q : picked) {
      int dist = 0;
      for (int ax = 0; ax < d; ++ax)
        dist = std::max(dist, std::abs(idx[static_cast<size_t>(ax)] -
                                       q[static_cast<size_t>(ax)]));
      if (dist < min_separation) {
        far = false;
        break;
      }
    }
    if (far) picked.push_back(idx);
  }
  return picked;
}

}  // namespace

double check_covariance(const SymplecticMatrix& s, const GridFunction& f,
                        int probes_per_axis, WarningSink* w) {
  const int d = f.dim(), n = f.n();
  if (s.dim() != d) fail(ErrorCode::GridMismatch, "dimension mismatch");
  check_boundary_decay(f, w, "check_covariance");
  int p = probes_per_axis;
  if (p <= 0) p = d == 1 ? 16 : (d == 2 ? 5 : 2);
  int x_count = 1, xi_count = 1;
  for (int i = 0; i < d; ++i) {
    x_count *= p;
    xi_count *= p;
  }

  GridFunction sf = apply_metaplectic(s, f, w);

  const double delta = f.spacing();
  const int nt = 2 * n;
  const double delta_xi = 1.0 / (nt * delta);

  // Probes follow the energy: x sites where |Sf|^2 is large, xi sites where
  // the spectral marginal |F(Sf)|^2 is large (on the even sub-lattice of the
  // lag-transform bins).
  std::vector<double> wx(static_cast<size_t>(sf.size()));
  for (std::int64_t i = 0; i < sf.size(); ++i)
    wx[static_cast<size_t>(i)] = std::norm(sf.samples()[static_cast<size_t>(i)]);
  auto x_sites = pick_probe_sites(wx, d, n, x_count, std::max(1, n / (2 * p)));

  GridFunction sfh = centered_fourier(sf, -1);
  std::vector<double> wxi(static_cast<size_t>(sfh.size()));
  for (std::int64_t i = 0; i < sfh.size(); ++i)
    wxi[static_cast<size_t>(i)] = std::norm(sfh.samples()[static_cast<size_t>(i)]);
  auto xi_sites = pick_probe_sites(wxi, d, n, xi_count, std::max(1, n / (2 * p)));

  GridFunction sf2 = upsample(sf, 2);
  const int fine_n = 2 * n;
  std::int64_t nt_total = 1;
  for (int i = 0; i < d; ++i) nt_total *= nt;

  const std::int64_t x_probe_total = static_cast<std::int64_t>(x_sites.size());
  const std::int64_t xi_probe_total = static_cast<std::int64_t>(xi_sites.size());
  const std::int64_t probe_total = x_probe_total * xi_probe_total;

  std::vector<Complex> lhs(static_cast<size_t>(probe_total));
  std::vector<Complex> rhs(static_cast<size_t>(probe_total));

  // LHS: W(Sf, Sf) at probes, one lag FFT per probed x.
  for (std::int64_t ix = 0; ix < x_probe_total; ++ix) {
    const std::vector<int>& kx = x_sites[static_cast<size_t>(ix)];
    GridFunction lag(d, nt, 0.5 * nt * delta);
    std::vector<int> jv(static_cast<size_t>(d));
    for (std::int64_t jt = 0; jt < nt_total; ++jt) {
      std::int64_t rt = jt;
      std::int64_t ip = 0, im = 0;
      bool ok = true;
      for (int ax = d - 1; ax >= 0; --ax) {
        jv[static_cast<size_t>(ax)] = static_cast<int>(rt % nt);
        rt /= nt;
      }
      for (int ax = 0; ax < d && ok; ++ax) {
        int iplus = 2 * kx[static_cast<size_t>(ax)] + jv[static_cast<size_t>(ax)] - n;
        int iminus = 2 * kx[static_cast<size_t>(ax)] - jv[static_cast<size_t>(ax)] + n;
        if (iplus < 0 || iplus >= fine_n || iminus < 0 || iminus >= fine_n)
          ok = false;
        ip = ip * fine_n + iplus;
        im = im * fine_n + iminus;
      }
      lag.samples()[static_cast<size_t>(jt)] =
          ok ? sf2.samples()[static_cast<size_t>(ip)] *
                   std::conj(sf2.samples()[static_cast<size_t>(im)])
             : Complex(0, 0);
    }
    GridFunction spec = centered_fourier(lag, -1);
    for (std::int64_t jxi = 0; jxi < xi_probe_total; ++jxi) {
      std::int64_t flat = 0;
      const std::vector<int>& mv = xi_sites[static_cast<size_t>(jxi)];
      // The spectral-marginal grid has n bins of spacing 1/(n delta); bin k
      // corresponds to lag bin n + 2(k - n/2) = 2k.
      for (int ax = 0; ax < d; ++ax)
        flat = flat * nt + 2 * mv[static_cast<size_t>(ax)];
      lhs[static_cast<size_t>(ix * xi_probe_total + jxi)] =
          spec.samples()[static_cast<size_t>(flat)];
    }
  }

  // RHS: W(f, f)(S^{-1}(x, xi)) by direct lag quadrature with interpolation.
  Interpolator fi(f);
  SupportBox box = support_box(f, 1e-16);
  Vector box_lo(d), box_hi(d);
  for (int ax = 0; ax < d; ++ax) {
    box_lo(ax) = -f.half_extent() + box.lo[static_cast<size_t>(ax)] * delta;
    box_hi(ax) = -f.half_extent() + box.hi[static_cast<size_t>(ax)] * delta;
  }
  Matrix sinv = s.inverse().entries();

  parallel_for(0, probe_total, [&](std::int64_t lo, std::int64_t hi) {
    Vector z(2 * d), zp(2 * d), xp(d), xm(d);
    for (std::int64_t q = lo; q < hi; ++q) {
      std::int64_t jxi = q % xi_probe_total;
      std::int64_t ix = q / xi_probe_total;
      const std::vector<int>& kx = x_sites[static_cast<size_t>(ix)];
      const std::vector<int>& mv = xi_sites[static_cast<size_t>(jxi)];
      for (int ax = 0; ax < d; ++ax) {
        z(ax) = -f.half_extent() + kx[static_cast<size_t>(ax)] * delta;
        z(d + ax) = (2 * mv[static_cast<size_t>(ax)] - n) * delta_xi;
      }
      zp.noalias() = sinv * z;

      // t-window from the support box: x' +- t/2 must meet the box.
      double t_lo[6], t_hi[6];
      bool empty = false;
      for (int ax = 0; ax < d; ++ax) {
        double a1 = 2.0 * (box_lo(ax) - zp(ax));
        double b1 = 2.0 * (box_hi(ax) - zp(ax));
        double a2 = -b1, b2 = -a1;
        t_lo[ax] = std::max(a1, a2);
        t_hi[ax] = std::min(b1, b2);
        if (t_lo[ax] > t_hi[ax]) empty = true;
      }
      if (empty) {
        rhs[static_cast<size_t>(q)] = Complex(0, 0);
        continue;
      }
      std::int64_t j0[6], j1[6];
      for (int ax = 0; ax < d; ++ax) {
        j0[ax] = std::max<std::int64_t>(
            0, static_cast<std::int64_t>(std::floor(t_lo[ax] / delta)) + n);
        j1[ax] = std::min<std::int64_t>(
            nt - 1, static_cast<std::int64_t>(std::ceil(t_hi[ax] / delta)) + n);
      }
      Complex acc(0, 0);
      std::int64_t idx[6];
      for (int ax = 0; ax < d; ++ax) idx[ax] = j0[ax];
      while (true) {
        double phase = 0;
        for (int ax = 0; ax < d; ++ax) {
          double t = (idx[ax] - n) * delta;
          xp(ax) = zp(ax) + 0.5 * t;
          xm(ax) = zp(ax) - 0.5 * t;
          phase += zp(d + ax) * t;
        }
        Complex vp = fi.at(xp.data());
        if (vp != Complex(0, 0)) {
          Complex vm = fi.at(xm.data());
          acc += vp * std::conj(vm) * std::polar(1.0, -2.0 * M_PI * phase);
        }
        int ax = d - 1;
        while (ax >= 0 && ++idx[ax] > j1[ax]) idx[ax--] = j0[ax];
        if (ax < 0) break;
      }
      rhs[static_cast<size_t>(q)] = acc * std::pow(delta, d);
    }
  });

  double num = 0, den = 0;
  for (std::int64_t q = 0; q < probe_total; ++q) {
    num += std::norm(lhs[static_cast<size_t>(q)] - rhs[static_cast<size_t>(q)]);
    den += std::norm(rhs[static_cast<size_t>(q)]);
  }
  if (den == 0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace mpk
