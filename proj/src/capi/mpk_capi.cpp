#include "mpk.h"

#include <cstring>
#include <string>
#include <vector>

#include "core/hamiltonian.hpp"
#include "core/hardy.hpp"
#include "core/metaplectic.hpp"
#include "core/symplectic.hpp"

struct mpk_symplectic {
  mpk::SymplecticMatrix m;
};
struct mpk_grid {
  mpk::GridFunction g;
};
struct mpk_phase_space {
  mpk::PhaseSpaceGrid w;
};
struct mpk_verdict {
  mpk::HardyVerdict v;
};
struct mpk_hamiltonian {
  mpk::QuadraticHamiltonian h;
};

namespace {

thread_local std::string g_last_error;
thread_local std::vector<std::string> g_warnings;

mpk_status map_code(mpk::ErrorCode c) {
  using EC = mpk::ErrorCode;
  switch (c) {
    case EC::InvalidArgument: return MPK_ERR_INVALID_ARGUMENT;
    case EC::NotSymplectic: return MPK_ERR_NOT_SYMPLECTIC;
    case EC::NonSymmetricInput: return MPK_ERR_NON_SYMMETRIC;
    case EC::SingularInput: return MPK_ERR_SINGULAR;
    case EC::DimensionCollapse: return MPK_ERR_DIMENSION_COLLAPSE;
    case EC::DegenerateGeometry: return MPK_ERR_DEGENERATE_GEOMETRY;
    case EC::IllConditionedSplit: return MPK_ERR_ILL_CONDITIONED;
    case EC::GridMismatch: return MPK_ERR_GRID_MISMATCH;
    case EC::ConditionsViolated: return MPK_ERR_CONDITIONS_VIOLATED;
    case EC::FreeBlock: return MPK_ERR_FREE_BLOCK;
    case EC::InsufficientSupport: return MPK_ERR_INSUFFICIENT_SUPPORT;
    case EC::DegenerateTime: return MPK_ERR_DEGENERATE_TIME;
    case EC::ConditioningGuard: return MPK_ERR_CONDITIONING_GUARD;
    case EC::NonIsotropic: return MPK_ERR_NON_ISOTROPIC;
    case EC::Io: return MPK_ERR_IO;
  }
  return MPK_ERR_UNKNOWN;
}

template <typename Fn>
mpk_status guard(Fn&& fn) noexcept {
  try {
    fn();
    return MPK_OK;
  } catch (const mpk::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MPK_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return MPK_ERR_UNKNOWN;
  }
}

void collect_warnings(const mpk::WarningSink& sink) {
  for (const auto& w : sink.items()) g_warnings.push_back(w.kind + ": " + w.message);
}

mpk::Matrix to_matrix(const double* data, int rows, int cols) {
  if (!data) mpk::fail(mpk::ErrorCode::InvalidArgument, "null matrix buffer");
  mpk::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = data[i * cols + j];
  return m;
}

void from_matrix(const mpk::Matrix& m, double* out) {
  if (!out) return;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out[i * m.cols() + j] = m(i, j);
}

void require(bool cond, const char* what) {
  if (!cond) mpk::fail(mpk::ErrorCode::InvalidArgument, what);
}

}  // namespace

extern "C" {

const char* mpk_version(void) { return "0.1.0"; }

const char* mpk_status_name(mpk_status s) {
  switch (s) {
    case MPK_OK: return "ok";
    case MPK_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MPK_ERR_NOT_SYMPLECTIC: return "not_symplectic";
    case MPK_ERR_NON_SYMMETRIC: return "non_symmetric_input";
    case MPK_ERR_SINGULAR: return "singular_input";
    case MPK_ERR_DIMENSION_COLLAPSE: return "dimension_collapse";
    case MPK_ERR_DEGENERATE_GEOMETRY: return "degenerate_geometry";
    case MPK_ERR_ILL_CONDITIONED: return "ill_conditioned_split";
    case MPK_ERR_GRID_MISMATCH: return "grid_mismatch";
    case MPK_ERR_CONDITIONS_VIOLATED: return "conditions_violated";
    case MPK_ERR_FREE_BLOCK: return "free_block";
    case MPK_ERR_INSUFFICIENT_SUPPORT: return "insufficient_support";
    case MPK_ERR_DEGENERATE_TIME: return "degenerate_time";
    case MPK_ERR_CONDITIONING_GUARD: return "conditioning_guard";
    case MPK_ERR_NON_ISOTROPIC: return "non_isotropic";
    case MPK_ERR_IO: return "io";
    case MPK_ERR_UNKNOWN: break;
  }
  return "unknown";
}

const char* mpk_last_error_message(void) { return g_last_error.c_str(); }

int mpk_warning_count(void) { return static_cast<int>(g_warnings.size()); }

const char* mpk_warning_message(int index) {
  if (index < 0 || index >= static_cast<int>(g_warnings.size())) return "";
  return g_warnings[static_cast<size_t>(index)].c_str();
}

void mpk_clear_warnings(void) { g_warnings.clear(); }

void mpk_string_free(char* s) { std::free(s); }

/* ---- symplectic ------------------------------------------------------------ */

mpk_status mpk_symplectic_create(int d, const double* entries, double tau_symp,
                                 mpk_symplectic** out) {
  return guard([&] {
    require(d >= 1 && entries && out, "bad arguments");
    double tau = tau_symp > 0 ? tau_symp : mpk::kDefaultTauSymp;
    *out = new mpk_symplectic{
        mpk::SymplecticMatrix(to_matrix(entries, 2 * d, 2 * d), tau)};
  });
}

void mpk_symplectic_free(mpk_symplectic* s) { delete s; }

int mpk_symplectic_dim(const mpk_symplectic* s) { return s ? s->m.dim() : 0; }

mpk_status mpk_symplectic_entries(const mpk_symplectic* s, double* out) {
  return guard([&] {
    require(s && out, "bad arguments");
    from_matrix(s->m.entries(), out);
  });
}

mpk_status mpk_symplectic_blocks(const mpk_symplectic* s, double* a, double* b,
                                 double* c, double* d_blk) {
  return guard([&] {
    require(s != nullptr, "null handle");
    from_matrix(s->m.a(), a);
    from_matrix(s->m.b(), b);
    from_matrix(s->m.c(), c);
    from_matrix(s->m.d_block(), d_blk);
  });
}

double mpk_symplectic_residual(const mpk_symplectic* s) {
  return s ? s->m.symplectic_residual() : -1.0;
}

mpk_status mpk_generator_j(int d, mpk_symplectic** out) {
  return guard([&] {
    require(d >= 1 && out, "bad arguments");
    *out = new mpk_symplectic{mpk::make_j(d)};
  });
}

mpk_status mpk_generator_chirp(int d, const double* q, mpk_symplectic** out) {
  return guard([&] {
    require(d >= 1 && q && out, "bad arguments");
    *out = new mpk_symplectic{mpk::make_vq(to_matrix(q, d, d))};
  });
}

mpk_status mpk_generator_rescale(int d, const double* e, mpk_symplectic** out) {
  return guard([&] {
    require(d >= 1 && e && out, "bad arguments");
    *out = new mpk_symplectic{mpk::make_de(to_matrix(e, d, d))};
  });
}

mpk_status mpk_generator_multiplier(int d, const double* p,
                                    mpk_symplectic** out) {
  return guard([&] {
    require(d >= 1 && p && out, "bad arguments");
    *out = new mpk_symplectic{mpk::make_up(to_matrix(p, d, d))};
  });
}

mpk_status mpk_generator_frft(int d, const double* theta, mpk_symplectic** out) {
  return guard([&] {
    require(d >= 1 && theta && out, "bad arguments");
    mpk::Vector th(d);
    for (int i = 0; i < d; ++i) th(i) = theta[i];
    *out = new mpk_symplectic{mpk::make_frft(th)};
  });
}

mpk_status mpk_generator_tensor(const mpk_symplectic* s1,
                                const mpk_symplectic* s2,
                                mpk_symplectic** out) {
  return guard([&] {
    require(s1 && s2 && out, "bad arguments");
    *out = new mpk_symplectic{mpk::make_tensor(s1->m, s2->m)};
  });
}

mpk_status mpk_symplectic_multiply(const mpk_symplectic* x,
                                   const mpk_symplectic* y,
                                   mpk_symplectic** out) {
  return guard([&] {
    require(x && y && out, "bad arguments");
    *out = new mpk_symplectic{x->m * y->m};
  });
}

mpk_status mpk_symplectic_inverse(const mpk_symplectic* s,
                                  mpk_symplectic** out) {
  return guard([&] {
    require(s && out, "bad arguments");
    *out = new mpk_symplectic{s->m.inverse()};
  });
}

mpk_status mpk_symplectic_rank_b(const mpk_symplectic* s, double tol,
                                 int* rank) {
  return guard([&] {
    require(s && rank, "bad arguments");
    *rank = mpk::analyze_b(s->m, tol).rank;
  });
}

mpk_status mpk_symplectic_mu(const mpk_symplectic* s, double tol, double* mu) {
  return guard([&] {
    require(s && mu, "bad arguments");
    *mu = mpk::mu_s(s->m, tol);
  });
}

mpk_status mpk_symplectic_subspaces(const mpk_symplectic* s, double tol,
                                    double* ker_perp, double* ker,
                                    double* range, double* range_perp,
                                    int* rank) {
  return guard([&] {
    require(s != nullptr, "null handle");
    mpk::SymplecticGeometry g = mpk::analyze_b(s->m, tol);
    const int d = s->m.dim();
    auto write_padded = [&](const mpk::Matrix& basis, double* out) {
      if (!out) return;
      mpk::Matrix padded = mpk::Matrix::Zero(d, d);
      padded.leftCols(basis.cols()) = basis;
      from_matrix(padded, out);
    };
    write_padded(g.b_spaces.ker_perp.basis, ker_perp);
    write_padded(g.b_spaces.ker.basis, ker);
    write_padded(g.b_spaces.range.basis, range);
    write_padded(g.b_spaces.range_perp.basis, range_perp);
    if (rank) *rank = g.rank;
  });
}

mpk_status mpk_symplectic_decompose_output(const mpk_symplectic* s,
                                           const double* xi, double* xi1,
                                           double* xi2) {
  return guard([&] {
    require(s && xi && xi1 && xi2, "bad arguments");
    const int d = s->m.dim();
    mpk::Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = xi[i];
    mpk::ObliqueSplit split = mpk::decompose_output(s->m, v);
    for (int i = 0; i < d; ++i) {
      xi1[i] = split.part1(i);
      xi2[i] = split.part2(i);
    }
  });
}

mpk_status mpk_symplectic_decompose_input(const mpk_symplectic* s,
                                          const double* x, double* x1,
                                          double* x2) {
  return guard([&] {
    require(s && x && x1 && x2, "bad arguments");
    const int d = s->m.dim();
    mpk::Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = x[i];
    mpk::ObliqueSplit split = mpk::decompose_input(s->m, v);
    for (int i = 0; i < d; ++i) {
      x1[i] = split.part1(i);
      x2[i] = split.part2(i);
    }
  });
}

mpk_status mpk_symplectic_block_relations(const mpk_symplectic* s,
                                          double* residuals, int* satisfied,
                                          double* min_singular) {
  return guard([&] {
    require(s != nullptr, "null handle");
    auto reports = mpk::verify_block_relations(s->m);
    for (int i = 0; i < 8; ++i) {
      if (residuals) residuals[i] = reports[static_cast<size_t>(i)].residual;
      if (satisfied) satisfied[i] = reports[static_cast<size_t>(i)].satisfied;
      if (min_singular)
        min_singular[i] = reports[static_cast<size_t>(i)].min_singular;
    }
  });
}

mpk_status mpk_symplectic_save_csv(const mpk_symplectic* s, const char* path) {
  return guard([&] {
    require(s && path, "bad arguments");
    mpk::save_csv(s->m, path);
  });
}

mpk_status mpk_symplectic_load_csv(const char* path, double tau_symp,
                                   mpk_symplectic** out) {
  return guard([&] {
    require(path && out, "bad arguments");
    double tau = tau_symp > 0 ? tau_symp : mpk::kDefaultTauSymp;
    *out = new mpk_symplectic{mpk::load_symplectic_csv(path, tau)};
  });
}

mpk_status mpk_symplectic_save_json(const mpk_symplectic* s, const char* path) {
  return guard([&] {
    require(s && path, "bad arguments");
    mpk::save_json(s->m, path);
  });
}

mpk_status mpk_symplectic_load_json(const char* path, double tau_symp,
                                    mpk_symplectic** out) {
  return guard([&] {
    require(path && out, "bad arguments");
    double tau = tau_symp > 0 ? tau_symp : mpk::kDefaultTauSymp;
    *out = new mpk_symplectic{mpk::load_symplectic_json(path, tau)};
  });
}

/* ---- matrix helpers --------------------------------------------------------- */

mpk_status mpk_pseudo_inverse(int d, const double* m, double tol, double* out) {
  return guard([&] {
    require(d >= 1 && m && out, "bad arguments");
    mpk::Matrix in = to_matrix(m, d, d);
    double use = tol > 0 ? tol : std::max(mpk::default_rank_tol(in), 1e-15);
    from_matrix(mpk::pseudo_inverse(in, use), out);
  });
}

mpk_status mpk_simplex_volume(int d, int r, const double* basis,
                              const double* e, double* out) {
  return guard([&] {
    require(d >= 1 && r >= 0 && e && out && (r == 0 || basis),
            "bad arguments");
    mpk::SubspaceBasis sb;
    sb.ambient_dim = d;
    sb.rank = r;
    sb.basis = r > 0 ? to_matrix(basis, d, r) : mpk::Matrix::Zero(d, 0);
    sb.tol = 1e-12;
    *out = mpk::simplex_volume(sb, to_matrix(e, d, d));
  });
}

/* ---- grids ------------------------------------------------------------------ */

mpk_status mpk_grid_create(int dim, int n, double half_extent,
                           const double* data, mpk_grid** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    mpk::GridFunction g(dim, n, half_extent);
    if (data) {
      for (std::int64_t i = 0; i < g.size(); ++i)
        g.samples()[static_cast<size_t>(i)] =
            mpk::Complex(data[2 * i], data[2 * i + 1]);
    }
    *out = new mpk_grid{std::move(g)};
  });
}

void mpk_grid_free(mpk_grid* g) { delete g; }

int mpk_grid_dim(const mpk_grid* g) { return g ? g->g.dim() : 0; }
int mpk_grid_n(const mpk_grid* g) { return g ? g->g.n() : 0; }
double mpk_grid_half_extent(const mpk_grid* g) {
  return g ? g->g.half_extent() : 0.0;
}
int64_t mpk_grid_size(const mpk_grid* g) { return g ? g->g.size() : 0; }

mpk_status mpk_grid_copy_data(const mpk_grid* g, double* out) {
  return guard([&] {
    require(g && out, "bad arguments");
    for (std::int64_t i = 0; i < g->g.size(); ++i) {
      out[2 * i] = g->g.samples()[static_cast<size_t>(i)].real();
      out[2 * i + 1] = g->g.samples()[static_cast<size_t>(i)].imag();
    }
  });
}

double mpk_grid_norm(const mpk_grid* g) { return g ? g->g.norm_l2() : 0.0; }

mpk_status mpk_grid_save(const mpk_grid* g, const char* path) {
  return guard([&] {
    require(g && path, "bad arguments");
    g->g.save(path);
  });
}

mpk_status mpk_grid_load(const char* path, mpk_grid** out) {
  return guard([&] {
    require(path && out, "bad arguments");
    *out = new mpk_grid{mpk::GridFunction::load(path)};
  });
}

mpk_status mpk_grid_save_csv(const mpk_grid* g, const char* path) {
  return guard([&] {
    require(g && path, "bad arguments");
    g->g.save_csv(path);
  });
}

mpk_status mpk_fourier(const mpk_grid* f, int sign, mpk_grid** out) {
  return guard([&] {
    require(f && out, "bad arguments");
    *out = new mpk_grid{mpk::fourier_transform(f->g, sign)};
  });
}

mpk_status mpk_chirp_multiply(const mpk_grid* f, const double* q,
                              mpk_grid** out) {
  return guard([&] {
    require(f && q && out, "bad arguments");
    mpk::WarningSink sink;
    *out = new mpk_grid{
        mpk::chirp_multiply(f->g, to_matrix(q, f->g.dim(), f->g.dim()), &sink)};
    collect_warnings(sink);
  });
}

mpk_status mpk_rescale(const mpk_grid* f, const double* e, mpk_grid** out) {
  return guard([&] {
    require(f && e && out, "bad arguments");
    mpk::WarningSink sink;
    *out = new mpk_grid{
        mpk::rescale(f->g, to_matrix(e, f->g.dim(), f->g.dim()), &sink)};
    collect_warnings(sink);
  });
}

mpk_status mpk_multiplier(const mpk_grid* f, const double* p, mpk_grid** out) {
  return guard([&] {
    require(f && p && out, "bad arguments");
    mpk::WarningSink sink;
    *out = new mpk_grid{
        mpk::multiplier(f->g, to_matrix(p, f->g.dim(), f->g.dim()), &sink)};
    collect_warnings(sink);
  });
}

mpk_status mpk_apply_metaplectic(const mpk_symplectic* s, const mpk_grid* f,
                                 mpk_grid** out) {
  return guard([&] {
    require(s && f && out, "bad arguments");
    mpk::WarningSink sink;
    *out = new mpk_grid{mpk::apply_metaplectic(s->m, f->g, &sink)};
    collect_warnings(sink);
  });
}

mpk_status mpk_wigner(const mpk_grid* f, const mpk_grid* g,
                      mpk_phase_space** out) {
  return guard([&] {
    require(f && out, "bad arguments");
    const mpk::GridFunction& second = g ? g->g : f->g;
    *out = new mpk_phase_space{mpk::wigner(f->g, second)};
  });
}

void mpk_phase_space_free(mpk_phase_space* w) { delete w; }

int mpk_phase_space_nx(const mpk_phase_space* w) { return w ? w->w.n_x : 0; }
int mpk_phase_space_nxi(const mpk_phase_space* w) { return w ? w->w.n_xi : 0; }
double mpk_phase_space_lx(const mpk_phase_space* w) {
  return w ? w->w.l_x : 0.0;
}
double mpk_phase_space_lxi(const mpk_phase_space* w) {
  return w ? w->w.l_xi : 0.0;
}

mpk_status mpk_phase_space_copy_data(const mpk_phase_space* w, double* out) {
  return guard([&] {
    require(w && out, "bad arguments");
    for (size_t i = 0; i < w->w.samples.size(); ++i) {
      out[2 * i] = w->w.samples[i].real();
      out[2 * i + 1] = w->w.samples[i].imag();
    }
  });
}

mpk_status mpk_phase_space_save_csv(const mpk_phase_space* w,
                                    const char* path) {
  return guard([&] {
    require(w && path, "bad arguments");
    w->w.save_csv(path);
  });
}

mpk_status mpk_check_covariance(const mpk_symplectic* s, const mpk_grid* f,
                                int probes_per_axis, double* discrepancy) {
  return guard([&] {
    require(s && f && discrepancy, "bad arguments");
    mpk::WarningSink sink;
    *discrepancy = mpk::check_covariance(s->m, f->g, probes_per_axis, &sink);
    collect_warnings(sink);
  });
}

/* ---- Hardy ------------------------------------------------------------------- */

mpk_status mpk_check_conditions(const double* m, const double* n,
                                const mpk_symplectic* s, double tol, int* ok,
                                double* ker_residual, double* range_residual) {
  return guard([&] {
    require(m && n && s, "bad arguments");
    const int d = s->m.dim();
    mpk::ConditionsReport rep = mpk::check_conditions(
        to_matrix(m, d, d), to_matrix(n, d, d), s->m, tol > 0 ? tol : 1e-8);
    if (ok) *ok = rep.ok;
    if (ker_residual) *ker_residual = rep.ker_residual;
    if (range_residual) *range_residual = rep.range_residual;
  });
}

mpk_status mpk_hardy_eigenvalues(const double* m, const double* n,
                                 const mpk_symplectic* s, double* eigenvalues,
                                 int* count) {
  return guard([&] {
    require(m && n && s && eigenvalues && count, "bad arguments");
    const int d = s->m.dim();
    mpk::Vector ev =
        mpk::hardy_eigenvalues(to_matrix(m, d, d), to_matrix(n, d, d), s->m);
    *count = static_cast<int>(ev.size());
    for (int i = 0; i < ev.size(); ++i) eigenvalues[i] = ev(i);
  });
}

mpk_status mpk_hardy_classify(const double* m, const double* n,
                              const mpk_symplectic* s, double tau_eig,
                              mpk_verdict** out) {
  return guard([&] {
    require(m && n && s && out, "bad arguments");
    const int d = s->m.dim();
    mpk::DecayCertificate cert(to_matrix(m, d, d), to_matrix(n, d, d));
    *out = new mpk_verdict{
        mpk::classify(cert, s->m, tau_eig > 0 ? tau_eig : mpk::kDefaultTauEig)};
  });
}

void mpk_verdict_free(mpk_verdict* v) { delete v; }

mpk_hardy_status mpk_verdict_status(const mpk_verdict* v) {
  if (!v) return MPK_HARDY_CONDITIONS_VIOLATED;
  switch (v->v.status) {
    case mpk::HardyStatus::Vanishing: return MPK_HARDY_VANISHING;
    case mpk::HardyStatus::Extremal: return MPK_HARDY_EXTREMAL;
    case mpk::HardyStatus::Admissible: return MPK_HARDY_ADMISSIBLE;
    case mpk::HardyStatus::ConditionsViolated:
      return MPK_HARDY_CONDITIONS_VIOLATED;
    case mpk::HardyStatus::DegenerateTime: return MPK_HARDY_DEGENERATE_TIME;
  }
  return MPK_HARDY_CONDITIONS_VIOLATED;
}

double mpk_verdict_max_eigenvalue(const mpk_verdict* v) {
  return v ? v->v.max_eigenvalue : 0.0;
}

int mpk_verdict_eigenvalue_count(const mpk_verdict* v) {
  return v ? static_cast<int>(v->v.eigenvalues.size()) : 0;
}

mpk_status mpk_verdict_eigenvalues(const mpk_verdict* v, double* out) {
  return guard([&] {
    require(v && out, "bad arguments");
    for (int i = 0; i < v->v.eigenvalues.size(); ++i)
      out[i] = v->v.eigenvalues(i);
  });
}

char* mpk_verdict_to_json(const mpk_verdict* v) {
  if (!v) return nullptr;
  std::string j = v->v.to_json();
  char* s = static_cast<char*>(std::malloc(j.size() + 1));
  if (s) std::memcpy(s, j.c_str(), j.size() + 1);
  return s;
}

mpk_status mpk_extremal_function(const mpk_symplectic* s, const double* m,
                                 mpk_gamma_fn gamma, void* user, int n,
                                 double half_extent, mpk_grid** out) {
  return guard([&] {
    require(s && m && out, "bad arguments");
    const int d = s->m.dim();
    auto gamma_fn = [&](const mpk::Vector& c) -> mpk::Complex {
      if (!gamma) return mpk::Complex(std::exp(-M_PI * c.squaredNorm()), 0.0);
      double re = 0, im = 0;
      gamma(c.data(), static_cast<int>(c.size()), &re, &im, user);
      return mpk::Complex(re, im);
    };
    *out = new mpk_grid{mpk::extremal_function(s->m, to_matrix(m, d, d),
                                               gamma_fn, n, half_extent)};
  });
}

mpk_status mpk_fit_gaussian_decay(const mpk_grid* f, int r, const double* basis,
                                  double* m_fit, double* residual,
                                  int* non_gaussian) {
  return guard([&] {
    require(f && basis && m_fit && r >= 1, "bad arguments");
    mpk::SubspaceBasis sb;
    sb.ambient_dim = f->g.dim();
    sb.rank = r;
    sb.basis = to_matrix(basis, f->g.dim(), r);
    sb.tol = 1e-12;
    mpk::GaussianFit fit = mpk::fit_gaussian_decay(f->g, sb);
    from_matrix(fit.m_fit, m_fit);
    if (residual) *residual = fit.residual;
    if (non_gaussian) *non_gaussian = fit.non_gaussian;
  });
}

mpk_status mpk_sharpness_witness(const mpk_symplectic* s, double k_halfwidth,
                                 int n, double half_extent, mpk_grid** f,
                                 mpk_grid** sf, double* outside_mass_fraction) {
  return guard([&] {
    require(s != nullptr, "null handle");
    mpk::WarningSink sink;
    mpk::SharpnessReport rep =
        mpk::sharpness_witness(s->m, k_halfwidth, n, half_extent, -1.0, &sink);
    collect_warnings(sink);
    if (f) *f = new mpk_grid{std::move(rep.f)};
    if (sf) *sf = new mpk_grid{std::move(rep.sf)};
    if (outside_mass_fraction)
      *outside_mass_fraction = rep.outside_mass_fraction;
  });
}

/* ---- Hamiltonians -------------------------------------------------------------- */

mpk_status mpk_hamiltonian_create(int d, const double* mcal,
                                  mpk_hamiltonian** out) {
  return guard([&] {
    require(d >= 1 && mcal && out, "bad arguments");
    *out = new mpk_hamiltonian{
        mpk::QuadraticHamiltonian(d, to_matrix(mcal, 2 * d, 2 * d))};
  });
}

mpk_status mpk_hamiltonian_anisotropic_2d(mpk_hamiltonian** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = new mpk_hamiltonian{mpk::anisotropic_oscillator_2d()};
  });
}

mpk_status mpk_hamiltonian_harmonic(int d, const double* omega, double mass,
                                    double hbar, mpk_hamiltonian** out) {
  return guard([&] {
    require(d >= 1 && omega && out, "bad arguments");
    mpk::Vector om(d);
    for (int i = 0; i < d; ++i) om(i) = omega[i];
    double hb = hbar > 0 ? hbar : mpk::kDefaultHbar;
    *out = new mpk_hamiltonian{mpk::harmonic_oscillator(om, mass, hb)};
  });
}

mpk_status mpk_hamiltonian_load_json(const char* path, mpk_hamiltonian** out) {
  return guard([&] {
    require(path && out, "bad arguments");
    *out = new mpk_hamiltonian{mpk::QuadraticHamiltonian::from_json_file(path)};
  });
}

void mpk_hamiltonian_free(mpk_hamiltonian* h) { delete h; }

int mpk_hamiltonian_dim(const mpk_hamiltonian* h) { return h ? h->h.dim() : 0; }

mpk_status mpk_hamiltonian_mcal(const mpk_hamiltonian* h, double* out) {
  return guard([&] {
    require(h && out, "bad arguments");
    from_matrix(h->h.mcal(), out);
  });
}

mpk_status mpk_flow(const mpk_hamiltonian* h, double t, mpk_symplectic** out) {
  return guard([&] {
    require(h && out, "bad arguments");
    *out = new mpk_symplectic{mpk::flow(h->h, t).s};
  });
}

mpk_status mpk_oscillator_blocks(int d, const double* omega, double mass,
                                 double t, double* a, double* b, double* c,
                                 double* d_blk) {
  return guard([&] {
    require(d >= 1 && omega, "bad arguments");
    mpk::Vector om(d);
    for (int i = 0; i < d; ++i) om(i) = omega[i];
    mpk::Matrix ma, mb, mc, md;
    mpk::oscillator_blocks(om, mass, t, &ma, &mb, &mc, &md);
    from_matrix(ma, a);
    from_matrix(mb, b);
    from_matrix(mc, c);
    from_matrix(md, d_blk);
  });
}

mpk_status mpk_propagate(const mpk_grid* u0, const mpk_hamiltonian* h, double t,
                         mpk_grid** out) {
  return guard([&] {
    require(u0 && h && out, "bad arguments");
    mpk::WarningSink sink;
    *out = new mpk_grid{mpk::propagate(u0->g, h->h, t, &sink)};
    collect_warnings(sink);
  });
}

mpk_status mpk_dynamical_hardy(const double* m, const double* n,
                               const mpk_hamiltonian* h, double t1,
                               double tau_eig, mpk_verdict** out) {
  return guard([&] {
    require(m && n && h && out, "bad arguments");
    const int d = h->h.dim();
    mpk::DecayCertificate cert(to_matrix(m, d, d), to_matrix(n, d, d));
    *out = new mpk_verdict{mpk::dynamical_hardy_check(
        cert, h->h, t1, tau_eig > 0 ? tau_eig : mpk::kDefaultTauEig)};
  });
}

mpk_status mpk_knutsen_comparison(const double* m, const double* n,
                                  const mpk_hamiltonian* h, double t1,
                                  mpk_knutsen_report* out) {
  return guard([&] {
    require(m && n && h && out, "bad arguments");
    const int d = h->h.dim();
    mpk::DecayCertificate cert(to_matrix(m, d, d), to_matrix(n, d, d));
    mpk::KnutsenReport rep = mpk::knutsen_comparison(cert, h->h, t1);
    out->a = rep.a;
    out->b = rep.b;
    out->sigma_max_b = rep.sigma_max_b;
    out->operator_norm_value = rep.operator_norm_value;
    out->operator_norm_fires = rep.operator_norm_fires;
    out->max_lambda = rep.max_lambda;
    out->spectrum_fires = rep.spectrum_fires;
    out->agree = rep.agree;
    out->binding_axis = rep.binding_axis;
  });
}

}  // extern "C"
