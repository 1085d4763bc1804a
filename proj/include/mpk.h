/* mpk — metaplectic operator calculus, C API.
 *
 * Shared-library surface over the C++ core: opaque handles, status codes,
 * caller-owned plain buffers. All matrices are row-major double arrays;
 * complex grids are interleaved (re, im) pairs. Functions return MPK_OK on
 * success; on failure the handle outputs are untouched and
 * mpk_last_error_message() describes the problem (thread-local).
 */
#ifndef MPK_H
#define MPK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MPK_API __declspec(dllexport)
#else
#define MPK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mpk_status {
  MPK_OK = 0,
  MPK_ERR_INVALID_ARGUMENT,
  MPK_ERR_NOT_SYMPLECTIC,
  MPK_ERR_NON_SYMMETRIC,
  MPK_ERR_SINGULAR,
  MPK_ERR_DIMENSION_COLLAPSE,
  MPK_ERR_DEGENERATE_GEOMETRY,
  MPK_ERR_ILL_CONDITIONED,
  MPK_ERR_GRID_MISMATCH,
  MPK_ERR_CONDITIONS_VIOLATED,
  MPK_ERR_FREE_BLOCK,
  MPK_ERR_INSUFFICIENT_SUPPORT,
  MPK_ERR_DEGENERATE_TIME,
  MPK_ERR_CONDITIONING_GUARD,
  MPK_ERR_NON_ISOTROPIC,
  MPK_ERR_IO,
  MPK_ERR_UNKNOWN
} mpk_status;

typedef struct mpk_symplectic mpk_symplectic;
typedef struct mpk_grid mpk_grid;
typedef struct mpk_phase_space mpk_phase_space;
typedef struct mpk_verdict mpk_verdict;
typedef struct mpk_hamiltonian mpk_hamiltonian;

MPK_API const char* mpk_version(void);
MPK_API const char* mpk_status_name(mpk_status s);
/* Detail message for the last failing call on this thread. */
MPK_API const char* mpk_last_error_message(void);

/* Non-fatal numerical warnings (alias risk etc.) accumulated per thread. */
MPK_API int mpk_warning_count(void);
MPK_API const char* mpk_warning_message(int index);
MPK_API void mpk_clear_warnings(void);

MPK_API void mpk_string_free(char* s);

/* ---- symplectic matrices -------------------------------------------------- */

/* entries: (2d)^2 doubles, row-major. tau_symp <= 0 picks the default 1e-9. */
MPK_API mpk_status mpk_symplectic_create(int d, const double* entries,
                                         double tau_symp, mpk_symplectic** out);
MPK_API void mpk_symplectic_free(mpk_symplectic* s);
MPK_API int mpk_symplectic_dim(const mpk_symplectic* s);
MPK_API mpk_status mpk_symplectic_entries(const mpk_symplectic* s, double* out);
/* Each block buffer holds d*d doubles; pass NULL to skip a block. */
MPK_API mpk_status mpk_symplectic_blocks(const mpk_symplectic* s, double* a,
                                         double* b, double* c, double* d_blk);
MPK_API double mpk_symplectic_residual(const mpk_symplectic* s);

MPK_API mpk_status mpk_generator_j(int d, mpk_symplectic** out);
MPK_API mpk_status mpk_generator_chirp(int d, const double* q,
                                       mpk_symplectic** out);
MPK_API mpk_status mpk_generator_rescale(int d, const double* e,
                                         mpk_symplectic** out);
MPK_API mpk_status mpk_generator_multiplier(int d, const double* p,
                                            mpk_symplectic** out);
MPK_API mpk_status mpk_generator_frft(int d, const double* theta,
                                      mpk_symplectic** out);
MPK_API mpk_status mpk_generator_tensor(const mpk_symplectic* s1,
                                        const mpk_symplectic* s2,
                                        mpk_symplectic** out);

MPK_API mpk_status mpk_symplectic_multiply(const mpk_symplectic* x,
                                           const mpk_symplectic* y,
                                           mpk_symplectic** out);
MPK_API mpk_status mpk_symplectic_inverse(const mpk_symplectic* s,
                                          mpk_symplectic** out);

/* rank of B at the given tolerance (tol <= 0: default d*sigma_max*1e-12). */
MPK_API mpk_status mpk_symplectic_rank_b(const mpk_symplectic* s, double tol,
                                         int* rank);
MPK_API mpk_status mpk_symplectic_mu(const mpk_symplectic* s, double tol,
                                     double* mu);
/* Orthonormal bases from the SVD of B, written row-major into d*d buffers
 * (only the leading columns are meaningful: r for ker_perp/range, d-r for
 * ker/range_perp). Buffers may be NULL. *rank receives r. */
MPK_API mpk_status mpk_symplectic_subspaces(const mpk_symplectic* s, double tol,
                                            double* ker_perp, double* ker,
                                            double* range, double* range_perp,
                                            int* rank);
MPK_API mpk_status mpk_symplectic_decompose_output(const mpk_symplectic* s,
                                                   const double* xi,
                                                   double* xi1, double* xi2);
MPK_API mpk_status mpk_symplectic_decompose_input(const mpk_symplectic* s,
                                                  const double* x, double* x1,
                                                  double* x2);
/* residuals, satisfied, min_singular: arrays of 8 (rows i..viii). */
MPK_API mpk_status mpk_symplectic_block_relations(const mpk_symplectic* s,
                                                  double* residuals,
                                                  int* satisfied,
                                                  double* min_singular);

MPK_API mpk_status mpk_symplectic_save_csv(const mpk_symplectic* s,
                                           const char* path);
MPK_API mpk_status mpk_symplectic_load_csv(const char* path, double tau_symp,
                                           mpk_symplectic** out);
MPK_API mpk_status mpk_symplectic_save_json(const mpk_symplectic* s,
                                            const char* path);
MPK_API mpk_status mpk_symplectic_load_json(const char* path, double tau_symp,
                                            mpk_symplectic** out);

/* ---- free-standing matrix helpers ----------------------------------------- */

/* Moore-Penrose inverse of a d x d matrix (SVD truncation at tol;
 * tol <= 0 picks the default). */
MPK_API mpk_status mpk_pseudo_inverse(int d, const double* m, double tol,
                                      double* out);
/* Gram volume of E applied to a subspace with orthonormal basis (d x r,
 * column-major columns). */
MPK_API mpk_status mpk_simplex_volume(int d, int r, const double* basis,
                                      const double* e, double* out);

/* ---- grid functions -------------------------------------------------------- */

/* data: n^d interleaved complex pairs or NULL for zeros. */
MPK_API mpk_status mpk_grid_create(int dim, int n, double half_extent,
                                   const double* data, mpk_grid** out);
MPK_API void mpk_grid_free(mpk_grid* g);
MPK_API int mpk_grid_dim(const mpk_grid* g);
MPK_API int mpk_grid_n(const mpk_grid* g);
MPK_API double mpk_grid_half_extent(const mpk_grid* g);
MPK_API int64_t mpk_grid_size(const mpk_grid* g);
MPK_API mpk_status mpk_grid_copy_data(const mpk_grid* g, double* out);
MPK_API double mpk_grid_norm(const mpk_grid* g);
MPK_API mpk_status mpk_grid_save(const mpk_grid* g, const char* path);
MPK_API mpk_status mpk_grid_load(const char* path, mpk_grid** out);
MPK_API mpk_status mpk_grid_save_csv(const mpk_grid* g, const char* path);

MPK_API mpk_status mpk_fourier(const mpk_grid* f, int sign, mpk_grid** out);
MPK_API mpk_status mpk_chirp_multiply(const mpk_grid* f, const double* q,
                                      mpk_grid** out);
MPK_API mpk_status mpk_rescale(const mpk_grid* f, const double* e,
                               mpk_grid** out);
MPK_API mpk_status mpk_multiplier(const mpk_grid* f, const double* p,
                                  mpk_grid** out);
MPK_API mpk_status mpk_apply_metaplectic(const mpk_symplectic* s,
                                         const mpk_grid* f, mpk_grid** out);

MPK_API mpk_status mpk_wigner(const mpk_grid* f, const mpk_grid* g,
                              mpk_phase_space** out);
MPK_API void mpk_phase_space_free(mpk_phase_space* w);
MPK_API int mpk_phase_space_nx(const mpk_phase_space* w);
MPK_API int mpk_phase_space_nxi(const mpk_phase_space* w);
MPK_API double mpk_phase_space_lx(const mpk_phase_space* w);
MPK_API double mpk_phase_space_lxi(const mpk_phase_space* w);
MPK_API mpk_status mpk_phase_space_copy_data(const mpk_phase_space* w,
                                             double* out);
MPK_API mpk_status mpk_phase_space_save_csv(const mpk_phase_space* w,
                                            const char* path);

/* probes_per_axis <= 0 picks a dimension-dependent default. */
MPK_API mpk_status mpk_check_covariance(const mpk_symplectic* s,
                                        const mpk_grid* f, int probes_per_axis,
                                        double* discrepancy);

/* ---- Hardy analysis --------------------------------------------------------- */

typedef enum mpk_hardy_status {
  MPK_HARDY_VANISHING = 0,
  MPK_HARDY_EXTREMAL,
  MPK_HARDY_ADMISSIBLE,
  MPK_HARDY_CONDITIONS_VIOLATED,
  MPK_HARDY_DEGENERATE_TIME
} mpk_hardy_status;

MPK_API mpk_status mpk_check_conditions(const double* m, const double* n,
                                        const mpk_symplectic* s, double tol,
                                        int* ok, double* ker_residual,
                                        double* range_residual);
/* eigenvalues: buffer of at least d doubles; *count receives r. */
MPK_API mpk_status mpk_hardy_eigenvalues(const double* m, const double* n,
                                         const mpk_symplectic* s,
                                         double* eigenvalues, int* count);
MPK_API mpk_status mpk_hardy_classify(const double* m, const double* n,
                                      const mpk_symplectic* s, double tau_eig,
                                      mpk_verdict** out);
MPK_API void mpk_verdict_free(mpk_verdict* v);
MPK_API mpk_hardy_status mpk_verdict_status(const mpk_verdict* v);
MPK_API double mpk_verdict_max_eigenvalue(const mpk_verdict* v);
MPK_API int mpk_verdict_eigenvalue_count(const mpk_verdict* v);
MPK_API mpk_status mpk_verdict_eigenvalues(const mpk_verdict* v, double* out);
/* Allocated JSON string; free with mpk_string_free. */
MPK_API char* mpk_verdict_to_json(const mpk_verdict* v);

/* gamma: callback for the fiber function on ker(B) coordinates
 * (dimension d - rank(B)); NULL means a unit Gaussian. */
typedef void (*mpk_gamma_fn)(const double* coords, int dim, double* re,
                             double* im, void* user);
MPK_API mpk_status mpk_extremal_function(const mpk_symplectic* s,
                                         const double* m, mpk_gamma_fn gamma,
                                         void* user, int n, double half_extent,
                                         mpk_grid** out);

/* basis: d x r orthonormal columns, row-major. m_fit: r*r doubles. */
MPK_API mpk_status mpk_fit_gaussian_decay(const mpk_grid* f, int r,
                                          const double* basis, double* m_fit,
                                          double* residual, int* non_gaussian);

MPK_API mpk_status mpk_sharpness_witness(const mpk_symplectic* s,
                                         double k_halfwidth, int n,
                                         double half_extent, mpk_grid** f,
                                         mpk_grid** sf,
                                         double* outside_mass_fraction);

/* ---- quadratic Hamiltonians -------------------------------------------------- */

MPK_API mpk_status mpk_hamiltonian_create(int d, const double* mcal,
                                          mpk_hamiltonian** out);
MPK_API mpk_status mpk_hamiltonian_anisotropic_2d(mpk_hamiltonian** out);
MPK_API mpk_status mpk_hamiltonian_harmonic(int d, const double* omega,
                                            double mass, double hbar,
                                            mpk_hamiltonian** out);
MPK_API mpk_status mpk_hamiltonian_load_json(const char* path,
                                             mpk_hamiltonian** out);
MPK_API void mpk_hamiltonian_free(mpk_hamiltonian* h);
MPK_API int mpk_hamiltonian_dim(const mpk_hamiltonian* h);
MPK_API mpk_status mpk_hamiltonian_mcal(const mpk_hamiltonian* h, double* out);

MPK_API mpk_status mpk_flow(const mpk_hamiltonian* h, double t,
                            mpk_symplectic** out);
/* Closed-form oscillator blocks at hbar = 1/(2 pi); buffers d*d each. */
MPK_API mpk_status mpk_oscillator_blocks(int d, const double* omega,
                                         double mass, double t, double* a,
                                         double* b, double* c, double* d_blk);
MPK_API mpk_status mpk_propagate(const mpk_grid* u0, const mpk_hamiltonian* h,
                                 double t, mpk_grid** out);
MPK_API mpk_status mpk_dynamical_hardy(const double* m, const double* n,
                                       const mpk_hamiltonian* h, double t1,
                                       double tau_eig, mpk_verdict** out);

typedef struct mpk_knutsen_report {
  double a;
  double b;
  double sigma_max_b;
  double operator_norm_value;
  int operator_norm_fires;
  double max_lambda;
  int spectrum_fires;
  int agree;
  int binding_axis;
} mpk_knutsen_report;

MPK_API mpk_status mpk_knutsen_comparison(const double* m, const double* n,
                                          const mpk_hamiltonian* h, double t1,
                                          mpk_knutsen_report* out);

#ifdef __cplusplus
}
#endif

#endif /* MPK_H */
