/* C interface to the canonical-system factorization library.
 *
 * Every fallible call returns a canon_status. On failure, canon_last_error()
 * holds a one-line reason for the calling thread until its next failing call.
 * Objects are opaque handles released with the matching *_free function;
 * passing NULL to a *_free function is a no-op. */
#ifndef CANON_CANON_H
#define CANON_CANON_H

#include <stddef.h>
#include <stdint.h>

#if defined(CANON_BUILDING_SHARED)
#define CANON_API __attribute__((visibility("default")))
#else
#define CANON_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum canon_status {
  CANON_OK = 0,
  CANON_ERR_INTERNAL = 1,
  CANON_ERR_PARSE = 2,
  CANON_ERR_DOMAIN = 3,
  CANON_ERR_CONVERGENCE = 4
} canon_status;

typedef struct canon_hamiltonian canon_hamiltonian;
typedef struct canon_weight canon_weight;
typedef struct canon_halfline canon_halfline;
typedef struct canon_factorization canon_factorization;

typedef struct canon_factor_report {
  double residual;
  double cond;
  double leakage;
  double oracle_deviation;
  double c1, c2;
  double eig_min, eig_max;
  int ill_conditioned;
} canon_factor_report;

typedef struct canon_isometry_report {
  double mu_norm2;
  double tail_estimate;
  double f_norm2;
  double residual;
} canon_isometry_report;

CANON_API const char* canon_version(void);
CANON_API const char* canon_last_error(void);
CANON_API const char* canon_status_name(canon_status s);

/* Shortest round-trip decimal form of x. Returns the length needed, excluding the terminator. */
CANON_API size_t canon_format_double(double x, char* buf, size_t len);

/* ---- Hamiltonians ---- */
CANON_API canon_status canon_hamiltonian_load(const char* path, canon_hamiltonian** out);
CANON_API canon_status canon_hamiltonian_save(const canon_hamiltonian* H, const char* path);
/* nodes has n + 1 entries; cells[i] = {h1, h, h2}. */
CANON_API canon_status canon_hamiltonian_from_cells(size_t n, const double* nodes, const double (*cells)[3],
                                                    int unimodular, canon_hamiltonian** out);
/* H = diag(c, 1/c) on [0, length], marked unimodular. */
CANON_API canon_status canon_hamiltonian_constant(double c, double length, size_t cells, canon_hamiltonian** out);
CANON_API size_t canon_hamiltonian_cell_count(const canon_hamiltonian* H);
/* out = {t_start, t_end, h1, h, h2} */
CANON_API canon_status canon_hamiltonian_cell(const canon_hamiltonian* H, size_t i, double out[5]);
CANON_API canon_status canon_hamiltonian_dual(const canon_hamiltonian* H, canon_hamiltonian** out);
CANON_API canon_status canon_hamiltonian_dilate(const canon_hamiltonian* H, double y, canon_hamiltonian** out);
CANON_API void canon_hamiltonian_free(canon_hamiltonian* H);

/* M(t, z) row-major as (re, im) pairs: out = {m11, m12, m21, m22}. */
CANON_API canon_status canon_transfer_matrix(const canon_hamiltonian* H, double t, double z_re, double z_im,
                                             double out[8]);
CANON_API canon_status canon_weyl_function(const canon_hamiltonian* H, double z_re, double z_im, double tol,
                                           int extend_tail, double out[2]);
CANON_API canon_status canon_spectral_density(const canon_hamiltonian* H, double x, double eps, int extend_tail,
                                              double* out);

/* ---- weights ---- */
/* "<name> key=value ...": constant c, step level half_width, cosine-bump amplitude half_width,
 * sinc2-bump amplitude bandwidth. */
CANON_API canon_status canon_weight_from_spec(const char* spec, canon_weight** out);
CANON_API canon_status canon_weight_load(const char* path, canon_weight** out);
/* Density samples w(x_i) of H written as a weight file. */
CANON_API canon_status canon_weight_sample_to_file(const canon_hamiltonian* H, double x_min, double x_max,
                                                   size_t count, double eps, int extend_tail, const char* path);
CANON_API canon_status canon_weight_truncate(const canon_weight* w, double j, canon_weight** out);
CANON_API canon_status canon_weight_eval(const canon_weight* w, double x, double* out);
CANON_API canon_status canon_weight_bounds(const canon_weight* w, double out[2]);
CANON_API void canon_weight_free(canon_weight* w);

CANON_API canon_status canon_szego_K(const canon_weight* w, double z_re, double z_im, double* out);
/* Hamiltonian on [0, R] with N cells whose spectral measure is w dx. cond may be NULL. */
CANON_API canon_status canon_inverse_spectral(const canon_weight* w, double R, size_t N, canon_hamiltonian** out,
                                              double* cond);

/* ---- half-line functions ---- */
CANON_API canon_status canon_halfline_load(const char* path, canon_halfline** out);
CANON_API canon_status canon_halfline_save(const canon_halfline* f, const char* path);
CANON_API void canon_halfline_free(canon_halfline* f);
CANON_API canon_status canon_a2_classical(const canon_halfline* f, int budget, double* out);
CANON_API canon_status canon_a2_ell1(const canon_halfline* f, double window_length, double window_offset,
                                     double* out);
CANON_API canon_status canon_norm_l1_l2(const canon_halfline* f, double* out);
/* norms = {||f1||_1, ||f2||_2, operational norm} */
CANON_API canon_status canon_decompose_l1_l2(const canon_halfline* f, canon_halfline** f1, canon_halfline** f2,
                                             double norms[3]);

/* ---- transform ---- */
/* F_mu f at count points; f is restricted to [0, r]. out holds (re, im) pairs. */
CANON_API canon_status canon_transform(const canon_hamiltonian* H, const canon_halfline* f, double r, size_t count,
                                       const double* z_re, const double* z_im, double* out);
CANON_API canon_status canon_isometry(const canon_hamiltonian* H, const canon_weight* w, const canon_halfline* f,
                                      double r, double X, canon_isometry_report* out);

/* ---- factorization ---- */
CANON_API canon_status canon_factorize(const canon_weight* w, double R, size_t N, canon_factorization** out);
CANON_API canon_status canon_factorization_report(const canon_factorization* F, canon_factor_report* out);
/* Either path may be NULL to skip that matrix. */
CANON_API canon_status canon_factorization_save(const canon_factorization* F, const char* a_path,
                                                const char* l_path);
CANON_API void canon_factorization_free(canon_factorization* F);

/* ---- acceptance ---- */
CANON_API int canon_acceptance_count(void);
/* Runs criterion id (1-based). line receives "PASS [id] name: detail" or "FAIL ...". */
CANON_API canon_status canon_acceptance_run(int id, uint64_t seed, int* passed, char* line, size_t line_len);

#ifdef __cplusplus
}
#endif

#endif
