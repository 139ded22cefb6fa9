#ifndef LOJ_LOJ_H
#define LOJ_LOJ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LOJ_API __declspec(dllexport)
#else
#define LOJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The input, dimension and numeric codes match the CLI exit codes. */
typedef enum loj_status {
  LOJ_OK = 0,
  LOJ_ERR_INPUT = 2,     /* parse error, argument out of domain */
  LOJ_ERR_DIMENSION = 3, /* variable counts or curve sizes disagree */
  LOJ_ERR_NUMERIC = 4,   /* non-finite objective, too few converged radii */
  LOJ_ERR_INTERNAL = 5
} loj_status;

typedef struct loj_poly loj_poly;
typedef struct loj_curve loj_curve;
typedef struct loj_config loj_config;

LOJ_API const char* loj_version(void);

/* Message of the last failed call on this thread; "" after a success. */
LOJ_API const char* loj_last_error(void);

/* Strings handed out through char** are owned by the caller. */
LOJ_API void loj_string_free(char* s);

/* ---- polynomials ---- */

/* vars: comma-separated names ("x,y,z"), or NULL to take the names used in
   the text (x, y, z first, then the rest in natural order). */
LOJ_API loj_status loj_poly_parse(const char* text, const char* vars, loj_poly** out);
LOJ_API loj_status loj_poly_family(int n, int q, loj_poly** out);
/* Family member with the x^{2n+1}y^{2q} coefficient replaced (negative control). */
LOJ_API loj_status loj_poly_family_mutated(int n, int q, int64_t middle, loj_poly** out);
LOJ_API void loj_poly_free(loj_poly* p);
LOJ_API size_t loj_poly_varcount(const loj_poly* p);
LOJ_API loj_status loj_poly_to_string(const loj_poly* p, char** out);
/* Comma-separated variable names. */
LOJ_API loj_status loj_poly_vars(const loj_poly* p, char** out);

/* ---- curves ---- */

LOJ_API loj_status loj_curve_parse(const char* text, size_t window, loj_curve** out);
LOJ_API loj_status loj_curve_psi(int n, int q, loj_curve** out);
LOJ_API void loj_curve_free(loj_curve* c);
LOJ_API size_t loj_curve_dim(const loj_curve* c);
LOJ_API loj_status loj_curve_to_string(const loj_curve* c, char** out);

/* ---- numeric configuration ---- */

LOJ_API loj_status loj_config_new(loj_config** out);
LOJ_API void loj_config_free(loj_config* c);
/* Keys: starts, max_iters, step_tol, grad_tol, seed, mu, threads. */
LOJ_API loj_status loj_config_set(loj_config* c, const char* key, const char* value);
/* Adds a warm start; coords holds re, im pairs for m coordinates. */
LOJ_API loj_status loj_config_add_seed(loj_config* c, const double* coords, size_t m);
/* The configuration as a JSON object. */
LOJ_API loj_status loj_config_json(const loj_config* c, char** out);

/* ---- operations; every payload is a JSON document ---- */

/* Canonical f_{n,q} and, when `checks` is nonzero, the Euler identity,
   coordinate change and cubic checks. */
LOJ_API loj_status loj_family_report(int n, int q, int checks, char** json);

/* Curve exponent, Malgrange, quasitame and M-set certificates of g along p. */
LOJ_API loj_status loj_curve_report(const loj_poly* g, const loj_curve* p, char** json);

LOJ_API loj_status loj_contradiction_trace(int n, int q, double rho_re, double rho_im, char** json);

LOJ_API loj_status loj_phi_at(const loj_poly* g, double r, const loj_config* cfg, char** json);
LOJ_API loj_status loj_estimate_linfty(const loj_poly* g, double r_min, double r_max, int count,
                                       const loj_config* cfg, char** json);
LOJ_API loj_status loj_malgrange_probe(const loj_poly* g, double t0_re, double t0_im, const double* radii,
                                       size_t nradii, double eps, const loj_config* cfg, char** json);
LOJ_API loj_status loj_mtame_probe(const loj_poly* g, const double* radii, size_t nradii, const loj_config* cfg,
                                   char** json);

/* Certificate matrix over n_lo..n_hi x q_lo..q_hi (within 1..8). `mutation`
   is NULL or "middle=<integer>", replacing the -3 coefficient of the family
   for a negative control. The "pass" field is true iff every cell passes. */
LOJ_API loj_status loj_verify(int n_lo, int n_hi, int q_lo, int q_hi, const char* mutation, char** json);

#ifdef __cplusplus
}
#endif

#endif
