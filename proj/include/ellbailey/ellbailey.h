/* Copyright 2026 The ellbailey Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/* C interface of the ellbailey library.
 *
 * Objects are opaque handles created by *_create functions (or returned
 * through out-parameters) and released by the matching *_destroy. Every call
 * that can fail returns an ellb_status; on failure the message is available
 * from ellb_last_error() on the calling thread until its next failing call.
 * Strings returned through char** are owned by the caller and released with
 * ellb_string_free.
 */

#ifndef ELLBAILEY_ELLBAILEY_H
#define ELLBAILEY_ELLBAILEY_H

#include <stdint.h>

#if defined(ELLB_BUILDING_LIBRARY)
#define ELLB_API __attribute__((visibility("default")))
#else
#define ELLB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ellb_status {
  ELLB_OK = 0,
  ELLB_DOMAIN_ERROR = 1,
  ELLB_NON_CONVERGENT = 2,
  ELLB_POLE_ERROR = 3,
  ELLB_UNKNOWN_SYMBOL = 4,
  ELLB_DEGENERATE = 5,
  ELLB_NOT_CONVERGED = 6,
  ELLB_EVALUATION_ERROR = 7,
  ELLB_SHAPE_ERROR = 8,
  ELLB_CONSTRAINT_VIOLATION = 9,
  ELLB_SAMPLING_EXHAUSTED = 10,
  ELLB_PARSE_ERROR = 11,
  ELLB_INVALID_ARGUMENT = 20,
  ELLB_INTERNAL_ERROR = 21
} ellb_status;

typedef struct ellb_complex {
  double re;
  double im;
} ellb_complex;

typedef struct ellb_base ellb_base;
typedef struct ellb_assignment ellb_assignment;
typedef struct ellb_report ellb_report;
typedef struct ellb_pair ellb_pair;

ELLB_API const char* ellb_version(void);
ELLB_API const char* ellb_status_name(ellb_status status);
ELLB_API const char* ellb_last_error(void);
ELLB_API void ellb_string_free(char* s);

/* Bases q, p with |q|, |p| < 1. */
ELLB_API ellb_status ellb_base_create(ellb_complex q, ellb_complex p, ellb_base** out);
ELLB_API void ellb_base_destroy(ellb_base* base);

ELLB_API ellb_status ellb_gamma(const ellb_base* base, ellb_complex z, ellb_complex* out);
/* (a;q) infinite product. */
ELLB_API ellb_status ellb_pochhammer(ellb_complex a, ellb_complex q, ellb_complex* out);
/* prod_{m<s} Gamma(t_m t_s) / prod_m Gamma(A/t_m), A = t_0 ... t_4. */
ELLB_API ellb_status ellb_beta_closed_form(const ellb_base* base, const ellb_complex t[5], ellb_complex* out);

ELLB_API ellb_status ellb_assignment_create(ellb_assignment** out);
ELLB_API void ellb_assignment_destroy(ellb_assignment* a);
ELLB_API ellb_status ellb_assignment_set_param(ellb_assignment* a, const char* name, ellb_complex value);
/* External points such as w, which must lie on the unit circle. */
ELLB_API ellb_status ellb_assignment_set_point(ellb_assignment* a, const char* name, ellb_complex value);
/* {"params": {name: [re, im]}, "points": {...}} */
ELLB_API ellb_status ellb_assignment_json(const ellb_assignment* a, char** out);

/* Identifiers: "beta", "transformation", "id-seq:m", "ident1", "identfin:m". */
ELLB_API ellb_status ellb_identity_sample(const char* identity_id, const ellb_base* base, uint64_t seed,
                                          double modulus_lo, double modulus_hi, ellb_assignment** out);
/* JSON array of the parameter names the identity ranges over. */
ELLB_API ellb_status ellb_identity_params(const char* identity_id, char** out);

typedef struct ellb_verify_options {
  double tol;   /* agreement tolerance, 0 for the per-dimension default */
  int n_max;    /* grid cap per dimension, 0 for the per-dimension default */
  int naive;    /* nonzero evaluates every node directly instead of through tables */
} ellb_verify_options;

/* ELLB_CONSTRAINT_VIOLATION leaves *out untouched. A report whose quadrature
 * stopped at n_max is still returned with ELLB_OK; read converged from it. */
ELLB_API ellb_status ellb_verify(const char* identity_id, const ellb_assignment* a, const ellb_base* base,
                                 const ellb_verify_options* opts, ellb_report** out);

typedef struct ellb_report_info {
  ellb_complex lhs;
  ellb_complex rhs;
  double abs_err;
  double rel_err;
  double runtime_ms;
  int converged;
  double tol; /* tolerance the report was checked against */
} ellb_report_info;

ELLB_API ellb_status ellb_report_info_get(const ellb_report* r, ellb_report_info* out);
ELLB_API ellb_status ellb_report_json(const ellb_report* r, char** out);
ELLB_API void ellb_report_destroy(ellb_report* r);

/* Pair generated by a word such as "C(s1,u1);D(s2,u2)" from the seed pair. */
ELLB_API ellb_status ellb_tree_pair(const char* word, ellb_pair** out);
ELLB_API void ellb_pair_destroy(ellb_pair* pair);
ELLB_API ellb_status ellb_pair_json(const ellb_pair* pair, char** out);
ELLB_API ellb_status ellb_pair_sample(const ellb_pair* pair, const ellb_base* base, uint64_t seed, double modulus_lo,
                                      double modulus_hi, ellb_assignment** out);

typedef struct ellb_residual {
  ellb_complex beta;
  ellb_complex transform;
  double relative; /* |beta - transform| / max(|beta|, |transform|) */
  int converged;
} ellb_residual;

/* beta(w) against kappa times the integral of Gamma(T w^+- z^+-) alpha(z). */
ELLB_API ellb_status ellb_pair_residual(const ellb_pair* pair, const ellb_assignment* a, const ellb_base* base,
                                        double target, int n_max, ellb_residual* out);

#ifdef __cplusplus
}
#endif

#endif /* ELLBAILEY_ELLBAILEY_H */
