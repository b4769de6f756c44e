#ifndef KAHLER_KAHLER_H
#define KAHLER_KAHLER_H

#include <stddef.h>
#include <stdint.h>

#if defined(KAHLER_BUILDING_LIBRARY)
#define KAHLER_API __attribute__((visibility("default")))
#else
#define KAHLER_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Largest supported real dimension 2n. */
#define KAHLER_MAX_DIM 16

typedef enum kahler_status {
  KAHLER_OK = 0,
  KAHLER_INVALID_DIMENSION = 1,
  KAHLER_DIMENSION_TOO_SMALL = 2,
  KAHLER_DEGREE_OUT_OF_RANGE = 3,
  KAHLER_WRONG_DEGREE = 4,
  KAHLER_RESOURCE_LIMIT = 5,
  KAHLER_DEGENERATE_SAMPLE = 6,
  KAHLER_DEGENERATE_PLANE = 7,
  KAHLER_PRECONDITION = 8,
  KAHLER_SPACE_MISMATCH = 9,
  KAHLER_INDEX_ERROR = 10,
  KAHLER_DEGENERATE_DENOMINATOR = 11,
  KAHLER_NOT_NEGATIVELY_CURVED = 12,
  KAHLER_IDENTITY_INCONSISTENCY = 13,
  KAHLER_NOT_CONVERGED = 14,
  KAHLER_PARSE = 15,
  KAHLER_IO = 16,
  KAHLER_INVALID_ARGUMENT = 17, /* null pointer or short buffer */
  KAHLER_INTERNAL = 18
} kahler_status;

/* Stable kebab-case name, e.g. "resource-limit". */
KAHLER_API const char* kahler_status_name(kahler_status status);

/* Message of the last failing call on this thread; "" if none. */
KAHLER_API const char* kahler_last_error(void);

/* Frees strings returned by this library. */
KAHLER_API void kahler_string_free(char* text);

/* ---- tensors ---------------------------------------------------------- */

typedef struct kahler_tensor kahler_tensor;

KAHLER_API kahler_status kahler_tensor_r0(int n, kahler_tensor** out);
KAHLER_API kahler_status kahler_tensor_random(int n, uint64_t seed, double norm,
                                              kahler_tensor** out);
/* Kahler projection of R0 + t S with S random of unit norm. */
KAHLER_API kahler_status kahler_tensor_perturbed(int n, double t, uint64_t seed,
                                                 kahler_tensor** out);
/* count must equal (2n)^4; layout R[i][j][k][l] row-major. */
KAHLER_API kahler_status kahler_tensor_from_entries(int n, const double* entries, size_t count,
                                                    kahler_tensor** out);
/* symmetry_tolerance may be NULL. */
KAHLER_API kahler_status kahler_tensor_load(const char* path, kahler_tensor** out,
                                            double* symmetry_tolerance);
KAHLER_API kahler_status kahler_tensor_save(const kahler_tensor* tensor, const char* path,
                                            double symmetry_tolerance);
KAHLER_API kahler_status kahler_tensor_scale(kahler_tensor* tensor, double factor);
KAHLER_API void kahler_tensor_free(kahler_tensor* tensor);

KAHLER_API int kahler_tensor_n(const kahler_tensor* tensor);
KAHLER_API size_t kahler_tensor_size(const kahler_tensor* tensor);
KAHLER_API kahler_status kahler_tensor_entries(const kahler_tensor* tensor, double* out,
                                               size_t count);
KAHLER_API kahler_status kahler_tensor_distance(const kahler_tensor* a, const kahler_tensor* b,
                                                double* out);

/* ---- symmetry certificate --------------------------------------------- */

typedef struct kahler_certificate {
  double antisymmetry;
  double pair_symmetry;
  double bianchi;
  double j_invariance;
  double tolerance;
  int passed;
} kahler_certificate;

KAHLER_API kahler_status kahler_check(const kahler_tensor* tensor, double tolerance,
                                      kahler_certificate* out);

/* ---- extremes of sectional and holomorphic curvature ------------------ */

typedef struct kahler_pinch_report {
  int dim;
  double k_min;
  double k_max;
  double argmin_u[KAHLER_MAX_DIM];
  double argmin_v[KAHLER_MAX_DIM];
  double argmax_u[KAHLER_MAX_DIM];
  double argmax_v[KAHLER_MAX_DIM];
  double envelope_lo;
  double envelope_hi;
  int restarts;
  int converged;
} kahler_pinch_report;

typedef struct kahler_hol_report {
  int dim;
  double h_min;
  double h_max;
  double argmin_u[KAHLER_MAX_DIM];
  double argmax_u[KAHLER_MAX_DIM];
  int restarts;
  int converged;
} kahler_hol_report;

/* restarts = 0 picks the default for the dimension. */
KAHLER_API kahler_status kahler_pinch(const kahler_tensor* tensor, int restarts, uint64_t seed,
                                      kahler_pinch_report* out);
KAHLER_API kahler_status kahler_hol(const kahler_tensor* tensor, int restarts, uint64_t seed,
                                    kahler_hol_report* out);

/* ---- Chern-Weil ------------------------------------------------------- */

/* Number of multi-indices with sum_i i a_i = n. */
KAHLER_API kahler_status kahler_chern_index_count(int n, size_t* out);
/* Writes the n exponents of the position-th index (descending lex order). */
KAHLER_API kahler_status kahler_chern_index_get(int n, size_t position, int* exponents);
/* Parses "a_1,...,a_n"; *n receives the length. */
KAHLER_API kahler_status kahler_chern_index_parse(const char* text, int* exponents, int capacity,
                                                  int* n);

/* gamma with c_I(R) = gamma omega^n; exponents has kahler_tensor_n entries. */
KAHLER_API kahler_status kahler_chern_density(const kahler_tensor* tensor, const int* exponents,
                                              double* gamma);
KAHLER_API kahler_status kahler_chern_ratio(const kahler_tensor* tensor, const int* numerator,
                                            const int* denominator, double* ratio);
/* Ratio for the complex space form, prod C(n+1,k)^(a_k - b_k). */
KAHLER_API kahler_status kahler_chern_reference_ratio(int n, const int* numerator,
                                                      const int* denominator, double* ratio);

/* ---- identity suite --------------------------------------------------- */

typedef struct kahler_identity_report {
  int n;
  int samples;
  double tolerance;
  double identity_one;
  double polarization_real;
  double polarization_complex_printed;
  double polarization_complex_fitted;
  double fitted_coefficient;
  int suspected_typo;
  double reconstruction;
  double solve_from_h;
  double projector_idempotence;
  double projector_self_adjoint;
  double projector_fixes_r0;
  double berger_r0_violation;
  double berger_r0_attained;
  int passed;
} kahler_identity_report;

KAHLER_API kahler_status kahler_identities(int n, int samples, uint64_t seed, double tolerance,
                                           kahler_identity_report* out);

/* ---- constants and experiments ---------------------------------------- */

typedef struct kahler_constant_chain {
  double epsilon;
  int n;
  double coefficient_bound;
  double eta;
  double delta_1;
  double delta;
  double epsilon_1;
} kahler_constant_chain;

typedef struct kahler_certification {
  int accepted;
  int attempts;
  int counterexamples;
  double max_delta;
  double max_ratio_dev;
} kahler_certification;

KAHLER_API kahler_status kahler_proof_constants(double epsilon, int n, kahler_constant_chain* out);
KAHLER_API kahler_status kahler_certify(const kahler_constant_chain* chain, int samples,
                                        uint64_t seed, int restarts, kahler_certification* out);

/* Runs a sweep described by a JSON config. On success *csv holds the record
 * table and *summary a JSON document with index pairs and per-t
 * aggregates; free both with kahler_string_free. */
KAHLER_API kahler_status kahler_sweep(const char* config_json, char** csv, char** summary);

#ifdef __cplusplus
}
#endif

#endif
