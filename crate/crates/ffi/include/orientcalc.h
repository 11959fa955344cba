#ifndef ORIENTCALC_H
#define ORIENTCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum oc_status {
  OC_STATUS_OK = 0,
  OC_STATUS_NULL_POINTER = 1,
  OC_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input text.
   */
  OC_STATUS_PARSE = 3,
  /**
   * Well-formed input rejected by the library.
   */
  OC_STATUS_DOMAIN = 4,
  OC_STATUS_OUT_OF_RANGE = 5,
  OC_STATUS_INTERNAL = 6,
} oc_status;

/**
 * Orientability verdict codes, ordered from weakest to strongest.
 */
typedef enum oc_verdict_status_t {
  OC_VERDICT_STATUS_T_NOT_ORIENTABLE = 0,
  OC_VERDICT_STATUS_T_UNKNOWN = 1,
  OC_VERDICT_STATUS_T_ORIENTABLE = 2,
  OC_VERDICT_STATUS_T_CANONICAL = 3,
} oc_verdict_status_t;

typedef struct oc_complex oc_complex;

/**
 * A finitely generated abelian group in split form.
 */
typedef struct oc_group oc_group;

/**
 * An orientation group with its Euler form and Ξ.
 */
typedef struct oc_omega oc_omega;

typedef struct oc_verdict oc_verdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message into `buf` (NUL-terminated, truncated to
 * `len`). Returns the full message length excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t oc_last_error(char *buf, size_t len);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void oc_string_free(char *s);

/**
 * Cokernel of a `rows × cols` row-major integer matrix.
 *
 * # Safety
 * `entries` must point to `rows * cols` values; `out` must be writable.
 */
enum oc_status oc_group_from_presentation(const int64_t *entries,
                                          size_t rows,
                                          size_t cols,
                                          struct oc_group **out);

/**
 * Parses `Z^2 x Z_4`, `Z × Z_2`, `0` and the like.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum oc_status oc_group_parse(const char *spec, struct oc_group **out);

/**
 * # Safety
 * `g` must be a live group handle or null.
 */
size_t oc_group_free_rank(const struct oc_group *g);

/**
 * Order of the torsion subgroup.
 *
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum oc_status oc_group_torsion_order(const struct oc_group *g, int64_t *out);

/**
 * The group as text, e.g. `Z × Z_2 × Z_3`.
 *
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum oc_status oc_group_describe(const struct oc_group *g, char **out);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void oc_group_free(struct oc_group *g);

/**
 * Orientation group over `k0` (see [`oc_group_parse`]). `chi` is the
 * row-major Euler form on the free part; `xi` holds one sign (+1 or −1) per
 * 2-primary generator, or may be empty for all +1.
 *
 * # Safety
 * Pointers must reference the stated lengths; `out` must be writable.
 */
enum oc_status oc_omega_new(const char *k0,
                            const int64_t *chi,
                            size_t chi_len,
                            const int8_t *xi,
                            size_t xi_len,
                            struct oc_omega **out);

/**
 * Coordinates per element: free, then 2-primary, then odd.
 *
 * # Safety
 * `w` must be a live handle or null.
 */
size_t oc_omega_coord_count(const struct oc_omega *w);

/**
 * `out = a · b`. Coordinate arrays hold [`oc_omega_coord_count`] entries;
 * signs are +1 or −1.
 *
 * # Safety
 * Pointers must reference arrays of the coordinate count.
 */
enum oc_status oc_omega_multiply(const struct oc_omega *w,
                                 const int64_t *a,
                                 int8_t a_sign,
                                 const int64_t *b,
                                 int8_t b_sign,
                                 int64_t *out,
                                 int8_t *out_sign);

/**
 * # Safety
 * As for [`oc_omega_multiply`].
 */
enum oc_status oc_omega_inverse(const struct oc_omega *w,
                                const int64_t *a,
                                int8_t a_sign,
                                int64_t *out,
                                int8_t *out_sign);

/**
 * `out = a^n`, any integer `n`.
 *
 * # Safety
 * As for [`oc_omega_multiply`].
 */
enum oc_status oc_omega_power(const struct oc_omega *w,
                              const int64_t *a,
                              int8_t a_sign,
                              int64_t n,
                              int64_t *out,
                              int8_t *out_sign);

/**
 * # Safety
 * `w` must be null or a handle not yet freed.
 */
void oc_omega_free(struct oc_omega *w);

/**
 * Orientability verdict for `operator` on `model` with structure group
 * `group`, e.g. ("CP^2", "signature", "U(2)").
 *
 * # Safety
 * Strings must be NUL-terminated; `out` must be writable.
 */
enum oc_status oc_orientability_evaluate(const char *model,
                                         const char *operator_,
                                         const char *group,
                                         bool complex_structure,
                                         struct oc_verdict **out);

/**
 * # Safety
 * `v` must be a live verdict handle.
 */
enum oc_verdict_status_t oc_verdict_status(const struct oc_verdict *v);

/**
 * # Safety
 * `v` must be a live verdict handle or null.
 */
size_t oc_verdict_trail_len(const struct oc_verdict *v);

/**
 * Rule id and group of trail entry `i`, as `rule@group`.
 *
 * # Safety
 * `v` must be a live verdict handle; `out` must be writable.
 */
enum oc_status oc_verdict_trail_entry(const struct oc_verdict *v, size_t i, char **out);

/**
 * # Safety
 * `v` must be null or a handle not yet freed.
 */
void oc_verdict_free(struct oc_verdict *v);

/**
 * Parses the line-oriented complex format.
 *
 * # Safety
 * `src` must be NUL-terminated; `out` must be writable.
 */
enum oc_status oc_complex_parse(const char *src, struct oc_complex **out);

/**
 * One of the named library complexes (`octahedron`, `icosahedron`, ...).
 *
 * # Safety
 * `name` must be NUL-terminated; `out` must be writable.
 */
enum oc_status oc_complex_library(const char *name, struct oc_complex **out);

/**
 * # Safety
 * `k` must be a live complex handle or null.
 */
size_t oc_complex_dim(const struct oc_complex *k);

/**
 * Number of faces of dimension `d`.
 *
 * # Safety
 * `k` must be a live complex handle or null.
 */
size_t oc_complex_face_count(const struct oc_complex *k, size_t d);

/**
 * Counts for the codimension-`d` dual skeleton: its simplices in the
 * barycentric subdivision, and whether it misses the primal
 * (n−d)-skeleton.
 *
 * # Safety
 * `k` must be a live complex handle; outputs must be writable.
 */
enum oc_status oc_skeleton_dual(const struct oc_complex *k,
                                size_t d,
                                size_t *simplices,
                                bool *disjoint);

/**
 * Top cells of the prism triangulation of `k × [0,1]`.
 *
 * # Safety
 * `k` must be a live complex handle; `out` must be writable.
 */
enum oc_status oc_prism_top_cells(const struct oc_complex *k, size_t *out);

/**
 * # Safety
 * `k` must be null or a handle not yet freed.
 */
void oc_complex_free(struct oc_complex *k);

/**
 * Runs a job config file exactly as `orient-calc <job> --config <path>` does
 * and returns the report text (structured = JSON).
 *
 * # Safety
 * Strings must be NUL-terminated; `out` must be writable.
 */
enum oc_status oc_run_config(const char *job, const char *path, bool structured, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORIENTCALC_H */
