#ifndef EMZV_H
#define EMZV_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  EMZV_STATUS_OK = 0,
  EMZV_STATUS_NULL_ARGUMENT = 1,
  EMZV_STATUS_INVALID_UTF8 = 2,
  EMZV_STATUS_PARSE_ERROR = 3,
  EMZV_STATUS_CONSISTENCY_ERROR = 4,
  EMZV_STATUS_TABLE_OVERFLOW = 5,
  EMZV_STATUS_DIMENSION_MISMATCH = 6,
  EMZV_STATUS_DEGREE_MISMATCH = 7,
  EMZV_STATUS_PRECONDITION_VIOLATED = 8,
  EMZV_STATUS_EXTRACTION_INCONSISTENT = 9,
  EMZV_STATUS_FOURIER_VIOLATION = 10,
  EMZV_STATUS_TRUNCATION_OVERFLOW = 11,
  EMZV_STATUS_PANIC = 12,
} EmzvStatus;

/**
 * Opaque handle: an MZV table plus the decomposition cache built on it.
 * Not safe to share between threads without external locking.
 */
typedef struct EmzvContext EmzvContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Context on the built-in weight-8 MZV table.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
EmzvStatus emzv_context_new(EmzvContext **out);

/**
 * Context on the MZV table stored at `path`.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
EmzvStatus emzv_context_from_table(const char *path, EmzvContext **out);

/**
 * # Safety
 * `ctx` must come from `emzv_context_new*` and not be used afterwards. Null is ignored.
 */
void emzv_context_free(EmzvContext *ctx);

/**
 * Highest MZV weight the context's table covers.
 *
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer.
 */
EmzvStatus emzv_table_max_weight(const EmzvContext *ctx, uint32_t *out);

/**
 * Decomposition of I(index) as an `emzv/decomposition/v1` document.
 * `index` is written like "0,1,0,0".
 *
 * # Safety
 * `ctx` must be a live context, `index` NUL-terminated, `out` valid.
 */
EmzvStatus emzv_decompose(const EmzvContext *ctx, const char *index, char **out);

/**
 * q-expansion of I(index) to `order` terms as a `qexp/v1` document.
 *
 * # Safety
 * As for `emzv_decompose`.
 */
EmzvStatus emzv_qexp(const EmzvContext *ctx, const char *index, size_t order, char **out);

/**
 * Constant term of I(index), as plain text such as "-3*pi*z3".
 *
 * # Safety
 * As for `emzv_decompose`.
 */
EmzvStatus emzv_gamma(const EmzvContext *ctx, const char *index, char **out);

/**
 * Relations among brackets of the eps_2k of total weight `weight` and
 * depth `depth` (letters at least `min_letter`), tested in the free Lie
 * algebra up to `lie_degree`. Returns a `lie-relations/v1` document.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
EmzvStatus emzv_derlie_relations(uint32_t weight,
                                 size_t depth,
                                 uint32_t min_letter,
                                 size_t lie_degree,
                                 char **out);

/**
 * Sets `*out` to 1 if every homogeneous component of `epoly` kills the
 * relations among the eps_2k up to `lie_degree`, else 0.
 *
 * # Safety
 * `epoly` must be NUL-terminated and `out` valid.
 */
EmzvStatus emzv_membership(const char *epoly, size_t lie_degree, int32_t *out);

/**
 * Sets `*out` to 1 if the q-expansion of `epoly` to `order` terms has no
 * powers of T, else 0.
 *
 * # Safety
 * `epoly` must be NUL-terminated and `out` valid.
 */
EmzvStatus emzv_fourier_check(const char *epoly, size_t order, int32_t *out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void emzv_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. Valid
 * until the next call into the library from the same thread.
 */
const char *emzv_last_error(void);

/**
 * Static name of a status code, e.g. "TableOverflow".
 */
const char *emzv_status_name(EmzvStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EMZV_H */
