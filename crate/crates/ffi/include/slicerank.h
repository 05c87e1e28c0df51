#ifndef SLICERANK_H
#define SLICERANK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum SrStatus {
  SR_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  SR_STATUS_NULL_POINTER = 1,
  /**
   * An input string was not valid UTF-8.
   */
  SR_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, a non-prime modulus, a shape mismatch, and so on.
   */
  SR_STATUS_INVALID_INPUT = 3,
  /**
   * The request is larger than the configured budget.
   */
  SR_STATUS_BUDGET_EXCEEDED = 4,
  /**
   * The request is outside what the algorithm supports.
   */
  SR_STATUS_UNSUPPORTED = 5,
  /**
   * An internal consistency check failed.
   */
  SR_STATUS_INTERNAL = 6,
  /**
   * A panic was caught at the boundary.
   */
  SR_STATUS_PANIC = 7,
} SrStatus;

/**
 * Opaque handle to a tensor over F_p.
 */
typedef struct SrTensor SrTensor;

/**
 * Opaque handle to a triple system.
 */
typedef struct SrTripleSystem SrTripleSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next call into this library on the thread.
 */
const char *sr_last_error(void);

/**
 * Library version as a static string.
 */
const char *sr_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library and not yet freed.
 */
void sr_string_free(char *s);

/**
 * Writes `{"p","n","N","threeN","profileCount"}` for the bound at `(p, n)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SrStatus sr_bound_json(uint64_t p, size_t n, char **out);

/**
 * Parses a triple system from `{"p","n","triples":[{"a","b","c"}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SrStatus sr_system_from_json(const char *json, struct SrTripleSystem **out);

/**
 * Releases a system handle.
 *
 * # Safety
 * `sys` must be NULL or a handle from [`sr_system_from_json`] not yet freed.
 */
void sr_system_free(struct SrTripleSystem *sys);

/**
 * Number of triples, or 0 for NULL.
 *
 * # Safety
 * `sys` must be NULL or a live handle.
 */
size_t sr_system_len(const struct SrTripleSystem *sys);

/**
 * Checks the ordering condition. `*valid` is set to 1 or 0. When `report` is
 * not NULL it receives the verification report as JSON.
 *
 * # Safety
 * `sys` must be a live handle, `valid` a valid pointer, `report` NULL or valid.
 */
enum SrStatus sr_verify(const struct SrTripleSystem *sys, int32_t *valid, char **report);

/**
 * Decomposes the system's indicator tensor into slices and writes the
 * outcome as JSON. With `emit_slices` nonzero the slices are included under
 * `"decomposition"`.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum SrStatus sr_decompose(const struct SrTripleSystem *sys, int32_t emit_slices, char **out);

/**
 * Parses a tensor from `{"p","k","domainSize","entries":[{"index","value"}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SrStatus sr_tensor_from_json(const char *json, struct SrTensor **out);

/**
 * Releases a tensor handle.
 *
 * # Safety
 * `t` must be NULL or a handle from [`sr_tensor_from_json`] not yet freed.
 */
void sr_tensor_free(struct SrTensor *t);

/**
 * Triangular-support certificate as JSON:
 * `{"holds","witness","diagonalCount","lowerBound"}`.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum SrStatus sr_check_triangular(const struct SrTensor *t, char **out);

/**
 * Exact slice rank of a 3-tensor when it is at most `max_rank`. On success
 * `*exact` is 1 and `*rank` holds the rank, or `*exact` is 0 and the rank is
 * larger than `*rank == max_rank`.
 *
 * # Safety
 * `t` must be a live handle; `rank` and `exact` valid pointers.
 */
enum SrStatus sr_slice_rank(const struct SrTensor *t,
                            size_t max_rank,
                            size_t *rank,
                            int32_t *exact);

/**
 * Rank over F_p of a 2-tensor.
 *
 * # Safety
 * `t` must be a live handle and `rank` a valid pointer.
 */
enum SrStatus sr_matrix_rank(const struct SrTensor *t, size_t *rank);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLICERANK_H */
