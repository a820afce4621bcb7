#ifndef KVDEPTH_H
#define KVDEPTH_H

/* Generated by cbindgen. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result codes. Zero is success.
 */
typedef enum KvStatus {
  KV_STATUS_OK = 0,
  KV_STATUS_NULL_POINTER = 1,
  KV_STATUS_INVALID_UTF8 = 2,
  KV_STATUS_INVALID_ARGUMENT = 3,
  KV_STATUS_PARSE = 4,
  KV_STATUS_NOT_LIE = 5,
  KV_STATUS_WEIGHT_CAP = 6,
  KV_STATUS_MISMATCH = 7,
  KV_STATUS_ARITHMETIC = 8,
  KV_STATUS_INTERNAL = 9,
} KvStatus;

/**
 * Which functional-equation system `kv_poly_space_dim` solves.
 */
typedef enum KvSystem {
  KV_SYSTEM_FULL = 0,
  KV_SYSTEM_SINGLE_B = 1,
  KV_SYSTEM_SINGLE_COMPOSED = 2,
} KvSystem;

/**
 * Opaque Lie element on the letters x, y.
 */
typedef struct KvLieElem KvLieElem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *kv_version(void);

/**
 * The message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call on this thread.
 */
const char *kv_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void kv_string_free(char *s);

/**
 * Releases a Lie element handle.
 *
 * # Safety
 * `e` must come from this library and not be freed twice.
 */
void kv_lie_free(struct KvLieElem *e);

/**
 * The Soule element of odd weight `m >= 3`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KvStatus kv_lie_soule(uintptr_t m, struct KvLieElem **out);

/**
 * Parses a bracket expression such as `["x", ["x", "y"]]`, or a list of
 * `{"coeff", "bracket"}` terms, over the letters x, y.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KvStatus kv_lie_from_json(const char *json, struct KvLieElem **out);

/**
 * Serializes an element as a list of `{"word", "coeff"}` terms.
 *
 * # Safety
 * `e` must be a live handle and `out` a valid pointer.
 */
enum KvStatus kv_lie_to_json(const struct KvLieElem *e, char **out);

/**
 * The Lie bracket `[a, b]`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
enum KvStatus kv_lie_bracket(const struct KvLieElem *a,
                             const struct KvLieElem *b,
                             struct KvLieElem **out);

/**
 * The Ihara bracket `{a, b}`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
enum KvStatus kv_lie_ihara(const struct KvLieElem *a,
                           const struct KvLieElem *b,
                           struct KvLieElem **out);

/**
 * The part of `e` with weight `weight` (if nonnegative) and y-degree
 * `depth` (if nonnegative). Negative values leave that grading free.
 *
 * # Safety
 * `e` must be a live handle and `out` a valid pointer.
 */
enum KvStatus kv_lie_component(const struct KvLieElem *e,
                               int64_t weight,
                               int64_t depth,
                               struct KvLieElem **out);

/**
 * Solves grt1 in weight `m` with the given weight cap; writes the solution
 * as JSON.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KvStatus kv_grt_solve_json(uintptr_t m, uintptr_t cap, char **out);

/**
 * Dimension of the depth-2 kernel in degree `n` for root-of-unity order `l`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KvStatus kv_kernel_dim(uintptr_t n, uint32_t l, uintptr_t *out);

/**
 * Dimension of the space of degree-`n` polynomial solutions of `system`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KvStatus kv_poly_space_dim(uintptr_t n, uint32_t l, enum KvSystem system, uintptr_t *out);

/**
 * Multiplicity of the sign character `chi13` in degree-`n` binary forms.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KvStatus kv_chi13_multiplicity(uintptr_t n, int64_t *out);

/**
 * The order-`l` divergence of the derivation `nu(e)`, as JSON trace terms.
 *
 * # Safety
 * `e` must be a live handle and `out` a valid pointer.
 */
enum KvStatus kv_qdiv_nu_json(const struct KvLieElem *e, uint32_t l, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KVDEPTH_H */
