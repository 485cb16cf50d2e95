#ifndef VSA_H
#define VSA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Similarity metric for [`vsa_hv_similarity`].
 */
typedef enum VsaMetric {
  VSA_METRIC_NORMALIZED_HAMMING = 0,
  VSA_METRIC_COSINE = 1,
  VSA_METRIC_DOT = 2,
} VsaMetric;

/**
 * Element representation for [`vsa_hv_random`].
 */
typedef enum VsaRepr {
  VSA_REPR_BINARY = 0,
  VSA_REPR_BIPOLAR = 1,
} VsaRepr;

/**
 * Result code of every fallible call.
 */
typedef enum VsaStatus {
  VSA_STATUS_OK = 0,
  VSA_STATUS_NULL_POINTER = 1,
  VSA_STATUS_INVALID_ARGUMENT = 2,
  VSA_STATUS_DIMENSION_MISMATCH = 3,
  VSA_STATUS_IO = 4,
  VSA_STATUS_FORMAT = 5,
  VSA_STATUS_CONFIG = 6,
  VSA_STATUS_UNSUPPORTED_NODE = 7,
  VSA_STATUS_MODEL = 8,
  VSA_STATUS_PANIC = 9,
} VsaStatus;

/**
 * Opaque hypervector.
 */
typedef struct VsaHv VsaHv;

/**
 * Opaque trained classifier.
 */
typedef struct VsaModel VsaModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *vsa_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated when `len > 0`). Returns the full message length
 * in bytes excluding the terminator, or 0 when there is no error.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t vsa_last_error_message(char *buf, size_t len);

/**
 * Seeded random hypervector for `symbol` in codebook `codebook`; `repr`
 * is a [`VsaRepr`] value.
 *
 * # Safety
 * String arguments must be valid NUL-terminated strings; `out` must be writable.
 */
enum VsaStatus vsa_hv_random(const char *codebook,
                             const char *symbol,
                             uint64_t seed,
                             size_t dim,
                             uint32_t repr,
                             struct VsaHv **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum VsaStatus vsa_hv_bind(const struct VsaHv *a, const struct VsaHv *b, struct VsaHv **out);

/**
 * Majority bundle of `n` vectors; ties are broken by `tie_seed`.
 *
 * # Safety
 * `items` must point to `n` live handles; `out` must be writable.
 */
enum VsaStatus vsa_hv_bundle(const struct VsaHv *const *items,
                             size_t n,
                             uint64_t tie_seed,
                             struct VsaHv **out);

/**
 * Cyclic shift by `k` positions (negative shifts left).
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum VsaStatus vsa_hv_permute(const struct VsaHv *a, int64_t k, struct VsaHv **out);

/**
 * Similarity under `metric`, a [`VsaMetric`] value.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum VsaStatus vsa_hv_similarity(const struct VsaHv *a,
                                 const struct VsaHv *b,
                                 uint32_t metric,
                                 double *out);

/**
 * Dimension of `a`, or 0 for a null handle.
 *
 * # Safety
 * `a` must be null or a live handle.
 */
size_t vsa_hv_dim(const struct VsaHv *a);

/**
 * Element `i` as a number (0/1 for binary, ±1 for bipolar).
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum VsaStatus vsa_hv_get(const struct VsaHv *a, size_t i, int64_t *out);

/**
 * # Safety
 * `a` must be null or a handle not yet freed.
 */
void vsa_hv_free(struct VsaHv *a);

/**
 * Loads a model saved by `vsa train` (the stem without extension).
 *
 * # Safety
 * `stem` must be a NUL-terminated path; `out` must be writable.
 */
enum VsaStatus vsa_model_load(const char *stem, struct VsaModel **out);

/**
 * Predicts the class label of `n` raw features.
 *
 * # Safety
 * `model` must be live; `features` must point to `n` doubles; `label`
 * must be writable. Free the label with [`vsa_string_free`].
 */
enum VsaStatus vsa_model_predict(const struct VsaModel *model,
                                 const double *features,
                                 size_t n,
                                 char **label);

/**
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void vsa_model_free(struct VsaModel *model);

/**
 * Runs `workload` (e.g. `"perception"`) at dimension `dim`, maps it onto
 * the template architecture with `memory` (e.g. `"MRAM/SRAM"`) at `node`
 * (`"65"`, `"40_45"`, `"22"`) using the shipped technology table, and
 * returns the cost report as JSON.
 *
 * # Safety
 * String arguments must be NUL-terminated; `json` must be writable. Free
 * the result with [`vsa_string_free`].
 */
enum VsaStatus vsa_cost_estimate(const char *workload,
                                 const char *memory,
                                 const char *node,
                                 size_t dim,
                                 uint64_t seed,
                                 char **json);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void vsa_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VSA_H */
