#ifndef PREDICTABILITY_H
#define PREDICTABILITY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum PredStatus {
  PRED_STATUS_OK = 0,
  PRED_STATUS_NULL_POINTER = 1,
  PRED_STATUS_INVALID_PARAMETER = 2,
  PRED_STATUS_INVALID_CUTOFF = 3,
  PRED_STATUS_EMPTY_INPUT = 4,
  PRED_STATUS_INSUFFICIENT_DATA = 5,
  PRED_STATUS_EMPTY_SUBSET = 6,
  PRED_STATUS_DEGENERATE_DATASET = 7,
  PRED_STATUS_PARSE = 8,
  PRED_STATUS_OUT_OF_VALIDATED_RANGE = 9,
  PRED_STATUS_INSUFFICIENT_MEMORY = 10,
  PRED_STATUS_INFEASIBLE = 11,
  PRED_STATUS_IO = 12,
  PRED_STATUS_BUFFER_TOO_SMALL = 13,
  PRED_STATUS_PANIC = 14,
} PredStatus;

/**
 * Synthetic generator family. Passing any other value is undefined behaviour.
 */
typedef enum PredGeneratorKind {
  PRED_GENERATOR_KIND_MARKOV3 = 0,
  PRED_GENERATOR_KIND_ADDITIVE = 1,
  PRED_GENERATOR_KIND_COPY = 2,
} PredGeneratorKind;

/**
 * Opaque series handle.
 */
typedef struct PredSeries PredSeries;

/**
 * Generator parameters. `alphabet_size` is ignored for Markov3 (always 3);
 * `q` is used by Markov3 and Additive, `q1..q3` by Copy.
 */
typedef struct PredGenerator {
  enum PredGeneratorKind kind;
  size_t alphabet_size;
  double q;
  double q1;
  double q2;
  double q3;
} PredGenerator;

/**
 * Predictability estimate with its bounds.
 */
typedef struct PredEstimate {
  double lower;
  double upper;
  double point;
} PredEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *pred_last_error(void);

/**
 * Simulates `n` states of `generator` seeded with `seed`.
 *
 * # Safety
 * `generator` must point to a valid `PredGenerator`; `out` must be writable.
 */
enum PredStatus pred_generate(const struct PredGenerator *generator,
                              size_t n,
                              uint64_t seed,
                              struct PredSeries **out);

/**
 * Builds a series from `len` 0-based state indices.
 *
 * # Safety
 * `states` must point to `len` readable values; `out` must be writable.
 */
enum PredStatus pred_series_from_states(size_t alphabet_size,
                                        const uint32_t *states,
                                        size_t len,
                                        struct PredSeries **out);

/**
 * Reads a series file (`M n` header followed by `n` state indices).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum PredStatus pred_series_read(const char *path, struct PredSeries **out);

/**
 * Writes `series` to `path` in the series file format.
 *
 * # Safety
 * `series` must be a live handle; `path` a NUL-terminated string.
 */
enum PredStatus pred_series_write(const struct PredSeries *series, const char *path);

/**
 * Number of states in `series`, or 0 for a null handle.
 *
 * # Safety
 * `series` must be null or a live handle.
 */
size_t pred_series_len(const struct PredSeries *series);

/**
 * Alphabet size of `series`, or 0 for a null handle.
 *
 * # Safety
 * `series` must be null or a live handle.
 */
size_t pred_series_alphabet_size(const struct PredSeries *series);

/**
 * Copies the state indices into `buf`, which holds `capacity` values.
 *
 * # Safety
 * `series` must be a live handle; `buf` must have room for `capacity` values.
 */
enum PredStatus pred_series_copy_states(const struct PredSeries *series,
                                        uint32_t *buf,
                                        size_t capacity);

/**
 * Releases a handle. Null is accepted and ignored.
 *
 * # Safety
 * `series` must be null or a handle not yet freed.
 */
void pred_series_free(struct PredSeries *series);

/**
 * Lempel-Ziv entropy-rate estimate in bits per symbol.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum PredStatus pred_entropy_rate(const struct PredSeries *series, double *out);

/**
 * Entropy-based predictability (lower = point = upper).
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum PredStatus pred_entropy_predictability(const struct PredSeries *series,
                                            struct PredEstimate *out);

/**
 * Bayes-error-based predictability with window length `r`.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum PredStatus pred_ber_predictability(const struct PredSeries *series,
                                        size_t r,
                                        struct PredEstimate *out);

/**
 * In-sample fraction of next states predicted by the majority rule over
 * windows of length `r`.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum PredStatus pred_empirical_predictability(const struct PredSeries *series,
                                              size_t r,
                                              double *out);

/**
 * Predictability implied by entropy `h` (bits) over `alphabet_size` states.
 *
 * # Safety
 * `out` must be writable.
 */
enum PredStatus pred_fano_solve(double h, size_t alphabet_size, double *out);

/**
 * Closed-form true predictability of `generator` at window length `r`.
 *
 * # Safety
 * `generator` must point to a valid `PredGenerator`; `out` must be writable.
 */
enum PredStatus pred_true_predictability(const struct PredGenerator *generator,
                                         size_t r,
                                         double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PREDICTABILITY_H */
