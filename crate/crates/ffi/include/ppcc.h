#ifndef PPCC_H
#define PPCC_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PpccStatus {
  PPCC_STATUS_OK = 0,
  PPCC_STATUS_NULL_POINTER = 1,
  PPCC_STATUS_INVALID_UTF8 = 2,
  PPCC_STATUS_PARSE = 3,
  PPCC_STATUS_GUARD = 4,
  PPCC_STATUS_INVALID_ARGUMENT = 5,
  PPCC_STATUS_OUT_OF_DOMAIN = 6,
  PPCC_STATUS_INFEASIBLE = 7,
  PPCC_STATUS_VIOLATION = 8,
  PPCC_STATUS_NOT_CONVERGED = 9,
  PPCC_STATUS_OVERFLOW = 10,
  PPCC_STATUS_INTERNAL = 11,
} PpccStatus;

/**
 * A guess protocol.
 */
typedef struct PpccGuess PpccGuess;

/**
 * A parsed Boolean or sign matrix.
 */
typedef struct PpccMatrix PpccMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *ppcc_last_error(void);

/**
 * Library version as a static string.
 */
const char *ppcc_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void ppcc_string_free(char *s);

/**
 * Parses a matrix in the `bool R C` / `sign R C` text format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out_matrix` valid.
 */
enum PpccStatus ppcc_matrix_parse(const char *text, struct PpccMatrix **out_matrix);

/**
 * # Safety
 * `m` must be null or a handle from [`ppcc_matrix_parse`], freed once.
 */
void ppcc_matrix_free(struct PpccMatrix *m);

/**
 * # Safety
 * `m` must be a live matrix handle; the out-pointers must be valid.
 */
enum PpccStatus ppcc_matrix_shape(const struct PpccMatrix *m, size_t *rows, size_t *cols);

/**
 * Exact discrepancy of the sign view of `m`. `exact` receives the value as
 * a reduced fraction string (may be null to skip).
 *
 * # Safety
 * `m` must be a live matrix handle; `value` must be valid; `exact` null or valid.
 */
enum PpccStatus ppcc_disc(const struct PpccMatrix *m, double *value, char **exact);

/**
 * Margin complexity of the sign view of `m`.
 *
 * # Safety
 * `m` must be a live matrix handle and `value` valid.
 */
enum PpccStatus ppcc_mc(const struct PpccMatrix *m, double *value);

/**
 * Parses a guess protocol from its JSON form.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out_guess` valid.
 */
enum PpccStatus ppcc_guess_parse(const char *json, struct PpccGuess **out_guess);

/**
 * # Safety
 * `g` must be null or a guess handle from this library, freed once.
 */
void ppcc_guess_free(struct PpccGuess *g);

/**
 * # Safety
 * `g` must be a live guess handle and `json` valid.
 */
enum PpccStatus ppcc_guess_to_json(const struct PpccGuess *g, char **json);

/**
 * # Safety
 * `g` must be a live guess handle and `cost` valid.
 */
enum PpccStatus ppcc_guess_pp_cost(const struct PpccGuess *g, uint64_t *cost);

/**
 * acc - rej at input (x, y). Fails with `Overflow` when the gap does not fit.
 *
 * # Safety
 * `g` must be a live guess handle and `gap` valid.
 */
enum PpccStatus ppcc_guess_gap_at(const struct PpccGuess *g, size_t x, size_t y, int64_t *gap);

/**
 * PP acceptance at (x, y): 1 when acc > rej, else 0.
 *
 * # Safety
 * `g` must be a live guess handle and `accepted` valid.
 */
enum PpccStatus ppcc_guess_accepts(const struct PpccGuess *g, size_t x, size_t y, bool *accepted);

/**
 * Compiles `count` protocols through the polynomial `poly` (variables
 * `z1..zk`) into a protocol whose gap is the polynomial of the member gaps.
 *
 * # Safety
 * `protocols` must point to `count` live guess handles; `poly` must be a
 * nul-terminated string and `out_guess` valid.
 */
enum PpccStatus ppcc_compile_polynomial(const struct PpccGuess *const *protocols,
                                        size_t count,
                                        const char *poly,
                                        struct PpccGuess **out_guess);

/**
 * Runs a verification suite. `report` receives the JSON report and `passed`
 * its verdict; a failing suite still returns `Ok`.
 *
 * # Safety
 * `name` must be a nul-terminated string; `report` and `passed` valid.
 */
enum PpccStatus ppcc_verify_suite(const char *name, uint64_t seed, char **report, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPCC_H */
