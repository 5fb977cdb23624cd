#ifndef TOWERCALC_H
#define TOWERCALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_UTF8 = 2,
  TC_STATUS_PARSE = 3,
  TC_STATUS_BASIS_MISMATCH = 4,
  TC_STATUS_PRECONDITION = 5,
  TC_STATUS_OVERFLOW = 6,
  TC_STATUS_INTERNAL = 7,
} TcStatus;

/**
 * Opaque handle to a parsed script and its built tower.
 */
typedef struct TcTower TcTower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a tower script and builds every level.
 *
 * # Safety
 * `script` must be a NUL-terminated string; `out` must be writable.
 */
enum TcStatus tc_tower_from_script(const char *script, struct TcTower **out);

/**
 * # Safety
 * `tower` must come from [`tc_tower_from_script`] and not be freed twice.
 */
void tc_tower_free(struct TcTower *tower);

/**
 * Number of levels `X_0 .. X_n`, i.e. blowup steps plus one.
 *
 * # Safety
 * `tower` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_tower_num_levels(const struct TcTower *tower, size_t *out);

/**
 * Rank of `H^{1,1}` (equal to that of `H^{2,2}`) at `level`.
 *
 * # Safety
 * `tower` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_tower_rank(const struct TcTower *tower, size_t level, size_t *out);

/**
 * Evaluates an intersection expression on `level` (negative for the top
 * level). The result is written as a newly allocated string.
 *
 * # Safety
 * `tower` must be a live handle, `expr` NUL-terminated, `out` writable.
 */
enum TcStatus tc_tower_eval(const struct TcTower *tower,
                            int64_t level,
                            const char *expr,
                            char **out);

/**
 * Runs check set 1 or 2 on every step and writes the JSON report.
 * `outcome` receives the CLI exit code: 0 all pass, 2 an assertion is
 * missing, 3 some step fails.
 *
 * # Safety
 * `tower` must be a live handle; `out` and `outcome` must be writable.
 */
enum TcStatus tc_tower_check_json(const struct TcTower *tower,
                                  uint8_t theorem,
                                  char **out,
                                  int32_t *outcome);

/**
 * Characteristic polynomial of the `n x n` row-major matrix `entries`;
 * writes the `n + 1` coefficients, constant term first, to `coeffs`.
 *
 * # Safety
 * `entries` must hold `n * n` values and `coeffs` room for `n + 1`.
 */
enum TcStatus tc_char_poly(const int64_t *entries, size_t n, int64_t *coeffs);

/**
 * Certified spectral radius of the `n x n` row-major matrix `entries`.
 *
 * # Safety
 * `entries` must hold `n * n` values; `value` and `error_bound` writable.
 */
enum TcStatus tc_spectral_radius(const int64_t *entries,
                                 size_t n,
                                 double tol,
                                 double *value,
                                 double *error_bound);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void tc_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *tc_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOWERCALC_H */
