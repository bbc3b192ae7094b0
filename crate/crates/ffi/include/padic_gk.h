#ifndef PADIC_GK_H
#define PADIC_GK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PgkArithOp {
  PGK_ARITH_OP_ADD = 0,
  PGK_ARITH_OP_SUB = 1,
  PGK_ARITH_OP_MUL = 2,
  PGK_ARITH_OP_DIV = 3,
} PgkArithOp;

/**
 * Result of every fallible call.
 */
typedef enum PgkStatus {
  PGK_STATUS_OK = 0,
  PGK_STATUS_NULL_POINTER = 1,
  PGK_STATUS_INVALID_ARGUMENT = 2,
  PGK_STATUS_OUT_OF_SCOPE = 3,
  PGK_STATUS_PARSE = 4,
  PGK_STATUS_PRECISION_EXHAUSTED = 5,
  PGK_STATUS_DIVISION_BY_ZERO = 6,
  PGK_STATUS_COST_BOUND = 7,
  /**
   * An internal consistency check failed.
   */
  PGK_STATUS_INTERNAL = 8,
  PGK_STATUS_PANIC = 9,
} PgkStatus;

/**
 * Opaque protocol report.
 */
typedef struct PgkReport PgkReport;

/**
 * Opaque p-adic scalar.
 */
typedef struct PgkScalar PgkScalar;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pgk_version(void);

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pgk_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pgk_string_free(char *s);

/**
 * Runs the protocol for `p` at `digits` target digits. `gamma_digits = 0`
 * selects the default.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum PgkStatus pgk_protocol_run(uint32_t p,
                                uint32_t digits,
                                uint32_t gamma_digits,
                                bool strict,
                                struct PgkReport **out);

/**
 * Report as pretty-printed JSON; free with [`pgk_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out` valid for writing.
 */
enum PgkStatus pgk_report_json(const struct PgkReport *report, char **out);

/**
 * The report's CSV row (no header); free with [`pgk_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out` valid for writing.
 */
enum PgkStatus pgk_report_csv_row(const struct PgkReport *report, char **out);

/**
 * 0, 2 or 3 as the CLI would exit; -1 for a NULL handle.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
int32_t pgk_report_exit_code(const struct PgkReport *report);

/**
 * # Safety
 * `report` must be NULL or a handle not yet freed.
 */
void pgk_report_free(struct PgkReport *report);

/**
 * `tau(omega^-a)` in the standard convention as the bracketed coordinate
 * text; free with [`pgk_string_free`].
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum PgkStatus pgk_gauss_sum(uint32_t p, uint32_t a, uint32_t digits, char **out);

/**
 * `Gamma_p(num/den)` to `gamma_digits` digits.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum PgkStatus pgk_morita_gamma(uint32_t p,
                                int64_t num,
                                int64_t den,
                                uint32_t gamma_digits,
                                struct PgkScalar **out);

/**
 * `L_p(0, omega^(k+1))` and its derivative for odd `k`.
 *
 * # Safety
 * `value_out` and `deriv_out` must be valid for writing.
 */
enum PgkStatus pgk_lfun(uint32_t p,
                        uint32_t k,
                        uint32_t digits,
                        struct PgkScalar **value_out,
                        struct PgkScalar **deriv_out);

/**
 * Parses the canonical `p^v * u :: t` form (or `0`) for prime `p`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writing.
 */
enum PgkStatus pgk_scalar_parse(const char *text, uint32_t p, struct PgkScalar **out);

/**
 * `a op b` with tracked precision.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` valid for writing.
 */
enum PgkStatus pgk_scalar_arith(const struct PgkScalar *a,
                                const struct PgkScalar *b,
                                enum PgkArithOp op,
                                struct PgkScalar **out);

/**
 * `a * b`.
 *
 * # Safety
 * As for [`pgk_scalar_arith`].
 */
enum PgkStatus pgk_scalar_mul(const struct PgkScalar *a,
                              const struct PgkScalar *b,
                              struct PgkScalar **out);

/**
 * Canonical text; free with [`pgk_string_free`].
 *
 * # Safety
 * `s` must be a live handle and `out` valid for writing.
 */
enum PgkStatus pgk_scalar_to_string(const struct PgkScalar *s, char **out);

/**
 * Writes the valuation, or the floor for a zero-at-precision value, and
 * sets `*is_zero`. The exact zero reports `PrecisionExhausted`.
 *
 * # Safety
 * `s` must be a live handle; `valuation` and `is_zero` valid for writing.
 */
enum PgkStatus pgk_scalar_valuation(const struct PgkScalar *s, int64_t *valuation, bool *is_zero);

/**
 * # Safety
 * `s` must be NULL or a handle not yet freed.
 */
void pgk_scalar_free(struct PgkScalar *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PADIC_GK_H */
