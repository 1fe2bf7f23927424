#ifndef HEAT_ANSATZ_H
#define HEAT_ANSATZ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum HaStatus {
  HA_STATUS_OK = 0,
  HA_STATUS_NULL_POINTER = 1,
  HA_STATUS_INVALID_UTF8 = 2,
  HA_STATUS_PARSE = 3,
  HA_STATUS_DOMAIN = 4,
  HA_STATUS_OUT_OF_RANGE = 5,
  HA_STATUS_PANIC = 6,
} HaStatus;

/**
 * Variable family of a polynomial.
 */
typedef enum HaFamily {
  /**
   * jets `y_k = h^(k-1)`
   */
  HA_FAMILY_Y = 0,
  /**
   * ansatz parameters `x_2, x_3, …`
   */
  HA_FAMILY_X = 1,
  /**
   * jet polynomials `D_1, D_2, …`
   */
  HA_FAMILY_D = 2,
} HaFamily;

/**
 * Opaque polynomial with exact rational coefficients.
 */
typedef struct HaPoly HaPoly;

/**
 * Opaque series solution together with its Cole–Hopf image.
 */
typedef struct HaSeries HaSeries;

/**
 * Opaque coefficient table `Φ_0..Φ_q`.
 */
typedef struct HaTable HaTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL terminated,
 * truncated to `len`). Returns the full message length, 0 if there is none.
 */
size_t ha_last_error(char *buf, size_t len);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void ha_string_free(char *s);

enum HaStatus ha_poly_parse(const char *src, enum HaFamily family, struct HaPoly **result);

/**
 * `D_k` as a polynomial in the jets, `k ≥ 1`.
 */
enum HaStatus ha_poly_dk(uint32_t k, struct HaPoly **result);

/**
 * Text form of a polynomial; release with [`ha_string_free`].
 */
enum HaStatus ha_poly_to_string(const struct HaPoly *p, char **result);

/**
 * JSON form of a polynomial; release with [`ha_string_free`].
 */
enum HaStatus ha_poly_to_json(const struct HaPoly *p, char **result);

/**
 * Evaluates at `point[0..len]` (values of the variables in order).
 */
enum HaStatus ha_poly_eval(const struct HaPoly *p, const double *point, size_t len, double *result);

void ha_poly_free(struct HaPoly *p);

/**
 * Coefficient table of the reduced n-ansatz with top polynomial `pn`
 * (in `x_2..x_n`), parity `delta`, entries `0..=q_max`.
 */
enum HaStatus ha_table_reduced(uint32_t n,
                               uint32_t delta,
                               const char *pn,
                               uint32_t q_max,
                               struct HaTable **result);

size_t ha_table_len(const struct HaTable *t);

/**
 * Copy of entry `k`; free it with [`ha_poly_free`].
 */
enum HaStatus ha_table_entry(const struct HaTable *t, size_t k, struct HaPoly **result);

void ha_table_free(struct HaTable *t);

/**
 * Series solution of the reduced n-ansatz for a rational profile given by
 * `poles` (`"a:b,c:d"`), constant `r0` (rational text), truncated after `order` terms.
 */
enum HaStatus ha_series_new(uint32_t n,
                            uint32_t delta,
                            const char *pn,
                            const char *poles,
                            const char *r0,
                            uint32_t order,
                            struct HaSeries **result);

/**
 * `ψ(z, t)`.
 */
enum HaStatus ha_series_eval(const struct HaSeries *s, double z, double t, double *result);

/**
 * Cole–Hopf image `w(z, t)` solving `w_t + w w_z = μ w_zz`; `mu` is rational text.
 */
enum HaStatus ha_series_burgers_eval(const struct HaSeries *s,
                                     const char *mu,
                                     double z,
                                     double t,
                                     double *result);

/**
 * Sets `*is_zero` to 1 when the exact heat residual vanishes at every time
 * in `times` (comma-separated rationals), else 0.
 */
enum HaStatus ha_series_heat_residual_is_zero(const struct HaSeries *s,
                                              const char *times,
                                              int32_t *is_zero);

void ha_series_free(struct HaSeries *s);

/**
 * Runs a self-check suite (`operators`, `ansatz`, `dynsys`, `solution` or
 * `all`); `*failed` receives the number of failing checks.
 */
enum HaStatus ha_verify(const char *suite, uint32_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEAT_ANSATZ_H */
