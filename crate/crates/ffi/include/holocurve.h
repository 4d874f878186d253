#ifndef HOLOCURVE_H
#define HOLOCURVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HcStatus {
  HcStatus_Ok = 0,
  HcStatus_NullPointer = 1,
  HcStatus_InvalidUtf8 = 2,
  HcStatus_Parse = 3,
  HcStatus_Validation = 4,
  HcStatus_Input = 5,
  HcStatus_Budget = 6,
  /**
   * Locus tracing or asymptotic fitting failed.
   */
  HcStatus_Numerical = 7,
  HcStatus_Pole = 8,
  HcStatus_Unsupported = 9,
  HcStatus_Io = 10,
  HcStatus_Panic = 11,
} HcStatus;

/**
 * Opaque curve handle.
 */
typedef struct HcCurve HcCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *hc_last_error_message(void);

/**
 * Parse a TOML curve specification into a new handle.
 *
 * # Safety
 * `toml` must be a nul-terminated string; `out` must be valid for a write.
 */
enum HcStatus hc_curve_from_toml(const char *toml, struct HcCurve **out);

/**
 * # Safety
 * `curve` must be null or a handle from `hc_curve_from_toml` not yet freed.
 */
void hc_curve_free(struct HcCurve *curve);

/**
 * # Safety
 * `curve` must be a live handle; `out` valid for a write.
 */
enum HcStatus hc_curve_n(const struct HcCurve *curve, uintptr_t *out);

/**
 * `u(z) = log ||f(z)||`.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid for a write.
 */
enum HcStatus hc_curve_log_norm(const struct HcCurve *curve, double re, double im, double *out);

/**
 * Fubini-Study derivative `||f'(z)||`.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid for a write.
 */
enum HcStatus hc_curve_spherical_derivative(const struct HcCurve *curve,
                                            double re,
                                            double im,
                                            double *out);

/**
 * `T(r)` by the circle-average route.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid for a write.
 */
enum HcStatus hc_characteristic_jensen(const struct HcCurve *curve,
                                       double r,
                                       double tol,
                                       double *out);

/**
 * `T(r)` by the area route.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid for a write.
 */
enum HcStatus hc_characteristic_area(const struct HcCurve *curve,
                                     double r,
                                     double tol,
                                     double *out);

/**
 * Riesz counting function `n(t)`.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid for a write.
 */
enum HcStatus hc_counting_function(const struct HcCurve *curve, double t, double tol, double *out);

/**
 * `C(n, sigma)` for the given slack.
 */
double hc_theorem_constant(uintptr_t n, double sigma, double epsilon);

/**
 * Bound on the reduced characteristic at radius `r`.
 */
double hc_prop4_bound(uintptr_t n, double sigma, double k, double r);

/**
 * Green function of the unit disc.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum HcStatus hc_green_disc(double z_re, double z_im, double zeta_re, double zeta_im, double *out);

/**
 * Run every bound check on `radii[0..len]` and return the report as JSON.
 * Free the string with `hc_string_free`.
 *
 * # Safety
 * `curve` must be a live handle, `radii` valid for `len` reads, `out`
 * valid for a write.
 */
enum HcStatus hc_verify_theorem_json(const struct HcCurve *curve,
                                     const double *radii,
                                     uintptr_t len,
                                     double epsilon,
                                     char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void hc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLOCURVE_H */
