#ifndef SPECTRAL_RISK_H
#define SPECTRAL_RISK_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum SrStatus {
  SR_OK = 0,
  SR_INVALID_ARGUMENT = 1,
  SR_PARSE_ERROR = 2,
  SR_INVALID_SERIES = 3,
  SR_NO_RISK_SIGNAL = 4,
  SR_OUT_OF_RANGE = 5,
  SR_BUDGET_EXCEEDED = 6,
  SR_IO_ERROR = 7,
  SR_VERIFY_FAILED = 8,
  SR_INTERNAL_ERROR = 9,
} SrStatus;

// Opaque handle: detrended piecewise-exponential curve.
typedef struct SrCurve SrCurve;

// Opaque handle: validated, indexed price series.
typedef struct SrSeries SrSeries;

// Opaque handle: dense spectrum grid.
typedef struct SrSpectrum SrSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent error on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *sr_last_error_message(void);

// Parse a UTF-8 buffer in the `YYYY-MM-DD,<close>` input format.
//
// On success writes a new handle to `out`; the caller owns it and must
// release it with `sr_series_free`.
//
// # Safety
// `data` must point to `len` readable bytes and `out` must be a valid
// pointer.
enum SrStatus sr_series_parse(const char *data, size_t len, struct SrSeries **out);

// # Safety
// `series` must be a live handle from `sr_series_parse`, or NULL.
void sr_series_free(struct SrSeries *series);

// Number of observations, or 0 for NULL.
//
// # Safety
// `series` must be a live handle or NULL.
size_t sr_series_len(const struct SrSeries *series);

// Build the detrended curve for a series.
//
// # Safety
// `series` must be a live handle; `out` must be valid.
enum SrStatus sr_curve_build(const struct SrSeries *series, struct SrCurve **out);

// # Safety
// `curve` must be a live handle from `sr_curve_build`, or NULL.
void sr_curve_free(struct SrCurve *curve);

// Support length in days (`T = N - 1`), or NaN for NULL.
//
// # Safety
// `curve` must be a live handle or NULL.
double sr_curve_span_days(const struct SrCurve *curve);

// Exact transform value at one frequency.
//
// # Safety
// `curve` must be a live handle; `out_re`/`out_im` must be valid.
enum SrStatus sr_transform_at(const struct SrCurve *curve,
                              double omega,
                              double *out_re,
                              double *out_im);

// Evaluate the dense spectrum grid. `workers == 0` uses all cores.
//
// # Safety
// `curve` must be a live handle; `out` must be valid.
enum SrStatus sr_spectrum_compute(const struct SrCurve *curve,
                                  double omega_max,
                                  uint32_t points_per_oscillation,
                                  size_t workers,
                                  struct SrSpectrum **out);

// # Safety
// `spectrum` must be a live handle from `sr_spectrum_compute`, or NULL.
void sr_spectrum_free(struct SrSpectrum *spectrum);

// Number of grid points, or 0 for NULL.
//
// # Safety
// `spectrum` must be a live handle or NULL.
size_t sr_spectrum_len(const struct SrSpectrum *spectrum);

// Read one grid point. Any output pointer may be NULL to skip that field.
//
// # Safety
// `spectrum` must be a live handle; non-NULL output pointers must be valid.
enum SrStatus sr_spectrum_point(const struct SrSpectrum *spectrum,
                                size_t index,
                                double *out_omega,
                                double *out_re,
                                double *out_im,
                                double *out_abs);

// Full risk report as a JSON document. The returned string must be released
// with `sr_string_free`. `workers == 0` uses all cores.
//
// # Safety
// `series` must be a live handle, `series_id` a NUL-terminated string, `out`
// valid.
enum SrStatus sr_report_json(const struct SrSeries *series,
                             const char *series_id,
                             double omega_max_days,
                             uint32_t points_per_oscillation,
                             double cut_days,
                             size_t workers,
                             char **out);

// Release a string returned by this library.
//
// # Safety
// `s` must come from this library, or be NULL.
void sr_string_free(char *s);

// Check the analytic transform against adaptive quadrature at `samples`
// random frequencies. Writes the maximum relative deviation to
// `out_max_deviation` (may be NULL) and returns `SrVerifyFailed` when it
// exceeds 1e-9.
//
// # Safety
// `curve` must be a live handle; `out_max_deviation` valid or NULL.
enum SrStatus sr_verify(const struct SrCurve *curve,
                        size_t samples,
                        uint64_t seed,
                        double *out_max_deviation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAL_RISK_H */
