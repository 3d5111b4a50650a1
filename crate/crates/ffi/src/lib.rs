//! C ABI for the spectral-risk engine.
//!
//! All heap objects cross the boundary as opaque handles with explicit
//! `_free` functions; every fallible call returns an [`SrStatus`] code and
//! leaves a human-readable message retrievable via
//! [`sr_last_error_message`] on the calling thread. The generated header is
//! written to `include/spectral_risk.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use spectral_risk::detrend::{build_curve, DetrendedCurve};
use spectral_risk::ingest::{index_series, parse_prices, IndexedSeries};
use spectral_risk::measures::{build_report, ReportConfig};
use spectral_risk::oracle::verify_curve;
use spectral_risk::spectrum::{
    evaluate_grid, transform_at, EvalOptions, GridSpec, SpectrumGrid, TransformKernel,
};
use spectral_risk::Error;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    SrOk = 0,
    SrInvalidArgument = 1,
    SrParseError = 2,
    SrInvalidSeries = 3,
    SrNoRiskSignal = 4,
    SrOutOfRange = 5,
    SrBudgetExceeded = 6,
    SrIoError = 7,
    SrVerifyFailed = 8,
    SrInternalError = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_from(err: &Error) -> SrStatus {
    match err {
        Error::Parse { .. } => SrStatus::SrParseError,
        Error::InvalidSeries(_) | Error::InvalidSynthSpec(_) => SrStatus::SrInvalidSeries,
        Error::NoRiskSignal => SrStatus::SrNoRiskSignal,
        Error::OutOfSupport { .. }
        | Error::InvalidBand { .. }
        | Error::EmptyBand { .. }
        | Error::InvalidGrid(_)
        | Error::InvalidCutoff(_) => SrStatus::SrOutOfRange,
        Error::WorkBudgetExceeded { .. } => SrStatus::SrBudgetExceeded,
        Error::Io(_) => SrStatus::SrIoError,
    }
}

fn fail(err: Error) -> SrStatus {
    let code = status_from(&err);
    set_error(err.to_string());
    code
}

fn guard(f: impl FnOnce() -> SrStatus) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic".to_string());
            SrStatus::SrInternalError
        }
    }
}

/// Opaque handle: validated, indexed price series.
pub struct SrSeries {
    inner: IndexedSeries,
}

/// Opaque handle: detrended piecewise-exponential curve.
pub struct SrCurve {
    inner: DetrendedCurve,
    kernel: TransformKernel,
}

/// Opaque handle: dense spectrum grid.
pub struct SrSpectrum {
    inner: SpectrumGrid,
}

/// Message for the most recent error on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Parse a UTF-8 buffer in the `YYYY-MM-DD,<close>` input format.
///
/// On success writes a new handle to `out`; the caller owns it and must
/// release it with `sr_series_free`.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_series_parse(
    data: *const c_char,
    len: usize,
    out: *mut *mut SrSeries,
) -> SrStatus {
    guard(|| {
        if data.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return SrStatus::SrInvalidArgument;
        }
        let bytes = unsafe { slice::from_raw_parts(data.cast::<u8>(), len) };
        let text = match std::str::from_utf8(bytes) {
            Ok(t) => t,
            Err(e) => {
                set_error(format!("input is not valid UTF-8: {e}"));
                return SrStatus::SrInvalidArgument;
            }
        };
        match parse_prices(text) {
            Ok(series) => {
                let handle = Box::new(SrSeries {
                    inner: index_series(&series),
                });
                unsafe { *out = Box::into_raw(handle) };
                SrStatus::SrOk
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `series` must be a live handle from `sr_series_parse`, or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_series_free(series: *mut SrSeries) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Number of observations, or 0 for NULL.
///
/// # Safety
/// `series` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_series_len(series: *const SrSeries) -> usize {
    if series.is_null() {
        return 0;
    }
    unsafe { &*series }.inner.len()
}

/// Build the detrended curve for a series.
///
/// # Safety
/// `series` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_curve_build(
    series: *const SrSeries,
    out: *mut *mut SrCurve,
) -> SrStatus {
    guard(|| {
        if series.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return SrStatus::SrInvalidArgument;
        }
        let curve = build_curve(&unsafe { &*series }.inner);
        let kernel = TransformKernel::new(&curve);
        unsafe { *out = Box::into_raw(Box::new(SrCurve { inner: curve, kernel })) };
        SrStatus::SrOk
    })
}

/// # Safety
/// `curve` must be a live handle from `sr_curve_build`, or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_curve_free(curve: *mut SrCurve) {
    if !curve.is_null() {
        drop(unsafe { Box::from_raw(curve) });
    }
}

/// Support length in days (`T = N - 1`), or NaN for NULL.
///
/// # Safety
/// `curve` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_curve_span_days(curve: *const SrCurve) -> f64 {
    if curve.is_null() {
        return f64::NAN;
    }
    unsafe { &*curve }.inner.span_days()
}

/// Exact transform value at one frequency.
///
/// # Safety
/// `curve` must be a live handle; `out_re`/`out_im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_transform_at(
    curve: *const SrCurve,
    omega: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SrStatus {
    guard(|| {
        if curve.is_null() || out_re.is_null() || out_im.is_null() {
            set_error("null pointer argument".into());
            return SrStatus::SrInvalidArgument;
        }
        if !(omega >= 0.0) || !omega.is_finite() {
            set_error(format!("omega must be finite and >= 0, got {omega}"));
            return SrStatus::SrInvalidArgument;
        }
        let v = unsafe { &*curve }.kernel.eval(omega);
        unsafe {
            *out_re = v.re;
            *out_im = v.im;
        }
        SrStatus::SrOk
    })
}

/// Evaluate the dense spectrum grid. `workers == 0` uses all cores.
///
/// # Safety
/// `curve` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_spectrum_compute(
    curve: *const SrCurve,
    omega_max: f64,
    points_per_oscillation: u32,
    workers: usize,
    out: *mut *mut SrSpectrum,
) -> SrStatus {
    guard(|| {
        if curve.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return SrStatus::SrInvalidArgument;
        }
        let curve = unsafe { &*curve };
        let spec = GridSpec {
            omega_max,
            points_per_oscillation,
            span_days: curve.inner.span_days(),
        };
        let opts = EvalOptions {
            workers: if workers == 0 { None } else { Some(workers) },
            ..Default::default()
        };
        match evaluate_grid(&curve.inner, &spec, &opts) {
            Ok(grid) => {
                unsafe { *out = Box::into_raw(Box::new(SrSpectrum { inner: grid })) };
                SrStatus::SrOk
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `spectrum` must be a live handle from `sr_spectrum_compute`, or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_spectrum_free(spectrum: *mut SrSpectrum) {
    if !spectrum.is_null() {
        drop(unsafe { Box::from_raw(spectrum) });
    }
}

/// Number of grid points, or 0 for NULL.
///
/// # Safety
/// `spectrum` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_spectrum_len(spectrum: *const SrSpectrum) -> usize {
    if spectrum.is_null() {
        return 0;
    }
    unsafe { &*spectrum }.inner.len()
}

/// Read one grid point. Any output pointer may be NULL to skip that field.
///
/// # Safety
/// `spectrum` must be a live handle; non-NULL output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_spectrum_point(
    spectrum: *const SrSpectrum,
    index: usize,
    out_omega: *mut f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_abs: *mut f64,
) -> SrStatus {
    guard(|| {
        if spectrum.is_null() {
            set_error("null pointer argument".into());
            return SrStatus::SrInvalidArgument;
        }
        let grid = &unsafe { &*spectrum }.inner;
        if index >= grid.len() {
            set_error(format!("index {index} out of range 0..{}", grid.len()));
            return SrStatus::SrOutOfRange;
        }
        unsafe {
            if !out_omega.is_null() {
                *out_omega = grid.omega(index);
            }
            if !out_re.is_null() {
                *out_re = grid.values()[index].re;
            }
            if !out_im.is_null() {
                *out_im = grid.values()[index].im;
            }
            if !out_abs.is_null() {
                *out_abs = grid.amplitudes()[index];
            }
        }
        SrStatus::SrOk
    })
}

/// Full risk report as a JSON document. The returned string must be released
/// with `sr_string_free`. `workers == 0` uses all cores.
///
/// # Safety
/// `series` must be a live handle, `series_id` a NUL-terminated string, `out`
/// valid.
#[no_mangle]
pub unsafe extern "C" fn sr_report_json(
    series: *const SrSeries,
    series_id: *const c_char,
    omega_max_days: f64,
    points_per_oscillation: u32,
    cut_days: f64,
    workers: usize,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        if series.is_null() || series_id.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return SrStatus::SrInvalidArgument;
        }
        if !(omega_max_days > 0.0) || !(cut_days > 0.0) {
            set_error("omega_max_days and cut_days must be positive".into());
            return SrStatus::SrInvalidArgument;
        }
        let id = match unsafe { CStr::from_ptr(series_id) }.to_str() {
            Ok(s) => s,
            Err(e) => {
                set_error(format!("series_id is not valid UTF-8: {e}"));
                return SrStatus::SrInvalidArgument;
            }
        };
        let config = ReportConfig {
            omega_max: std::f64::consts::TAU / omega_max_days,
            points_per_oscillation,
            omega_cut_days: cut_days,
            eval: EvalOptions {
                workers: if workers == 0 { None } else { Some(workers) },
                ..Default::default()
            },
            ..Default::default()
        };
        match build_report(&unsafe { &*series }.inner, id, &config) {
            Ok(report) => {
                let json = serde_json::to_string_pretty(&report).expect("serializable");
                let c = CString::new(json).expect("no interior NUL in JSON");
                unsafe { *out = c.into_raw() };
                SrStatus::SrOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Check the analytic transform against adaptive quadrature at `samples`
/// random frequencies. Writes the maximum relative deviation to
/// `out_max_deviation` (may be NULL) and returns `SrVerifyFailed` when it
/// exceeds 1e-9.
///
/// # Safety
/// `curve` must be a live handle; `out_max_deviation` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_verify(
    curve: *const SrCurve,
    samples: usize,
    seed: u64,
    out_max_deviation: *mut f64,
) -> SrStatus {
    guard(|| {
        if curve.is_null() {
            set_error("null pointer argument".into());
            return SrStatus::SrInvalidArgument;
        }
        let handle = unsafe { &*curve };
        let outcome = verify_curve(&handle.inner, samples.max(100), seed, |w| {
            handle.kernel.eval(w)
        });
        if !out_max_deviation.is_null() {
            unsafe { *out_max_deviation = outcome.max_deviation };
        }
        if outcome.passed() {
            SrStatus::SrOk
        } else {
            set_error(format!(
                "verification failed: deviation {:.3e} at omega={}",
                outcome.max_deviation, outcome.worst_omega
            ));
            SrStatus::SrVerifyFailed
        }
    })
}

// keep an internal reference so the scalar path stays linked for bindings
// users who only pull the cdylib
#[allow(dead_code)]
fn _scalar_entry(curve: &DetrendedCurve, omega: f64) -> (f64, f64) {
    let v = transform_at(curve, omega);
    (v.re, v.im)
}
