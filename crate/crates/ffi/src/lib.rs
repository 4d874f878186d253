//! C ABI over `holocurve`.
//!
//! Curves live behind the opaque `HcCurve` handle. Every fallible call
//! returns an `HcStatus`; on failure the message is available from
//! `hc_last_error_message` on the same thread. Strings returned by the
//! library are released with `hc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use holocurve::bound::{prop4_bound, theorem_constant, verify_theorem};
use holocurve::characteristic::{characteristic_area, characteristic_jensen, counting_function};
use holocurve::cli::parse_curve;
use holocurve::lemmas::green_disc;
use holocurve::{Error, HolomorphicCurve};
use num_complex::Complex64;

/// Opaque curve handle.
pub struct HcCurve {
    inner: HolomorphicCurve,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Input = 5,
    Budget = 6,
    /// Locus tracing or asymptotic fitting failed.
    Numerical = 7,
    Pole = 8,
    Unsupported = 9,
    Io = 10,
    Panic = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HcStatus {
    match e {
        Error::Validation(_) => HcStatus::Validation,
        Error::Parse { .. } => HcStatus::Parse,
        Error::Budget { .. } => HcStatus::Budget,
        Error::LocusEmpty | Error::Continuation { .. } | Error::Asymptotics { .. } => HcStatus::Numerical,
        Error::Input(_) => HcStatus::Input,
        Error::Pole(_) => HcStatus::Pole,
        Error::Unsupported(_) => HcStatus::Unsupported,
        Error::Io(_) => HcStatus::Io,
    }
}

/// Run `body`, mapping errors and panics to a status and the thread's last
/// error message.
fn guard<F: FnOnce() -> Result<(), (HcStatus, String)>>(body: F) -> HcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside holocurve".into());
            HcStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (HcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (HcStatus, String) {
    (HcStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to a live `HcCurve`.
unsafe fn curve_ref<'a>(p: *const HcCurve) -> Result<&'a HolomorphicCurve, (HcStatus, String)> {
    p.as_ref().map(|c| &c.inner).ok_or_else(|| null("curve"))
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (HcStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a TOML curve specification into a new handle.
///
/// # Safety
/// `toml` must be a nul-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hc_curve_from_toml(toml: *const c_char, out: *mut *mut HcCurve) -> HcStatus {
    guard(|| {
        if toml.is_null() {
            return Err(null("toml"));
        }
        let text = CStr::from_ptr(toml)
            .to_str()
            .map_err(|e| (HcStatus::InvalidUtf8, e.to_string()))?;
        let curve = parse_curve(text).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(HcCurve { inner: curve })))
    })
}

/// # Safety
/// `curve` must be null or a handle from `hc_curve_from_toml` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_curve_free(curve: *mut HcCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// # Safety
/// `curve` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hc_curve_n(curve: *const HcCurve, out: *mut usize) -> HcStatus {
    guard(|| write_out(out, curve_ref(curve)?.n()))
}

/// `u(z) = log ||f(z)||`.
///
/// # Safety
/// `curve` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hc_curve_log_norm(curve: *const HcCurve, re: f64, im: f64, out: *mut f64) -> HcStatus {
    guard(|| write_out(out, curve_ref(curve)?.log_norm_u(Complex64::new(re, im))))
}

/// Fubini-Study derivative `||f'(z)||`.
///
/// # Safety
/// `curve` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hc_curve_spherical_derivative(
    curve: *const HcCurve,
    re: f64,
    im: f64,
    out: *mut f64,
) -> HcStatus {
    guard(|| write_out(out, curve_ref(curve)?.spherical_derivative(Complex64::new(re, im))))
}

/// `T(r)` by the circle-average route.
///
/// # Safety
/// `curve` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hc_characteristic_jensen(curve: *const HcCurve, r: f64, tol: f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let v = characteristic_jensen(curve_ref(curve)?, r, tol).map_err(lib_err)?;
        write_out(out, v)
    })
}

/// `T(r)` by the area route.
///
/// # Safety
/// `curve` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hc_characteristic_area(curve: *const HcCurve, r: f64, tol: f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let v = characteristic_area(curve_ref(curve)?, r, tol).map_err(lib_err)?;
        write_out(out, v)
    })
}

/// Riesz counting function `n(t)`.
///
/// # Safety
/// `curve` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hc_counting_function(curve: *const HcCurve, t: f64, tol: f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let v = counting_function(curve_ref(curve)?, t, tol).map_err(lib_err)?;
        write_out(out, v)
    })
}

/// `C(n, sigma)` for the given slack.
#[no_mangle]
pub extern "C" fn hc_theorem_constant(n: usize, sigma: f64, epsilon: f64) -> f64 {
    theorem_constant(n, sigma, epsilon)
}

/// Bound on the reduced characteristic at radius `r`.
#[no_mangle]
pub extern "C" fn hc_prop4_bound(n: usize, sigma: f64, k: f64, r: f64) -> f64 {
    prop4_bound(n, sigma, k, r)
}

/// Green function of the unit disc.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hc_green_disc(z_re: f64, z_im: f64, zeta_re: f64, zeta_im: f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let g = green_disc(Complex64::new(z_re, z_im), Complex64::new(zeta_re, zeta_im)).map_err(lib_err)?;
        write_out(out, g)
    })
}

/// Run every bound check on `radii[0..len]` and return the report as JSON.
/// Free the string with `hc_string_free`.
///
/// # Safety
/// `curve` must be a live handle, `radii` valid for `len` reads, `out`
/// valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hc_verify_theorem_json(
    curve: *const HcCurve,
    radii: *const f64,
    len: usize,
    epsilon: f64,
    out: *mut *mut c_char,
) -> HcStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        if radii.is_null() && len > 0 {
            return Err(null("radii"));
        }
        let grid = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(radii, len)
        };
        let json = verify_theorem(c, grid, epsilon).to_json();
        let s = CString::new(json).map_err(|e| (HcStatus::Panic, e.to_string()))?;
        write_out(out, s.into_raw())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
