//! C interface to `phimod`.
//!
//! Modules and reports are opaque handles owned by the caller and released
//! with the matching `*_free`. Every fallible call returns a `PhimodStatus`;
//! on failure `phimod_last_error_message` describes the error for the
//! calling thread. Strings returned through `char **` are released with
//! `phimod_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use phimod::classify::{classify, is_simple, JHReport};
use phimod::module::{make_standard, PhiModule};
use phimod::rb::rb_reduce;
use phimod::{Error, FieldConfig};

/// Opaque etale phi-module.
pub struct PhimodModule(PhiModule);

/// Opaque classification report.
pub struct PhimodReport(JHReport);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhimodStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidInput = 4,
    PrecisionExhausted = 5,
    NotEtale = 6,
    FieldError = 7,
    ConditionsFail = 8,
    BoundViolated = 9,
    SearchExceeded = 10,
    Overflow = 11,
    DenominatorNotPrimeToB = 12,
    Internal = 13,
    Panic = 14,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PhimodStatus {
    use PhimodStatus as S;
    match e {
        Error::PrecisionExhausted(_) => S::PrecisionExhausted,
        Error::NotEtale | Error::SingularP => S::NotEtale,
        Error::CompositeP(_)
        | Error::ReducibleModulus(_)
        | Error::BadTwist(_)
        | Error::BadDegree
        | Error::FieldTooLarge(_)
        | Error::FieldTooSmall(_)
        | Error::NoSolutionWithinBound(_) => S::FieldError,
        Error::SigmaIsIdentity
        | Error::SigmaNotIdentity
        | Error::ConditionsFail(_)
        | Error::RatioMismatch
        | Error::TNotCoprimeToP(_)
        | Error::TNotP(_)
        | Error::ANotOne
        | Error::ZeroA
        | Error::MismatchedSigmaMode => S::ConditionsFail,
        Error::BoundViolated { .. } => S::BoundViolated,
        Error::StateSpaceExceeded(_) => S::SearchExceeded,
        Error::Overflow(_) => S::Overflow,
        Error::DenominatorNotPrimeToB(..) | Error::ZeroDenominator => S::DenominatorNotPrimeToB,
        Error::InvalidInput(_) => S::InvalidInput,
        Error::Internal(_) => S::Internal,
    }
}

fn fail(e: Error) -> PhimodStatus {
    set_error(format!("{}: {e}", e.code()));
    status_of(&e)
}

/// Runs `f`, converting panics into `PhimodStatus::Panic`.
fn guard(f: impl FnOnce() -> PhimodStatus + std::panic::UnwindSafe) -> PhimodStatus {
    match std::panic::catch_unwind(f) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside phimod".into());
            PhimodStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PhimodStatus> {
    if s.is_null() {
        set_error("null string argument".into());
        return Err(PhimodStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not UTF-8".into());
        PhimodStatus::InvalidUtf8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> PhimodStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return PhimodStatus::NullPointer;
    }
    *out = CString::new(s).expect("JSON has no NUL bytes").into_raw();
    PhimodStatus::Ok
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn phimod_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn phimod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a module from interchange JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn phimod_module_from_json(json: *const c_char, out: *mut *mut PhimodModule) -> PhimodStatus {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null output pointer".into());
            return PhimodStatus::NullPointer;
        }
        let v: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => {
                set_error(format!("invalid JSON: {e}"));
                return PhimodStatus::InvalidJson;
            }
        };
        match PhiModule::from_json(&v) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(PhimodModule(m)));
                PhimodStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `D(d, n, a)` over `F_{p^m}` with `sigma = Frob^s` and twist `b`; `a` is given
/// by `a_len` coefficients over `F_p`, constant term first.
///
/// # Safety
/// `a` must point to `a_len` readable integers and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn phimod_make_standard(
    p: u32,
    m: u32,
    s: u32,
    b: u64,
    d: usize,
    n: i64,
    a: *const u32,
    a_len: usize,
    out: *mut *mut PhimodModule,
) -> PhimodStatus {
    guard(|| {
        if out.is_null() || (a.is_null() && a_len > 0) {
            set_error("null pointer argument".into());
            return PhimodStatus::NullPointer;
        }
        let coeffs = if a_len == 0 { &[][..] } else { std::slice::from_raw_parts(a, a_len) };
        let built = FieldConfig::new(p, m, s, b, None)
            .and_then(|cfg| cfg.field().from_coeffs(coeffs).map(|x| (cfg, x)))
            .and_then(|(cfg, x)| make_standard(&cfg, d, n, x));
        match built {
            Ok(std) => {
                *out = Box::into_raw(Box::new(PhimodModule(std.module)));
                PhimodStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `m` must be NULL or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn phimod_module_free(m: *mut PhimodModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of the module; 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn phimod_module_dim(m: *const PhimodModule) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// Valuation of `det G`; -1 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn phimod_module_gamma(m: *const PhimodModule) -> i64 {
    m.as_ref().map_or(-1, |m| m.0.gamma())
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn phimod_module_to_json(m: *const PhimodModule, out: *mut *mut c_char) -> PhimodStatus {
    guard(|| match m.as_ref() {
        Some(m) => write_string(out, m.0.to_json().to_string()),
        None => {
            set_error("null module".into());
            PhimodStatus::NullPointer
        }
    })
}

/// Jordan-Holder constituents at working precision `precision` (at least 8).
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn phimod_classify(
    m: *const PhimodModule,
    precision: i64,
    out: *mut *mut PhimodReport,
) -> PhimodStatus {
    guard(|| {
        let Some(m) = m.as_ref() else {
            set_error("null module".into());
            return PhimodStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer".into());
            return PhimodStatus::NullPointer;
        }
        if precision < 8 {
            return fail(Error::InvalidInput(format!("precision {precision} is below 8")));
        }
        match classify(&m.0, precision) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(PhimodReport(r)));
                PhimodStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn phimod_is_simple(m: *const PhimodModule, precision: i64, out: *mut bool) -> PhimodStatus {
    guard(|| {
        let Some(m) = m.as_ref() else {
            set_error("null module".into());
            return PhimodStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer".into());
            return PhimodStatus::NullPointer;
        }
        if precision < 8 {
            return fail(Error::InvalidInput(format!("precision {precision} is below 8")));
        }
        match is_simple(&m.0, precision) {
            Ok((s, _)) => {
                *out = s;
                PhimodStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must be NULL or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn phimod_report_free(r: *mut PhimodReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of distinct constituents; 0 for NULL.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn phimod_report_constituent_count(r: *const PhimodReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.constituents.len())
}

/// Sum of multiplicity times length over the constituents; 0 for NULL.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn phimod_report_total_dim(r: *const PhimodReport) -> u64 {
    r.as_ref().map_or(0, |r| r.0.total_dim())
}

/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn phimod_report_to_json(r: *const PhimodReport, out: *mut *mut c_char) -> PhimodStatus {
    guard(|| match r.as_ref() {
        Some(r) => write_string(out, r.0.to_json().to_string()),
        None => {
            set_error("null report".into());
            PhimodStatus::NullPointer
        }
    })
}

/// Canonical class of `num/den` in `R_b` as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn phimod_rb_reduce(num: i64, den: i64, b: u64, out: *mut *mut c_char) -> PhimodStatus {
    guard(|| match rb_reduce(num, den, b) {
        Ok(r) => write_string(out, r.to_json().to_string()),
        Err(e) => fail(e),
    })
}
