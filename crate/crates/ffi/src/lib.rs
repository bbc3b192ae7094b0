//! C ABI for `padic-gk`.
//!
//! Every fallible function returns a [`PgkStatus`] and writes its result
//! through an out-pointer. On failure a message is available from
//! [`pgk_last_error`] on the calling thread. Handles and strings returned by
//! the library are released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use padic_gk::engine::{run_protocol, ProtocolConfig, VerificationReport};
use padic_gk::lfun::{bernoulli_for, kubota_leopoldt, DirichletCharacter};
use padic_gk::padic::{ArithOp, PadicScalar, PrecisionPolicy};
use padic_gk::special::{
    gamma_at_ratio, gauss_sum, GaussConvention, TeichmullerTable, DEFAULT_COST_LIMIT,
};
use padic_gk::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfScope = 3,
    Parse = 4,
    PrecisionExhausted = 5,
    DivisionByZero = 6,
    CostBound = 7,
    /// An internal consistency check failed.
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgkArithOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
}

/// Opaque protocol report.
pub struct PgkReport {
    report: VerificationReport,
}

/// Opaque p-adic scalar.
pub struct PgkScalar {
    value: PadicScalar,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PgkStatus {
    match e {
        Error::InvalidPrime(_)
        | Error::InvalidArgument(_)
        | Error::PrimeMismatch(..)
        | Error::Io(_) => PgkStatus::InvalidArgument,
        Error::OutOfScope(_) => PgkStatus::OutOfScope,
        Error::Parse(_) => PgkStatus::Parse,
        Error::PrecisionExhausted(_) => PgkStatus::PrecisionExhausted,
        Error::DivisionByZero => PgkStatus::DivisionByZero,
        Error::CostBound(_) => PgkStatus::CostBound,
        _ => PgkStatus::Internal,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> PgkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PgkStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            PgkStatus::NullPointer
        }
        Err(_) => {
            set_error("panic inside padic-gk");
            PgkStatus::Panic
        }
    }
}

fn non_null<T>(p: *mut T, what: &'static str) -> Result<*mut T, Failure> {
    if p.is_null() {
        Err(Failure::Null(what))
    } else {
        Ok(p)
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn boxed_scalar(out: *mut *mut PgkScalar, value: PadicScalar) {
    *out = Box::into_raw(Box::new(PgkScalar { value }));
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pgk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pgk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pgk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the protocol for `p` at `digits` target digits. `gamma_digits = 0`
/// selects the default.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn pgk_protocol_run(
    p: u32,
    digits: u32,
    gamma_digits: u32,
    strict: bool,
    out: *mut *mut PgkReport,
) -> PgkStatus {
    guard(|| {
        let out = non_null(out, "out")?;
        let mut cfg = ProtocolConfig::new(p, digits);
        cfg.gamma_digits = (gamma_digits > 0).then_some(gamma_digits);
        cfg.strict = strict;
        let report = run_protocol(&cfg)?;
        *out = Box::into_raw(Box::new(PgkReport { report }));
        Ok(())
    })
}

/// Report as pretty-printed JSON; free with [`pgk_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pgk_report_json(
    report: *const PgkReport,
    out: *mut *mut c_char,
) -> PgkStatus {
    guard(|| {
        let r = non_null(report as *mut PgkReport, "report")?;
        let out = non_null(out, "out")?;
        *out = to_c_string((*r).report.to_json());
        Ok(())
    })
}

/// The report's CSV row (no header); free with [`pgk_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pgk_report_csv_row(
    report: *const PgkReport,
    out: *mut *mut c_char,
) -> PgkStatus {
    guard(|| {
        let r = non_null(report as *mut PgkReport, "report")?;
        let out = non_null(out, "out")?;
        *out = to_c_string((*r).report.csv_row());
        Ok(())
    })
}

/// 0, 2 or 3 as the CLI would exit; -1 for a NULL handle.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pgk_report_exit_code(report: *const PgkReport) -> i32 {
    if report.is_null() {
        return -1;
    }
    (*report).report.exit_code()
}

/// # Safety
/// `report` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pgk_report_free(report: *mut PgkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// `tau(omega^-a)` in the standard convention as the bracketed coordinate
/// text; free with [`pgk_string_free`].
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pgk_gauss_sum(
    p: u32,
    a: u32,
    digits: u32,
    out: *mut *mut c_char,
) -> PgkStatus {
    guard(|| {
        let out = non_null(out, "out")?;
        let policy = PrecisionPolicy::new(p, digits)?;
        let teich = TeichmullerTable::new(&policy)?;
        let tau = gauss_sum(a, GaussConvention::Standard, &teich)?;
        *out = to_c_string(tau.truncate(digits.max(1)).to_string());
        Ok(())
    })
}

/// `Gamma_p(num/den)` to `gamma_digits` digits.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pgk_morita_gamma(
    p: u32,
    num: i64,
    den: i64,
    gamma_digits: u32,
    out: *mut *mut PgkScalar,
) -> PgkStatus {
    guard(|| {
        let out = non_null(out, "out")?;
        let policy = PrecisionPolicy::new(p, gamma_digits.max(1))?;
        let g = gamma_at_ratio(num, den, gamma_digits, &policy, DEFAULT_COST_LIMIT)?;
        boxed_scalar(out, g);
        Ok(())
    })
}

/// `L_p(0, omega^(k+1))` and its derivative for odd `k`.
///
/// # Safety
/// `value_out` and `deriv_out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pgk_lfun(
    p: u32,
    k: u32,
    digits: u32,
    value_out: *mut *mut PgkScalar,
    deriv_out: *mut *mut PgkScalar,
) -> PgkStatus {
    guard(|| {
        let value_out = non_null(value_out, "value_out")?;
        let deriv_out = non_null(deriv_out, "deriv_out")?;
        let policy = PrecisionPolicy::new(p, digits)?;
        let chi = DirichletCharacter::new(p, k as i64)?;
        if k + 1 >= p {
            return Err(
                Error::InvalidArgument(format!("exponent {k} outside 1..{}", p - 2)).into(),
            );
        }
        let teich = TeichmullerTable::new(&policy)?;
        let bern = bernoulli_for(p, policy.working());
        let jet = kubota_leopoldt(&chi, &teich, &bern, &policy)?;
        boxed_scalar(value_out, jet.value.truncate(digits));
        boxed_scalar(deriv_out, jet.deriv.truncate(digits));
        Ok(())
    })
}

/// Parses the canonical `p^v * u :: t` form (or `0`) for prime `p`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pgk_scalar_parse(
    text: *const c_char,
    p: u32,
    out: *mut *mut PgkScalar,
) -> PgkStatus {
    guard(|| {
        let text = non_null(text as *mut c_char, "text")?;
        let out = non_null(out, "out")?;
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Error::Parse("text is not UTF-8".into()))?;
        boxed_scalar(out, PadicScalar::parse(s, p)?);
        Ok(())
    })
}

/// `a op b` with tracked precision.
///
/// # Safety
/// `a` and `b` must be live handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pgk_scalar_arith(
    a: *const PgkScalar,
    b: *const PgkScalar,
    op: PgkArithOp,
    out: *mut *mut PgkScalar,
) -> PgkStatus {
    guard(|| {
        let a = non_null(a as *mut PgkScalar, "a")?;
        let b = non_null(b as *mut PgkScalar, "b")?;
        let out = non_null(out, "out")?;
        let op = match op {
            PgkArithOp::Add => ArithOp::Add,
            PgkArithOp::Sub => ArithOp::Sub,
            PgkArithOp::Mul => ArithOp::Mul,
            PgkArithOp::Div => ArithOp::Div,
        };
        boxed_scalar(out, (*a).value.arith(&(*b).value, op)?);
        Ok(())
    })
}

/// `a * b`.
///
/// # Safety
/// As for [`pgk_scalar_arith`].
#[no_mangle]
pub unsafe extern "C" fn pgk_scalar_mul(
    a: *const PgkScalar,
    b: *const PgkScalar,
    out: *mut *mut PgkScalar,
) -> PgkStatus {
    pgk_scalar_arith(a, b, PgkArithOp::Mul, out)
}

/// Canonical text; free with [`pgk_string_free`].
///
/// # Safety
/// `s` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pgk_scalar_to_string(
    s: *const PgkScalar,
    out: *mut *mut c_char,
) -> PgkStatus {
    guard(|| {
        let s = non_null(s as *mut PgkScalar, "scalar")?;
        let out = non_null(out, "out")?;
        *out = to_c_string((*s).value.to_string());
        Ok(())
    })
}

/// Writes the valuation, or the floor for a zero-at-precision value, and
/// sets `*is_zero`. The exact zero reports `PrecisionExhausted`.
///
/// # Safety
/// `s` must be a live handle; `valuation` and `is_zero` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pgk_scalar_valuation(
    s: *const PgkScalar,
    valuation: *mut i64,
    is_zero: *mut bool,
) -> PgkStatus {
    guard(|| {
        let s = non_null(s as *mut PgkScalar, "scalar")?;
        let valuation = non_null(valuation, "valuation")?;
        let is_zero = non_null(is_zero, "is_zero")?;
        let v = &(*s).value;
        *valuation = v
            .floor()
            .ok_or_else(|| Error::PrecisionExhausted("the exact zero has no valuation".into()))?;
        *is_zero = v.is_zero();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pgk_scalar_free(s: *mut PgkScalar) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
