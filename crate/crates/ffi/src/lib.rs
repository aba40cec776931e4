//! C ABI over `ppcc`: matrices and guess protocols behind opaque handles,
//! measures, polynomial compilation and the verification suites.
//!
//! Every fallible function returns a [`PpccStatus`]; on failure the message
//! is available from [`ppcc_last_error`] on the same thread. Strings returned
//! through out-pointers are owned by the caller and released with
//! [`ppcc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use ppcc::matrix::{parse_matrix, Matrix};
use ppcc::measures::{disc, mc};
use ppcc::poly::{lemma1_compile, parse_polynomial};
use ppcc::protocols::serialize::{guess_to_json, parse_guess};
use ppcc::protocols::GuessProtocol;
use ppcc::randomized::rational_to_f64;
use ppcc::suites::run_suite;
use ppcc::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpccStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Guard = 4,
    InvalidArgument = 5,
    OutOfDomain = 6,
    Infeasible = 7,
    Violation = 8,
    NotConverged = 9,
    Overflow = 10,
    Internal = 11,
}

/// A parsed Boolean or sign matrix.
pub struct PpccMatrix(Matrix);

/// A guess protocol.
pub struct PpccGuess(GuessProtocol);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PpccStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => PpccStatus::Parse,
        Error::Guard(_) => PpccStatus::Guard,
        Error::OutOfDomain { .. } => PpccStatus::OutOfDomain,
        Error::Infeasible(_) | Error::Unbounded(_) => PpccStatus::Infeasible,
        Error::Violation { .. } => PpccStatus::Violation,
        Error::NotConverged(_) => PpccStatus::NotConverged,
        _ => PpccStatus::InvalidArgument,
    }
}

struct Fail(PpccStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PpccStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PpccStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PpccStatus::Internal
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(PpccStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(PpccStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(PpccStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(PpccStatus::NullPointer, format!("{what} is null")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// The message of the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ppcc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ppcc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ppcc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a matrix in the `bool R C` / `sign R C` text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out_matrix` valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_matrix_parse(text: *const c_char, out_matrix: *mut *mut PpccMatrix) -> PpccStatus {
    guard(|| {
        let slot = out(out_matrix, "out_matrix")?;
        let m = parse_matrix(c_str(text, "text")?)?;
        *slot = Box::into_raw(Box::new(PpccMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from [`ppcc_matrix_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn ppcc_matrix_free(m: *mut PpccMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live matrix handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_matrix_shape(m: *const PpccMatrix, rows: *mut usize, cols: *mut usize) -> PpccStatus {
    guard(|| {
        let (r, c) = handle(m, "matrix")?.0.shape();
        *out(rows, "rows")? = r;
        *out(cols, "cols")? = c;
        Ok(())
    })
}

/// Exact discrepancy of the sign view of `m`. `exact` receives the value as
/// a reduced fraction string (may be null to skip).
///
/// # Safety
/// `m` must be a live matrix handle; `value` must be valid; `exact` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_disc(m: *const PpccMatrix, value: *mut f64, exact: *mut *mut c_char) -> PpccStatus {
    guard(|| {
        let m = handle(m, "matrix")?;
        let slot = out(value, "value")?;
        let d = disc(&m.0.as_sign())?;
        *slot = rational_to_f64(&d.value);
        if let Some(e) = exact.as_mut() {
            *e = c_string(d.value.to_string());
        }
        Ok(())
    })
}

/// Margin complexity of the sign view of `m`.
///
/// # Safety
/// `m` must be a live matrix handle and `value` valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_mc(m: *const PpccMatrix, value: *mut f64) -> PpccStatus {
    guard(|| {
        let m = handle(m, "matrix")?;
        let slot = out(value, "value")?;
        *slot = mc(&m.0.as_sign())?.value;
        Ok(())
    })
}

/// Parses a guess protocol from its JSON form.
///
/// # Safety
/// `json` must be a nul-terminated string and `out_guess` valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_guess_parse(json: *const c_char, out_guess: *mut *mut PpccGuess) -> PpccStatus {
    guard(|| {
        let slot = out(out_guess, "out_guess")?;
        let g = parse_guess(c_str(json, "json")?)?;
        *slot = Box::into_raw(Box::new(PpccGuess(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a guess handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ppcc_guess_free(g: *mut PpccGuess) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live guess handle and `json` valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_guess_to_json(g: *const PpccGuess, json: *mut *mut c_char) -> PpccStatus {
    guard(|| {
        let g = handle(g, "guess")?;
        let slot = out(json, "json")?;
        let v = guess_to_json(&g.0)?;
        *slot = c_string(v.to_string());
        Ok(())
    })
}

/// # Safety
/// `g` must be a live guess handle and `cost` valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_guess_pp_cost(g: *const PpccGuess, cost: *mut u64) -> PpccStatus {
    guard(|| {
        let g = handle(g, "guess")?;
        *out(cost, "cost")? = g.0.pp_cost();
        Ok(())
    })
}

/// acc - rej at input (x, y). Fails with `Overflow` when the gap does not fit.
///
/// # Safety
/// `g` must be a live guess handle and `gap` valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_guess_gap_at(g: *const PpccGuess, x: usize, y: usize, gap: *mut i64) -> PpccStatus {
    guard(|| {
        let g = handle(g, "guess")?;
        let slot = out(gap, "gap")?;
        let v = g.0.gap_at(x, y)?;
        *slot = v
            .to_i64()
            .ok_or_else(|| Fail(PpccStatus::Overflow, format!("gap {v} does not fit in 64 bits")))?;
        Ok(())
    })
}

/// PP acceptance at (x, y): 1 when acc > rej, else 0.
///
/// # Safety
/// `g` must be a live guess handle and `accepted` valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_guess_accepts(g: *const PpccGuess, x: usize, y: usize, accepted: *mut bool) -> PpccStatus {
    guard(|| {
        let g = handle(g, "guess")?;
        let slot = out(accepted, "accepted")?;
        *slot = g.0.pp_eval(x, y)?;
        Ok(())
    })
}

/// Compiles `count` protocols through the polynomial `poly` (variables
/// `z1..zk`) into a protocol whose gap is the polynomial of the member gaps.
///
/// # Safety
/// `protocols` must point to `count` live guess handles; `poly` must be a
/// nul-terminated string and `out_guess` valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_compile_polynomial(
    protocols: *const *const PpccGuess,
    count: usize,
    poly: *const c_char,
    out_guess: *mut *mut PpccGuess,
) -> PpccStatus {
    guard(|| {
        let slot = out(out_guess, "out_guess")?;
        if protocols.is_null() || count == 0 {
            return Err(Fail(PpccStatus::InvalidArgument, "at least one protocol is required".into()));
        }
        let members = std::slice::from_raw_parts(protocols, count)
            .iter()
            .map(|&p| handle(p, "protocol").map(|g| g.0.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let p = parse_polynomial(c_str(poly, "poly")?, Some(count))?;
        *slot = Box::into_raw(Box::new(PpccGuess(lemma1_compile(&members, &p)?)));
        Ok(())
    })
}

/// Runs a verification suite. `report` receives the JSON report and `passed`
/// its verdict; a failing suite still returns `Ok`.
///
/// # Safety
/// `name` must be a nul-terminated string; `report` and `passed` valid.
#[no_mangle]
pub unsafe extern "C" fn ppcc_verify_suite(
    name: *const c_char,
    seed: u64,
    report: *mut *mut c_char,
    passed: *mut bool,
) -> PpccStatus {
    guard(|| {
        let name = c_str(name, "name")?;
        let report = out(report, "report")?;
        let passed = out(passed, "passed")?;
        let r = run_suite(name, seed)?;
        *passed = r.passed;
        *report = c_string(r.to_json());
        Ok(())
    })
}
