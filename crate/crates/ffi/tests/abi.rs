use std::ffi::{CStr, CString};
use std::ptr;

use ppcc_ffi::*;

fn last_error() -> String {
    let p = ppcc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    ppcc_string_free(s);
    out
}

fn matrix(text: &str) -> *mut PpccMatrix {
    let t = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ppcc_matrix_parse(t.as_ptr(), &mut m) }, PpccStatus::Ok);
    m
}

fn guess(path: &str) -> *mut PpccGuess {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/");
    let t = CString::new(std::fs::read_to_string(format!("{dir}{path}")).unwrap()).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ppcc_guess_parse(t.as_ptr(), &mut g) }, PpccStatus::Ok);
    g
}

#[test]
fn disc_of_had2() {
    let m = matrix("sign 2 2\n+-\n-+\n");
    let (mut rows, mut cols) = (0, 0);
    let mut value = 0.0;
    let mut exact = ptr::null_mut();
    unsafe {
        assert_eq!(ppcc_matrix_shape(m, &mut rows, &mut cols), PpccStatus::Ok);
        assert_eq!(ppcc_disc(m, &mut value, &mut exact), PpccStatus::Ok);
        assert_eq!(take(exact), "1/4");
        assert_eq!(ppcc_disc(m, &mut value, ptr::null_mut()), PpccStatus::Ok);
        ppcc_matrix_free(m);
    }
    assert_eq!((rows, cols), (2, 2));
    assert_eq!(value, 0.25);
}

#[test]
fn mc_of_hadamard() {
    let m = matrix("sign 2 2\n++\n+-\n");
    let mut value = 0.0;
    unsafe {
        assert_eq!(ppcc_mc(m, &mut value), PpccStatus::Ok);
        ppcc_matrix_free(m);
    }
    assert!((value - 2f64.sqrt()).abs() < 1e-6, "{value}");
}

#[test]
fn parse_errors_set_status_and_message() {
    let t = CString::new("sign 2 2\n+-\n").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ppcc_matrix_parse(t.as_ptr(), &mut m) }, PpccStatus::Parse);
    assert!(m.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { ppcc_matrix_parse(ptr::null(), &mut m) }, PpccStatus::NullPointer);
    assert!(last_error().contains("null"));
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { ppcc_matrix_parse(bad.as_ptr().cast(), &mut m) }, PpccStatus::InvalidUtf8);
}

#[test]
fn guess_queries() {
    let x = guess("x.json");
    let (mut gap, mut cost, mut acc) = (0i64, 0u64, false);
    unsafe {
        assert_eq!(ppcc_guess_gap_at(x, 0, 1, &mut gap), PpccStatus::Ok);
        assert_eq!(gap, 2);
        assert_eq!(ppcc_guess_accepts(x, 1, 0, &mut acc), PpccStatus::Ok);
        assert!(!acc);
        assert_eq!(ppcc_guess_pp_cost(x, &mut cost), PpccStatus::Ok);
        assert_eq!(cost, 2);
        assert_eq!(ppcc_guess_gap_at(x, 5, 0, &mut gap), PpccStatus::OutOfDomain);
        let mut json = ptr::null_mut();
        assert_eq!(ppcc_guess_to_json(x, &mut json), PpccStatus::Ok);
        assert!(take(json).contains("\"guesses\""));
        ppcc_guess_free(x);
    }
}

#[test]
fn compile_polynomial() {
    let x = guess("x.json");
    let y = guess("y.json");
    let poly = CString::new("z1*z2 - 2*z1 + 3").unwrap();
    let members = [x as *const PpccGuess, y as *const PpccGuess];
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(ppcc_compile_polynomial(members.as_ptr(), 2, poly.as_ptr(), &mut out), PpccStatus::Ok);
        for (cx, cy, zx, zy) in [(0, 0, 2, -1), (0, 1, 2, 1), (1, 0, 0, -1), (1, 1, 0, 1)] {
            let mut gap = 0;
            assert_eq!(ppcc_guess_gap_at(out, cx, cy, &mut gap), PpccStatus::Ok);
            assert_eq!(gap, zx * zy - 2 * zx + 3);
        }
        let bad = CString::new("z3").unwrap();
        let mut other = ptr::null_mut();
        assert_ne!(ppcc_compile_polynomial(members.as_ptr(), 2, bad.as_ptr(), &mut other), PpccStatus::Ok);
        assert!(other.is_null());
        assert_eq!(
            ppcc_compile_polynomial(ptr::null(), 0, poly.as_ptr(), &mut other),
            PpccStatus::InvalidArgument
        );
        ppcc_guess_free(out);
        ppcc_guess_free(x);
        ppcc_guess_free(y);
    }
}

#[test]
fn verify_suite() {
    let name = CString::new("yao").unwrap();
    let mut report = ptr::null_mut();
    let mut passed = false;
    unsafe {
        assert_eq!(ppcc_verify_suite(name.as_ptr(), 5, &mut report, &mut passed), PpccStatus::Ok);
        let r: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(r["suite"], "yao");
        assert_eq!(r["seed"], 5);
    }
    assert!(passed);
    let name = CString::new("nope").unwrap();
    let status = unsafe { ppcc_verify_suite(name.as_ptr(), 5, &mut report, &mut passed) };
    assert_eq!(status, PpccStatus::InvalidArgument);
    assert!(last_error().contains("unknown suite"));
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(ppcc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
