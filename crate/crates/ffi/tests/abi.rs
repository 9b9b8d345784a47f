use std::ffi::{CStr, CString};
use std::ptr;

use chiralis_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = chiralis_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn weil_handle_life_cycle() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(chiralis_weil_new(c("t1").as_ptr(), &mut h), ChiralisStatus::Ok);
        let mut n = 0;
        assert_eq!(chiralis_weil_generator_count(h, &mut n), ChiralisStatus::Ok);
        assert_eq!(n, 4);

        let mut s = ptr::null_mut();
        assert_eq!(chiralis_weil_eval(h, c("(b{1} @0 c{1})").as_ptr(), &mut s), ChiralisStatus::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "1");
        chiralis_string_free(s);

        let mut dim = 0;
        assert_eq!(chiralis_weil_basic_dim_h(h, 2, 1, &mut dim), ChiralisStatus::Ok);
        assert_eq!(dim, 1);
        assert_eq!(chiralis_weil_basic_dim_h(h, 1, 1, &mut dim), ChiralisStatus::Ok);
        assert_eq!(dim, 0);
        chiralis_weil_free(h);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(chiralis_weil_new(c("e8-but-not").as_ptr(), &mut h), ChiralisStatus::InvalidInput);
        assert!(h.is_null());
        assert_eq!(chiralis_weil_new(ptr::null(), &mut h), ChiralisStatus::NullArgument);

        assert_eq!(chiralis_weil_new(c("t1").as_ptr(), &mut h), ChiralisStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(chiralis_weil_eval(h, c("b{1} + nope").as_ptr(), &mut s), ChiralisStatus::InvalidInput);
        assert!(last_error().contains("nope"), "{}", last_error());
        assert_eq!(chiralis_weil_eval(h, c("b{1} + gamma{1}").as_ptr(), &mut s), ChiralisStatus::GradeError);
        assert!(s.is_null());
        chiralis_weil_free(h);

        let mut passed = -1;
        let st = chiralis_verify_linear_rep(c("t1").as_ptr(), c("fundamental").as_ptr(), false, &mut passed);
        assert_eq!(st, ChiralisStatus::HypothesisFailed);
        assert_eq!(passed, -1);
    }
}

#[test]
fn linear_rep_passes_through_the_abi() {
    for bc in [false, true] {
        let mut passed = 0;
        let st = unsafe { chiralis_verify_linear_rep(c("sl2").as_ptr(), c("fundamental").as_ptr(), bc, &mut passed) };
        assert_eq!(st, ChiralisStatus::Ok);
        assert_eq!(passed, 1);
    }
}

#[test]
fn header_declares_the_api() {
    let h = include_str!("../include/chiralis.h");
    for name in [
        "chiralis_weil_new",
        "chiralis_weil_free",
        "chiralis_weil_eval",
        "chiralis_weil_basic_dim_h",
        "chiralis_verify_linear_rep",
        "chiralis_string_free",
        "chiralis_last_error",
        "typedef struct ChiralisWeil ChiralisWeil",
        "CHIRALIS_STATUS_GRADE_ERROR",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}
