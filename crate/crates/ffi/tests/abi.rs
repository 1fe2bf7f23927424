use std::ffi::{c_char, CStr, CString};
use std::ptr;

use heat_ansatz_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { ha_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { ha_string_free(p) };
    s
}

#[test]
fn poly_round_trip_and_eval() {
    let src = CString::new("y_2 + y_1^2").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { ha_poly_parse(src.as_ptr(), HaFamily::Y, &mut p) }, HaStatus::Ok);
    let mut d1 = ptr::null_mut();
    assert_eq!(unsafe { ha_poly_dk(1, &mut d1) }, HaStatus::Ok);
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        ha_poly_to_string(p, &mut a);
        ha_poly_to_string(d1, &mut b);
    }
    assert_eq!(take_string(a), take_string(b));
    let mut v = 0.0;
    let pt = [3.0, -2.0];
    assert_eq!(unsafe { ha_poly_eval(p, pt.as_ptr(), 2, &mut v) }, HaStatus::Ok);
    assert_eq!(v, 7.0);
    unsafe {
        ha_poly_free(p);
        ha_poly_free(d1);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("y_1 +* 2").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { ha_poly_parse(bad.as_ptr(), HaFamily::Y, &mut p) }, HaStatus::Parse);
    assert!(p.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { ha_poly_parse(ptr::null(), HaFamily::Y, &mut p) }, HaStatus::NullPointer);
    assert!(last_error().contains("null"));
    assert_eq!(unsafe { ha_poly_dk(0, &mut p) }, HaStatus::OutOfRange);
    let mut table = ptr::null_mut();
    let pn = CString::new("x_2").unwrap();
    assert_eq!(unsafe { ha_table_reduced(2, 0, pn.as_ptr(), 4, &mut table) }, HaStatus::Domain);
    unsafe {
        ha_poly_free(ptr::null_mut());
        ha_table_free(ptr::null_mut());
        ha_series_free(ptr::null_mut());
        ha_string_free(ptr::null_mut());
    }
}

#[test]
fn table_entries() {
    let pn = CString::new("0").unwrap();
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { ha_table_reduced(1, 0, pn.as_ptr(), 6, &mut table) }, HaStatus::Ok);
    assert_eq!(unsafe { ha_table_len(table) }, 7);
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { ha_table_entry(table, 4, &mut e) }, HaStatus::Ok);
    let mut s = ptr::null_mut();
    unsafe { ha_poly_to_string(e, &mut s) };
    assert_eq!(take_string(s), "60*x_2^2");
    assert_eq!(unsafe { ha_table_entry(table, 7, &mut e) }, HaStatus::OutOfRange);
    unsafe {
        ha_poly_free(e);
        ha_table_free(table);
    }
}

#[test]
fn series_and_burgers() {
    let c = |s: &str| CString::new(s).unwrap();
    let (pn, poles, r0) = (c("0"), c("1:0"), c("0"));
    let mut s = ptr::null_mut();
    let st = unsafe { ha_series_new(0, 0, pn.as_ptr(), poles.as_ptr(), r0.as_ptr(), 10, &mut s) };
    assert_eq!(st, HaStatus::Ok);
    let (z, t) = (0.4f64, 2.0f64);
    let mut psi = 0.0;
    unsafe { ha_series_eval(s, z, t, &mut psi) };
    let exact = (-z * z / (2.0 * t)).exp() / t.sqrt();
    assert!((psi - exact).abs() < 1e-14);
    let mu = c("1/2");
    let mut w = 0.0;
    unsafe { ha_series_burgers_eval(s, mu.as_ptr(), z, t, &mut w) };
    assert!((w - z / t).abs() < 1e-15);
    let times = c("2, 7/3, 5");
    let mut zero = -1;
    assert_eq!(unsafe { ha_series_heat_residual_is_zero(s, times.as_ptr(), &mut zero) }, HaStatus::Ok);
    assert_eq!(zero, 1);
    unsafe { ha_series_free(s) };
}

#[test]
fn verify_suite() {
    let suite = CString::new("operators").unwrap();
    let mut failed = 99;
    assert_eq!(unsafe { ha_verify(suite.as_ptr(), &mut failed) }, HaStatus::Ok);
    assert_eq!(failed, 0);
    let bad = CString::new("nope").unwrap();
    assert_eq!(unsafe { ha_verify(bad.as_ptr(), &mut failed) }, HaStatus::Parse);
}
