use std::ffi::{c_char, CStr, CString};
use std::ptr;

use k3atlas_ffi::*;

fn cx(re: f64, im: f64) -> K3Complex {
    K3Complex { re, im }
}

fn last_error() -> String {
    let n = unsafe { k3_last_error(ptr::null_mut(), 0) };
    let mut buf = vec![0 as c_char; n + 1];
    unsafe { k3_last_error(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn igusa_clebsch_of_unit_params() {
    let p = [cx(1.0, 0.0); 4];
    let mut out = [K3Complex::default(); 4];
    assert_eq!(unsafe { k3_igusa_clebsch(p.as_ptr(), out.as_mut_ptr()) }, K3Status::Ok);
    let want = [24.0, 36.0, 360.0, 4.0];
    for (o, w) in out.iter().zip(want) {
        assert!((o.re - w).abs() < 1e-9 && o.im.abs() < 1e-9, "{o:?}");
    }
}

#[test]
fn forms_and_inverse_period_on_the_diagonal() {
    let (t, z, u) = (cx(0.0, 1.0), cx(0.0, 0.0), cx(0.0, 1.0));
    let mut f = K3Forms::default();
    assert_eq!(unsafe { k3_forms(t, z, u, 1e-12, &mut f) }, K3Status::Ok);
    assert!(f.c10.re.hypot(f.c10.im) < 1e-12);
    let mut params = [K3Complex::default(); 4];
    let mut h1 = false;
    assert_eq!(unsafe { k3_inverse_period(t, z, u, 1e-12, params.as_mut_ptr(), &mut h1) }, K3Status::Ok);
    assert!(h1);
}

#[test]
fn split_pair_at_i_and_2i() {
    let mut f = K3Forms::default();
    let (t, z, u) = (cx(0.0, 1.0), cx(0.0, 0.0), cx(0.0, 2.0));
    assert_eq!(unsafe { k3_forms(t, z, u, 1e-12, &mut f) }, K3Status::Ok);
    let mut params = [K3Complex::default(); 4];
    assert_eq!(unsafe { k3_inverse_period(t, z, u, 1e-12, params.as_mut_ptr(), ptr::null_mut()) }, K3Status::Ok);
    let mut j = [K3Complex::default(); 2];
    assert_eq!(unsafe { k3_split_j(params.as_ptr(), j.as_mut_ptr()) }, K3Status::Ok);
    assert!((j[0].re - 1728.0).abs() < 1e-4, "{j:?}");
    assert!((j[1].re - 287496.0).abs() < 1e-2, "{j:?}");
}

#[test]
fn poly_handle_lifecycle() {
    let src = CString::new("(a + b)^2 - 1/2*a").unwrap();
    let vars = CString::new("a b").unwrap();
    let mut p: *mut K3Poly = ptr::null_mut();
    assert_eq!(unsafe { k3_poly_parse(src.as_ptr(), vars.as_ptr(), &mut p) }, K3Status::Ok);
    assert_eq!(unsafe { k3_poly_nvars(p) }, 2);

    let pt = [cx(2.0, 0.0), cx(1.0, 0.0)];
    let mut v = K3Complex::default();
    assert_eq!(unsafe { k3_poly_eval(p, pt.as_ptr(), 2, &mut v) }, K3Status::Ok);
    assert_eq!(v, cx(8.0, 0.0));
    assert_eq!(unsafe { k3_poly_eval(p, pt.as_ptr(), 1, &mut v) }, K3Status::InvalidArgument);

    let mut sq: *mut K3Poly = ptr::null_mut();
    assert_eq!(unsafe { k3_poly_mul(p, p, &mut sq) }, K3Status::Ok);
    assert_eq!(unsafe { k3_poly_eval(sq, pt.as_ptr(), 2, &mut v) }, K3Status::Ok);
    assert_eq!(v, cx(64.0, 0.0));

    let mut s: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { k3_poly_to_string(p, &mut s) }, K3Status::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { k3_string_free(s) };

    // the printed form parses back to the same polynomial
    let again = CString::new(text).unwrap();
    let mut q: *mut K3Poly = ptr::null_mut();
    assert_eq!(unsafe { k3_poly_parse(again.as_ptr(), vars.as_ptr(), &mut q) }, K3Status::Ok);
    assert_eq!(unsafe { k3_poly_eval(q, pt.as_ptr(), 2, &mut v) }, K3Status::Ok);
    assert_eq!(v, cx(8.0, 0.0));

    unsafe {
        k3_poly_free(p);
        k3_poly_free(q);
        k3_poly_free(sq);
        k3_poly_free(ptr::null_mut());
    }
}

#[test]
fn failures_set_status_and_message() {
    let bad = CString::new("a + * b").unwrap();
    let vars = CString::new("a b").unwrap();
    let mut p: *mut K3Poly = ptr::null_mut();
    assert_eq!(unsafe { k3_poly_parse(bad.as_ptr(), vars.as_ptr(), &mut p) }, K3Status::Parse);
    assert!(p.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { k3_igusa_clebsch(ptr::null(), ptr::null_mut()) }, K3Status::NullPointer);
    assert!(last_error().contains("null"));

    // Im κ not positive definite
    let mut f = K3Forms::default();
    let s = unsafe { k3_forms(cx(0.0, 1.0), cx(0.0, 2.0), cx(0.0, 1.0), 1e-12, &mut f) };
    assert_eq!(s, K3Status::Domain, "{}", last_error());
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(k3_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let h = include_str!("../include/k3atlas.h");
    for name in [
        "k3_last_error",
        "k3_version",
        "k3_forms",
        "k3_inverse_period",
        "k3_igusa_clebsch",
        "k3_split_j",
        "k3_poly_parse",
        "k3_poly_nvars",
        "k3_poly_eval",
        "k3_poly_mul",
        "k3_poly_to_string",
        "k3_poly_free",
        "k3_string_free",
        "k3_verify_exact",
    ] {
        assert!(h.contains(&format!("{name}(")), "{name}");
    }
}
