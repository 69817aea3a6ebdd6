//! C interface. Every function returns a [`K3Status`]; on failure the message
//! for the calling thread is available from [`k3_last_error`]. Polynomials are
//! opaque handles released with [`k3_poly_free`]; strings returned by the
//! library are released with [`k3_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use k3atlas::exactpoly::{parse_poly, Context, QPoly};
use k3atlas::forms::evaluate_forms;
use k3atlas::k3family::{ic_from_params, inverse_period, split_j_pair, K3Params};
use k3atlas::numerics::SiegelPoint;
use k3atlas::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K3Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Precision = 4,
    Parse = 5,
    Humbert = 6,
    Identity = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct K3Complex {
    pub re: f64,
    pub im: f64,
}

impl From<K3Complex> for Complex64 {
    fn from(z: K3Complex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for K3Complex {
    fn from(z: Complex64) -> Self {
        K3Complex { re: z.re, im: z.im }
    }
}

/// E4, E6, C5, C10, C12 at one period point.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct K3Forms {
    pub e4: K3Complex,
    pub e6: K3Complex,
    pub c5: K3Complex,
    pub c10: K3Complex,
    pub c12: K3Complex,
}

/// Polynomial with rational coefficients.
pub struct K3Poly {
    inner: QPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(K3Status, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let s = match &e {
            Error::Domain(_) | Error::Singular(_) | Error::Indeterminacy(_) => K3Status::Domain,
            Error::Precision(_) => K3Status::Precision,
            Error::Parse { .. } => K3Status::Parse,
            Error::Humbert(_) => K3Status::Humbert,
            Error::Identity { .. } | Error::Derivation(_) => K3Status::Identity,
            Error::Arity(_) | Error::MissingBinding(_) | Error::Input(_) => K3Status::InvalidArgument,
        };
        Fail(s, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(K3Status::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> K3Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => K3Status::Ok,
        Ok(Err(Fail(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            K3Status::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(K3Status::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn params_arg(p: *const K3Complex) -> Result<K3Params, Fail> {
    if p.is_null() {
        return Err(null("params"));
    }
    let v = std::slice::from_raw_parts(p, 4);
    Ok(K3Params::new(v[0].into(), v[1].into(), v[2].into(), v[3].into()))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL, 0 if none.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn k3_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match &*e.borrow() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn k3_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Modular forms at κ = [[τ, z], [z, u]].
///
/// # Safety
/// `out` must point to a writable `K3Forms`.
#[no_mangle]
pub unsafe extern "C" fn k3_forms(tau: K3Complex, z: K3Complex, u: K3Complex, eps: f64, out: *mut K3Forms) -> K3Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let k = SiegelPoint::new(tau.into(), z.into(), u.into())?;
        let f = evaluate_forms(&k, eps)?;
        *out = K3Forms {
            e4: f.e4.into(),
            e6: f.e6.into(),
            c5: f.c5.into(),
            c10: f.c10.into(),
            c12: f.c12.into(),
        };
        Ok(())
    })
}

/// Writes [α, β, γ, δ] (unnormalized) to `out_params[0..4]` and the H1 flag to `out_h1`.
///
/// # Safety
/// `out_params` must point to 4 writable values; `out_h1` may be null.
#[no_mangle]
pub unsafe extern "C" fn k3_inverse_period(
    tau: K3Complex,
    z: K3Complex,
    u: K3Complex,
    eps: f64,
    out_params: *mut K3Complex,
    out_h1: *mut bool,
) -> K3Status {
    guard(|| {
        if out_params.is_null() {
            return Err(null("out_params"));
        }
        let k = SiegelPoint::new(tau.into(), z.into(), u.into())?;
        let ip = inverse_period(&k, eps)?;
        for (i, c) in ip.point.coords.iter().enumerate() {
            *out_params.add(i) = (*c).into();
        }
        if !out_h1.is_null() {
            *out_h1 = ip.h1;
        }
        Ok(())
    })
}

/// Igusa-Clebsch invariants of weights (2, 4, 6, 10) from [α, β, γ, δ].
///
/// # Safety
/// `params` must point to 4 readable values and `out` to 4 writable ones.
#[no_mangle]
pub unsafe extern "C" fn k3_igusa_clebsch(params: *const K3Complex, out: *mut K3Complex) -> K3Status {
    guard(|| {
        let p = params_arg(params)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let ic = ic_from_params(&p)?;
        for (i, c) in [ic.a, ic.b, ic.c, ic.d].into_iter().enumerate() {
            *out.add(i) = c.into();
        }
        Ok(())
    })
}

/// The j-pair (j(i) = 1728) of the product case γ = 0, sorted.
///
/// # Safety
/// `params` must point to 4 readable values and `out` to 2 writable ones.
#[no_mangle]
pub unsafe extern "C" fn k3_split_j(params: *const K3Complex, out: *mut K3Complex) -> K3Status {
    guard(|| {
        let p = params_arg(params)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = split_j_pair(&p)?;
        *out = s.j[0].into();
        *out.add(1) = s.j[1].into();
        Ok(())
    })
}

/// Parses `src` over the whitespace-separated variable list `vars`.
///
/// # Safety
/// `src` and `vars` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_poly_parse(src: *const c_char, vars: *const c_char, out: *mut *mut K3Poly) -> K3Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let ctx = Context::parse(str_arg(vars, "vars")?)?;
        let p = parse_poly(str_arg(src, "src")?, &ctx)?;
        *out = Box::into_raw(Box::new(K3Poly { inner: p }));
        Ok(())
    })
}

/// Number of variables, 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn k3_poly_nvars(p: *const K3Poly) -> usize {
    p.as_ref().map_or(0, |p| p.inner.nvars())
}

/// Evaluates at `point[0..n]`, where `n` must equal the number of variables.
///
/// # Safety
/// `p` must be a live handle, `point` must hold `n` values, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_poly_eval(p: *const K3Poly, point: *const K3Complex, n: usize, out: *mut K3Complex) -> K3Status {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("poly"))?;
        if out.is_null() || (point.is_null() && n > 0) {
            return Err(null("point or out"));
        }
        let pts: Vec<Complex64> = if n == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(point, n).iter().map(|&z| z.into()).collect()
        };
        *out = p.inner.eval_complex(&pts)?.into();
        Ok(())
    })
}

/// Product of two polynomials over the same variables.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn k3_poly_mul(a: *const K3Poly, b: *const K3Poly, out: *mut *mut K3Poly) -> K3Status {
    guard(|| {
        let (a, b) = (a.as_ref().ok_or_else(|| null("a"))?, b.as_ref().ok_or_else(|| null("b"))?);
        if out.is_null() {
            return Err(null("out"));
        }
        let p = a.inner.try_mul(&b.inner)?;
        *out = Box::into_raw(Box::new(K3Poly { inner: p }));
        Ok(())
    })
}

/// Canonical text form; release with [`k3_string_free`].
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn k3_poly_to_string(p: *const K3Poly, out: *mut *mut c_char) -> K3Status {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("poly"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(p.inner.to_string()).expect("no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn k3_poly_free(p: *mut K3Poly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn k3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the exact identity suite; `jobs` = 0 uses one thread per core.
/// Returns `K3_STATUS_IDENTITY` if any identity fails.
///
/// # Safety
/// `passed` and `total` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_verify_exact(jobs: usize, passed: *mut usize, total: *mut usize) -> K3Status {
    guard(|| {
        if passed.is_null() || total.is_null() {
            return Err(null("passed or total"));
        }
        let r = k3atlas::kummer::run_exact_suite(jobs)?;
        *passed = r.passed;
        *total = r.total;
        if r.all_pass() {
            Ok(())
        } else {
            Err(Fail(K3Status::Identity, format!("{} identities failed", r.failed)))
        }
    })
}
