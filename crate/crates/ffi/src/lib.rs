//! C ABI over `thoma`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns a [`ThomaStatus`]; the message of the last
//! failure on the calling thread is available through
//! [`thoma_last_error_message`]. Rationals cross the boundary as `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use thoma::density::{self, DensityEngine};
use thoma::scalar::{parse_q, Scalar, Q};
use thoma::zmeasure::{validate_params, ParamTriple, ThomaPoint as CorePoint};
use thoma::{laguerre, Error, Partition};

#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThomaStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    NotAdmissible = 3,
    Invalid = 4,
    DegreeTooLarge = 5,
    TailNotConverged = 6,
    ContextMismatch = 7,
    Defective = 8,
    Panic = 9,
}

/// Validated `(z, z', θ)`.
pub struct ThomaParams(ParamTriple);

/// Point of the Thoma simplex.
pub struct ThomaPoint(CorePoint);

/// Cached exact evaluator for the truncated density.
pub struct ThomaDensity(DensityEngine);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ThomaStatus {
    match e {
        Error::Parse(_) => ThomaStatus::Parse,
        Error::NotAdmissible(_) => ThomaStatus::NotAdmissible,
        Error::Invalid(_) => ThomaStatus::Invalid,
        Error::DegreeTooLarge { .. } => ThomaStatus::DegreeTooLarge,
        Error::TailNotConverged(_) => ThomaStatus::TailNotConverged,
        Error::ContextMismatch(_) => ThomaStatus::ContextMismatch,
        Error::Defective { .. } => ThomaStatus::Defective,
    }
}

struct Fail(ThomaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ThomaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ThomaStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            ThomaStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(ThomaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(ThomaStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn read_q(p: *const c_char, what: &str) -> Result<Q, Fail> {
    Ok(parse_q(read_str(p, what)?)?)
}

unsafe fn read_q_array(p: *const *const c_char, n: usize, what: &str) -> Result<Vec<Q>, Fail> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(null(what));
    }
    std::slice::from_raw_parts(p, n).iter().map(|&s| read_q(s, what)).collect()
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated).
///
/// Returns the full message length excluding the terminator; a return value
/// `>= len` means the message was truncated.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn thoma_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow().as_bytes().to_vec();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Validates `(z, z', θ)` given as rational strings.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thoma_params_new(
    z_re: *const c_char,
    z_im: *const c_char,
    zp_re: *const c_char,
    zp_im: *const c_char,
    theta: *const c_char,
    out: *mut *mut ThomaParams,
) -> ThomaStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let z = Scalar::new(read_q(z_re, "z_re")?, read_q(z_im, "z_im")?);
        let zp = Scalar::new(read_q(zp_re, "zp_re")?, read_q(zp_im, "zp_im")?);
        let p = validate_params(&z, &zp, &read_q(theta, "theta")?)?;
        *out = Box::into_raw(Box::new(ThomaParams(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`thoma_params_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn thoma_params_free(p: *mut ThomaParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `c = zz'/θ` as a double.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thoma_params_c(p: *const ThomaParams, out: *mut f64) -> ThomaStatus {
    guard(|| {
        *out_ref(out, "out")? = thoma::scalar::q_to_f64(&in_ref(p, "params")?.0.c);
        Ok(())
    })
}

/// Eigenvalue `α_m = m(m - 1 + c)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thoma_params_alpha(p: *const ThomaParams, m: usize, out: *mut f64) -> ThomaStatus {
    guard(|| {
        *out_ref(out, "out")? = thoma::scalar::q_to_f64(&in_ref(p, "params")?.0.alpha(m));
        Ok(())
    })
}

/// Builds a point from `n_alpha` and `n_beta` rational strings.
///
/// # Safety
/// Arrays must hold the stated number of NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn thoma_point_new(
    alpha: *const *const c_char,
    n_alpha: usize,
    beta: *const *const c_char,
    n_beta: usize,
    out: *mut *mut ThomaPoint,
) -> ThomaStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let w = CorePoint::new(read_q_array(alpha, n_alpha, "alpha")?, read_q_array(beta, n_beta, "beta")?)?;
        *out = Box::into_raw(Box::new(ThomaPoint(w)));
        Ok(())
    })
}

/// # Safety
/// `w` must come from [`thoma_point_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn thoma_point_free(w: *mut ThomaPoint) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Prepares exact evaluation of the truncated density up to degree `max_degree`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thoma_density_new(p: *const ThomaParams, max_degree: usize, out: *mut *mut ThomaDensity) -> ThomaStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let eng = DensityEngine::new(&in_ref(p, "params")?.0, max_degree)?;
        *out = Box::into_raw(Box::new(ThomaDensity(eng)));
        Ok(())
    })
}

/// # Safety
/// `d` must come from [`thoma_density_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn thoma_density_free(d: *mut ThomaDensity) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Truncated density at `(t, σ, ω)` and its rigorous truncation bound.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thoma_density_eval(
    d: *const ThomaDensity,
    t: f64,
    sigma: *const ThomaPoint,
    omega: *const ThomaPoint,
    value: *mut f64,
    tail: *mut f64,
) -> ThomaStatus {
    guard(|| {
        let d = in_ref(d, "density")?;
        let r = d.0.density(t, &in_ref(sigma, "sigma")?.0, &in_ref(omega, "omega")?.0)?;
        *out_ref(value, "value")? = r.value;
        *out_ref(tail, "tail")? = r.rigorous_tail;
        Ok(())
    })
}

/// Uniform bound on the error of truncating the density after degree `max_degree`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thoma_tail_bound(p: *const ThomaParams, t: f64, max_degree: usize, out: *mut f64) -> ThomaStatus {
    guard(|| {
        *out_ref(out, "out")? = density::tail_bound(t, max_degree, &in_ref(p, "params")?.0)?;
        Ok(())
    })
}

/// Crude and refined total-variation bounds at time `t`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thoma_tv_bound(
    p: *const ThomaParams,
    t: f64,
    max_degree: usize,
    crude: *mut f64,
    refined: *mut f64,
) -> ThomaStatus {
    guard(|| {
        let b = density::tv_bound(t, &in_ref(p, "params")?.0, max_degree)?;
        *out_ref(crude, "crude")? = b.crude;
        *out_ref(refined, "refined")? = b.refined;
        Ok(())
    })
}

/// Laguerre function `𝔏_λ` as JSON `{"Q_mu": coefficient, …}` with exact string coefficients.
///
/// The returned string is released with [`thoma_string_free`].
///
/// # Safety
/// `parts` must hold `n_parts` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thoma_laguerre_json(
    p: *const ThomaParams,
    parts: *const usize,
    n_parts: usize,
    out: *mut *mut c_char,
) -> ThomaStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let parts = if n_parts == 0 {
            Vec::new()
        } else if parts.is_null() {
            return Err(null("parts"));
        } else {
            std::slice::from_raw_parts(parts, n_parts).to_vec()
        };
        let lam = Partition::new(parts)?;
        let f = laguerre::laguerre_fn(&lam, &in_ref(p, "params")?.0.context())?;
        let map: serde_json::Map<String, serde_json::Value> = f
            .terms()
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.to_string())))
            .collect();
        let s = serde_json::Value::Object(map).to_string();
        *out = CString::new(s).expect("no NUL in JSON").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn thoma_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
