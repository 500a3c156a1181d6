//! C interface.
//!
//! Bodies and samplers are opaque heap handles created from JSON and released
//! with the matching `*_free`. Every call returns an [`OperanoidStatus`]; on
//! failure the message is kept per thread and can be copied out with
//! [`operanoid_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use operanoid::bodies::{boundary_point, Operatope};
use operanoid::ensembles::EnsembleSpec;
use operanoid::freeprob::mp_plus_semicircle_support;
use operanoid::montecarlo::{support_mc, OperanoidSampler as Sampler};
use operanoid::spectral::{trace_norm, HermitianMatrix};
use operanoid::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperanoidStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DimensionMismatch = 3,
    /// Eigensolver or quadrature failure.
    Numerical = 4,
    /// Malformed JSON or a string that is not UTF-8.
    Parse = 5,
    /// A Rust panic was caught; the handle involved should be treated as unusable.
    Panic = 6,
}

/// Opaque operatope handle.
pub struct OperanoidOperatope(Operatope);

/// Opaque Monte Carlo sampler handle.
pub struct OperanoidSampler(Sampler);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> OperanoidStatus {
    match e {
        Error::DimensionMismatch { .. } => OperanoidStatus::DimensionMismatch,
        Error::Json(_) => OperanoidStatus::Parse,
        e if e.is_numerical() => OperanoidStatus::Numerical,
        _ => OperanoidStatus::InvalidInput,
    }
}

fn fail(status: OperanoidStatus, msg: &str) -> OperanoidStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), OperanoidStatus>) -> OperanoidStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OperanoidStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(OperanoidStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, OperanoidStatus>;
}

impl<T> OrStatus<T> for operanoid::Result<T> {
    fn or_status(self) -> Result<T, OperanoidStatus> {
        self.map_err(|e| fail(status_of(&e), &e.to_string()))
    }
}

fn nonnull<T>(p: *const T, what: &str) -> Result<(), OperanoidStatus> {
    if p.is_null() {
        return Err(fail(OperanoidStatus::NullPointer, &format!("{what} is null")));
    }
    Ok(())
}

unsafe fn input<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], OperanoidStatus> {
    nonnull(p, what)?;
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn utf8<'a>(s: *const c_char, what: &str) -> Result<&'a str, OperanoidStatus> {
    nonnull(s, what)?;
    CStr::from_ptr(s).to_str().map_err(|_| fail(OperanoidStatus::Parse, &format!("{what} is not UTF-8")))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, OperanoidStatus> {
    serde_json::from_str(text).map_err(|e| fail(OperanoidStatus::Parse, &e.to_string()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn operanoid_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// always NUL-terminated when `len > 0`). Returns the full message length
/// excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn operanoid_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Parses an operatope from its JSON file format.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn operanoid_operatope_from_json(
    json: *const c_char,
    out: *mut *mut OperanoidOperatope,
) -> OperanoidStatus {
    guard(|| {
        nonnull(out, "out")?;
        let z: Operatope = parse(utf8(json, "json")?)?;
        *out = Box::into_raw(Box::new(OperanoidOperatope(z)));
        Ok(())
    })
}

/// # Safety
/// `z` must be null or a handle from [`operanoid_operatope_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn operanoid_operatope_free(z: *mut OperanoidOperatope) {
    if !z.is_null() {
        drop(Box::from_raw(z));
    }
}

/// # Safety
/// `z` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn operanoid_operatope_dim(z: *const OperanoidOperatope, out: *mut usize) -> OperanoidStatus {
    guard(|| {
        nonnull(z, "body")?;
        nonnull(out, "out")?;
        *out = (*z).0.d();
        Ok(())
    })
}

/// Support function at `u` (length `len`, which must equal the dimension).
///
/// # Safety
/// `z` must be a live handle, `u` must point to `len` doubles and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn operanoid_operatope_support(
    z: *const OperanoidOperatope,
    u: *const f64,
    len: usize,
    out: *mut f64,
) -> OperanoidStatus {
    guard(|| {
        nonnull(z, "body")?;
        nonnull(out, "out")?;
        *out = (*z).0.support(input(u, len, "u")?).or_status()?;
        Ok(())
    })
}

/// A boundary point maximizing `⟨·, u⟩`, written to `point[0..len]`.
///
/// # Safety
/// `z` must be a live handle; `u` and `point` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn operanoid_operatope_boundary_point(
    z: *const OperanoidOperatope,
    u: *const f64,
    len: usize,
    point: *mut f64,
) -> OperanoidStatus {
    guard(|| {
        nonnull(z, "body")?;
        nonnull(point, "point")?;
        let p = boundary_point(&(*z).0, input(u, len, "u")?).or_status()?;
        ptr::copy_nonoverlapping(p.as_ptr(), point, len);
        Ok(())
    })
}

/// Builds a sampler from an ensemble spec in JSON; `normalized` divides each
/// draw by its matrix size.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn operanoid_sampler_from_json(
    json: *const c_char,
    normalized: bool,
    out: *mut *mut OperanoidSampler,
) -> OperanoidStatus {
    guard(|| {
        nonnull(out, "out")?;
        let spec: EnsembleSpec = parse(utf8(json, "json")?)?;
        let s = Sampler::from_spec(&spec).or_status()?.normalized(normalized);
        *out = Box::into_raw(Box::new(OperanoidSampler(s)));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from [`operanoid_sampler_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn operanoid_sampler_free(s: *mut OperanoidSampler) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Monte Carlo support value over draws `0..n` of `seed`, with its standard error.
///
/// # Safety
/// `s` must be a live handle, `u` must point to `len` doubles, and
/// `value`/`std_error` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn operanoid_sampler_support(
    s: *const OperanoidSampler,
    u: *const f64,
    len: usize,
    n: usize,
    seed: u64,
    value: *mut f64,
    std_error: *mut f64,
) -> OperanoidStatus {
    guard(|| {
        nonnull(s, "sampler")?;
        nonnull(value, "value")?;
        nonnull(std_error, "std_error")?;
        let e = support_mc(&(*s).0, input(u, len, "u")?, n, seed).or_status()?;
        *value = e.value;
        *std_error = e.std_error;
        Ok(())
    })
}

/// Trace norm of the Hermitian `m × m` matrix with row-major real part `re`
/// and imaginary part `im` (null for a real symmetric matrix).
///
/// # Safety
/// `re` (and `im` when not null) must point to `m * m` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn operanoid_trace_norm(re: *const f64, im: *const f64, m: usize, out: *mut f64) -> OperanoidStatus {
    guard(|| {
        nonnull(out, "out")?;
        let n = m.checked_mul(m).ok_or_else(|| fail(OperanoidStatus::InvalidInput, "m is too large"))?;
        let re = input(re, n, "re")?.to_vec();
        let im = if im.is_null() { None } else { Some(input(im, n, "im")?.to_vec()) };
        let a = HermitianMatrix::from_parts(m, re, im).or_status()?;
        *out = trace_norm(&a).or_status()?;
        Ok(())
    })
}

/// Support function of the free zonoid of `(Y - κ^{-1/2}, βS)` with `Y` the
/// Marchenko–Pastur limit of aspect `κ` and `S` standard semicircular.
///
/// # Safety
/// `u` must point to two doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn operanoid_mp_semicircle_support(
    kappa: f64,
    beta: f64,
    u: *const f64,
    out: *mut f64,
) -> OperanoidStatus {
    guard(|| {
        nonnull(out, "out")?;
        *out = mp_plus_semicircle_support(kappa, beta, input(u, 2, "u")?).or_status()?;
        Ok(())
    })
}
