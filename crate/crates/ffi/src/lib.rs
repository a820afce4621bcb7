//! C ABI for kvdepth.
//!
//! Lie elements are opaque `KvLieElem` handles released with
//! `kv_lie_free`. Every fallible call returns a `KvStatus`; on failure the
//! message is available from `kv_last_error_message` on the same thread.
//! Strings returned through out-parameters are owned by the caller and
//! released with `kv_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kvdepth::depth2::{chi13_multiplicity, kernel_dim, poly_space_dim, System};
use kvdepth::freealg::{poly_to_json, Alphabet, Selector};
use kvdepth::grt::grt_solve;
use kvdepth::lie::{bracket, lie_from_json, soule, LieElem};
use kvdepth::tder::{ihara, nu, qdiv};
use kvdepth::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    NotLie = 5,
    WeightCap = 6,
    Mismatch = 7,
    Arithmetic = 8,
    Internal = 9,
}

/// Which functional-equation system `kv_poly_space_dim` solves.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KvSystem {
    Full = 0,
    SingleB = 1,
    SingleComposed = 2,
}

/// Opaque Lie element on the letters x, y.
pub struct KvLieElem(LieElem);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> KvStatus {
    match err {
        Error::Parse(_) => KvStatus::Parse,
        Error::NotLie { .. } => KvStatus::NotLie,
        Error::WeightCapExceeded { .. } => KvStatus::WeightCap,
        Error::FieldMismatch { .. }
        | Error::AlphabetMismatch { .. }
        | Error::OrderMismatch { .. }
        | Error::ImageCount { .. }
        | Error::Shape(_) => KvStatus::Mismatch,
        Error::DivisionByZero => KvStatus::Arithmetic,
        Error::Inconsistent(_) => KvStatus::Internal,
        _ => KvStatus::InvalidArgument,
    }
}

struct Fail(KvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            KvStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            KvStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(KvStatus::NullPointer, format!("{what} is null"))
}

unsafe fn elem<'a>(p: *const KvLieElem, what: &str) -> Result<&'a LieElem, Fail> {
    // SAFETY: caller passes a handle from this library or null.
    unsafe { p.as_ref() }
        .map(|e| &e.0)
        .ok_or_else(|| null(what))
}

unsafe fn put_elem(out: *mut *mut KvLieElem, e: LieElem) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    // SAFETY: checked non-null above.
    unsafe { *out = Box::into_raw(Box::new(KvLieElem(e))) };
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|e| Fail(KvStatus::Internal, e.to_string()))?;
    // SAFETY: checked non-null above.
    unsafe { *out = c.into_raw() };
    Ok(())
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    // SAFETY: checked non-null above.
    unsafe { *out = v };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn kv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kv_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Releases a Lie element handle.
///
/// # Safety
/// `e` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kv_lie_free(e: *mut KvLieElem) {
    if !e.is_null() {
        // SAFETY: produced by Box::into_raw.
        drop(unsafe { Box::from_raw(e) });
    }
}

/// The Soule element of odd weight `m >= 3`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_lie_soule(m: usize, out: *mut *mut KvLieElem) -> KvStatus {
    guard(|| unsafe { put_elem(out, soule(m)?) })
}

/// Parses a bracket expression such as `["x", ["x", "y"]]`, or a list of
/// `{"coeff", "bracket"}` terms, over the letters x, y.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_lie_from_json(
    json: *const c_char,
    out: *mut *mut KvLieElem,
) -> KvStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        // SAFETY: caller guarantees a NUL-terminated string.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Fail(KvStatus::InvalidUtf8, e.to_string()))?;
        let e = lie_from_json(text, &Alphabet::xy())?;
        unsafe { put_elem(out, e) }
    })
}

/// Serializes an element as a list of `{"word", "coeff"}` terms.
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_lie_to_json(e: *const KvLieElem, out: *mut *mut c_char) -> KvStatus {
    guard(|| unsafe {
        let e = elem(e, "elem")?;
        put_string(out, poly_to_json(e.body(), &Alphabet::xy()).to_string())
    })
}

/// The Lie bracket `[a, b]`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_lie_bracket(
    a: *const KvLieElem,
    b: *const KvLieElem,
    out: *mut *mut KvLieElem,
) -> KvStatus {
    guard(|| unsafe { put_elem(out, bracket(elem(a, "a")?, elem(b, "b")?)?) })
}

/// The Ihara bracket `{a, b}`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_lie_ihara(
    a: *const KvLieElem,
    b: *const KvLieElem,
    out: *mut *mut KvLieElem,
) -> KvStatus {
    guard(|| unsafe { put_elem(out, ihara(elem(a, "a")?, elem(b, "b")?)?) })
}

/// The part of `e` with weight `weight` (if nonnegative) and y-degree
/// `depth` (if nonnegative). Negative values leave that grading free.
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_lie_component(
    e: *const KvLieElem,
    weight: i64,
    depth: i64,
    out: *mut *mut KvLieElem,
) -> KvStatus {
    guard(|| unsafe {
        let e = elem(e, "elem")?;
        let part = match (usize::try_from(weight).ok(), usize::try_from(depth).ok()) {
            (Some(m), Some(d)) if d <= m => e.component(Selector::Bidegree(m - d, d)),
            (Some(_), Some(_)) => LieElem::zero(e.n()),
            (Some(m), None) => e.component(Selector::Weight(m)),
            (None, Some(d)) => e.component(Selector::YDegree(d)),
            (None, None) => e.clone(),
        };
        put_elem(out, part)
    })
}

/// Solves grt1 in weight `m` with the given weight cap; writes the solution
/// as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_grt_solve_json(
    m: usize,
    cap: usize,
    out: *mut *mut c_char,
) -> KvStatus {
    guard(|| {
        let sol = grt_solve(m, cap)?;
        let text = serde_json::to_string(&sol.to_json())
            .map_err(|e| Fail(KvStatus::Internal, e.to_string()))?;
        unsafe { put_string(out, text) }
    })
}

/// Dimension of the depth-2 kernel in degree `n` for root-of-unity order `l`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_kernel_dim(n: usize, l: u32, out: *mut usize) -> KvStatus {
    guard(|| unsafe { put(out, kernel_dim(n, l)?.dimension) })
}

/// Dimension of the space of degree-`n` polynomial solutions of `system`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_poly_space_dim(
    n: usize,
    l: u32,
    system: KvSystem,
    out: *mut usize,
) -> KvStatus {
    let system = match system {
        KvSystem::Full => System::Full,
        KvSystem::SingleB => System::SingleB,
        KvSystem::SingleComposed => System::SingleComposed,
    };
    guard(|| unsafe { put(out, poly_space_dim(n, l, system)?.dimension) })
}

/// Multiplicity of the sign character `chi13` in degree-`n` binary forms.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_chi13_multiplicity(n: usize, out: *mut i64) -> KvStatus {
    guard(|| unsafe { put(out, chi13_multiplicity(n)?) })
}

/// The order-`l` divergence of the derivation `nu(e)`, as JSON trace terms.
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kv_qdiv_nu_json(
    e: *const KvLieElem,
    l: u32,
    out: *mut *mut c_char,
) -> KvStatus {
    guard(|| unsafe {
        let t = qdiv(&nu(elem(e, "elem")?)?, l)?;
        let text = serde_json::to_string(&t.to_json_terms(&Alphabet::xy()))
            .map_err(|e| Fail(KvStatus::Internal, e.to_string()))?;
        put_string(out, text)
    })
}
