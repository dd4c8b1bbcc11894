//! C ABI for the `fscalc` parameter calculus.
//!
//! Spaces, operators and certificates are opaque heap handles created by
//! `fsc_*_new` / `fsc_plan` and released by the matching `fsc_*_free`.
//! Every fallible call returns an [`FscStatus`]; on failure the message is
//! available from [`fsc_last_error`] until the next call on the same thread.
//! Strings handed out by the library are released with [`fsc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fscalc::bootstrap::{plan_bootstrap, validate_inner, BootstrapCertificate};
use fscalc::cli::parse_reciprocal;
use fscalc::composition::{membership, SigmaMode};
use fscalc::embedding::embeds;
use fscalc::numeric::parse_ext;
use fscalc::{Base, CalcError, OperatorSpec, Scale, SpaceParams};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Contract = 4,
    DimensionMismatch = 5,
    NotInDomain = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FscScale {
    B = 0,
    F = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FscBase {
    BoundedDomain = 0,
    FullSpace = 1,
}

/// A function space `B^s_{p,q}` or `F^s_{p,q}`.
pub struct FscSpace {
    inner: SpaceParams,
}

/// A boundary operator class.
pub struct FscOperator {
    inner: OperatorSpec,
}

/// A validated bootstrap plan.
pub struct FscCertificate {
    inner: BootstrapCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(FscStatus, String);

impl From<CalcError> for Failure {
    fn from(e: CalcError) -> Self {
        let status = match e {
            CalcError::Parse(_) => FscStatus::Parse,
            CalcError::Contract(_) => FscStatus::Contract,
            CalcError::DimensionMismatch { .. } => FscStatus::DimensionMismatch,
            CalcError::OutsideCompositionDomain(_) | CalcError::NotInDomain(_) => FscStatus::NotInDomain,
            CalcError::Internal(_) => FscStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(message: Option<String>) {
    let message = message.map(|m| CString::new(m.replace('\0', " ")).unwrap_or_default());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FscStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(None);
            FscStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(Some(message));
            status
        }
        Err(_) => {
            set_error(Some("internal error: panic inside fscalc".into()));
            FscStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(FscStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(FscStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_json(out: *mut *mut c_char, value: &impl serde::Serialize) -> Result<(), Failure> {
    if out.is_null() {
        return Ok(());
    }
    let json = serde_json::to_string(value).map_err(|e| Failure(FscStatus::Internal, e.to_string()))?;
    let c = CString::new(json).map_err(|e| Failure(FscStatus::Internal, e.to_string()))?;
    out.write(c.into_raw());
    Ok(())
}

/// Message of the last failed call on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn fsc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fsc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a space from textual parameters: `s` like `"3/2"` or `"6-eps"`,
/// `p` and `q` positive rationals or `"inf"`.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsc_space_new(
    scale: FscScale,
    s: *const c_char,
    p: *const c_char,
    q: *const c_char,
    n: u32,
    base: FscBase,
    out: *mut *mut FscSpace,
) -> FscStatus {
    guard(|| {
        let scale = match scale {
            FscScale::B => Scale::B,
            FscScale::F => Scale::F,
        };
        let base = match base {
            FscBase::BoundedDomain => Base::BoundedDomain,
            FscBase::FullSpace => Base::FullSpace,
        };
        let s = parse_ext(text(s, "s")?)?;
        let u = parse_reciprocal(text(p, "p")?)?;
        let v = parse_reciprocal(text(q, "q")?)?;
        let inner = SpaceParams::new(scale, s, u, v, n, base)?;
        write_out(out, Box::into_raw(Box::new(FscSpace { inner })), "out")
    })
}

/// JSON form of a space.
///
/// # Safety
/// `space` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsc_space_json(space: *const FscSpace, out_json: *mut *mut c_char) -> FscStatus {
    guard(|| {
        let space = handle(space, "space")?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        write_json(out_json, &space.inner)
    })
}

/// # Safety
/// `space` must be null or a handle from [`fsc_space_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fsc_space_free(space: *mut FscSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Operator of trace class `r` (1 or 2) with trace order `r - 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsc_operator_new(trace_class: u8, out: *mut *mut FscOperator) -> FscStatus {
    guard(|| {
        let inner = OperatorSpec::with_class(trace_class)?;
        write_out(out, Box::into_raw(Box::new(FscOperator { inner })), "out")
    })
}

/// # Safety
/// `op` must be null or a handle from [`fsc_operator_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fsc_operator_free(op: *mut FscOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Domain membership. `out_report_json` may be null.
///
/// # Safety
/// Handles must be live; `out_in_domain` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsc_membership(
    space: *const FscSpace,
    op: *const FscOperator,
    out_in_domain: *mut bool,
    out_report_json: *mut *mut c_char,
) -> FscStatus {
    guard(|| {
        let report = membership(&handle(space, "space")?.inner, &handle(op, "op")?.inner)?;
        write_out(out_in_domain, report.in_domain, "out_in_domain")?;
        write_json(out_report_json, &report)
    })
}

/// Composition smoothness of the space as JSON `{"base":[num,den],"eps":k}`.
/// `proved` selects the proved guarantee, otherwise the conjectured value.
///
/// # Safety
/// `space` must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsc_sigma(space: *const FscSpace, proved: bool, out_json: *mut *mut c_char) -> FscStatus {
    guard(|| {
        let sp = &handle(space, "space")?.inner;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let mode = if proved { SigmaMode::Proved } else { SigmaMode::Conjectured };
        let value = fscalc::composition::sigma(&sp.s, &sp.u, sp.n, sp.scale, &sp.v, mode)?;
        write_json(out_json, &value)
    })
}

/// Whether `src ↪ dst` is derivable. The proof JSON is written only when it is.
///
/// # Safety
/// Handles must be live; `out_holds` must be writable; `out_proof_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn fsc_embeds(
    src: *const FscSpace,
    dst: *const FscSpace,
    out_holds: *mut bool,
    out_proof_json: *mut *mut c_char,
) -> FscStatus {
    guard(|| {
        let proof = embeds(&handle(src, "src")?.inner, &handle(dst, "dst")?.inner)?;
        write_out(out_holds, proof.is_some(), "out_holds")?;
        match proof {
            Some(p) => write_json(out_proof_json, &p),
            None => Ok(()),
        }
    })
}

/// Plans a bootstrap from `initial` to `target`. The certificate is replayed
/// before it is returned.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsc_plan(
    initial: *const FscSpace,
    target: *const FscSpace,
    op: *const FscOperator,
    out: *mut *mut FscCertificate,
) -> FscStatus {
    guard(|| {
        let op = &handle(op, "op")?.inner;
        let inner = plan_bootstrap(&handle(initial, "initial")?.inner, &handle(target, "target")?.inner, op)?;
        validate_inner(&inner, op).map_err(|e| Failure(FscStatus::Internal, format!("certificate replay failed: {e}")))?;
        write_out(out, Box::into_raw(Box::new(FscCertificate { inner })), "out")
    })
}

/// Number of moves in the certificate; 0 for a null handle.
///
/// # Safety
/// `cert` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn fsc_certificate_move_count(cert: *const FscCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.inner.moves.len())
}

/// # Safety
/// `cert` must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsc_certificate_json(cert: *const FscCertificate, out_json: *mut *mut c_char) -> FscStatus {
    guard(|| {
        let cert = handle(cert, "cert")?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        write_json(out_json, &cert.inner)
    })
}

/// Replays a certificate given as JSON, e.g. one produced elsewhere.
///
/// # Safety
/// `json` must be NUL-terminated; `op` live; `out_valid` writable.
#[no_mangle]
pub unsafe extern "C" fn fsc_certificate_validate_json(
    json: *const c_char,
    op: *const FscOperator,
    out_valid: *mut bool,
) -> FscStatus {
    guard(|| {
        let json = text(json, "json")?;
        let op = &handle(op, "op")?.inner;
        let cert: BootstrapCertificate =
            serde_json::from_str(json).map_err(|e| Failure(FscStatus::Parse, format!("certificate JSON: {e}")))?;
        write_out(out_valid, validate_inner(&cert, op).is_ok(), "out_valid")
    })
}

/// # Safety
/// `cert` must be null or a handle from [`fsc_plan`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fsc_certificate_free(cert: *mut FscCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}
