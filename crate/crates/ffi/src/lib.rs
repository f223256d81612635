//! C interface to `minktrig`.
//!
//! Every function returns an [`MtStatus`] and writes its result through an
//! out pointer. A plane is held behind an opaque `MtContext` handle created by
//! [`mt_context_new_builtin`] or [`mt_context_new_json`] and released with
//! [`mt_context_free`]. After a non-OK status, [`mt_last_error_message`]
//! describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use minktrig::context::DEFAULT_TABLE_SIZE;
use minktrig::{birkhoff, distortion, trig};
use minktrig::{build_context, Error, NormSpec, PlaneContext, RadonFlag, Vec2};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    Null = 1,
    /// The norm description or a string argument was rejected.
    Config = 2,
    /// An argument lies outside the operation's domain.
    Domain = 3,
    /// An iterative routine failed to converge.
    Numerical = 4,
    /// The operation needs a Radon plane.
    Unsupported = 5,
    /// A panic was caught at the boundary.
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtRadonFlag {
    Radon = 0,
    NotRadon = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MtVec2 {
    pub x: f64,
    pub y: f64,
}

impl From<MtVec2> for Vec2 {
    fn from(v: MtVec2) -> Self {
        Vec2::new(v.x, v.y)
    }
}

impl From<Vec2> for MtVec2 {
    fn from(v: Vec2) -> Self {
        MtVec2 { x: v.x, y: v.y }
    }
}

/// Opaque plane handle.
pub struct MtContext {
    plane: PlaneContext,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MtStatus {
    match e {
        Error::Config(_) | Error::Io(_) => MtStatus::Config,
        Error::Domain(_) => MtStatus::Domain,
        Error::Numerical(_) => MtStatus::Numerical,
        Error::Unsupported(_) => MtStatus::Unsupported,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, records any error, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MtStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            MtStatus::Null
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            MtStatus::Panic
        }
    }
}

unsafe fn context<'a>(ctx: *const MtContext) -> Result<&'a PlaneContext, Fail> {
    ctx.as_ref().map(|c| &c.plane).ok_or(Fail::Null("ctx"))
}

unsafe fn string<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail::Lib(Error::Config(format!("{what} is not valid UTF-8"))))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    out.write(value);
    Ok(())
}

fn table_size(n: usize) -> usize {
    if n == 0 {
        DEFAULT_TABLE_SIZE
    } else {
        n
    }
}

unsafe fn new_context(spec: NormSpec, table: usize, out: *mut *mut MtContext) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    let normalize = spec.normalized_by_default();
    let plane = build_context(spec, table_size(table), normalize)?;
    out.write(Box::into_raw(Box::new(MtContext { plane })));
    Ok(())
}

/// Builds a plane from a builtin name such as `"builtin:lp:4"`.
/// `table_size` 0 selects the default circle table size.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mt_context_new_builtin(
    spec: *const c_char,
    table_size: usize,
    out: *mut *mut MtContext,
) -> MtStatus {
    guard(|| {
        let spec = NormSpec::parse_builtin(string(spec, "spec")?)?;
        new_context(spec, table_size, out)
    })
}

/// Builds a plane from a JSON norm description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mt_context_new_json(
    json: *const c_char,
    table_size: usize,
    out: *mut *mut MtContext,
) -> MtStatus {
    guard(|| {
        let spec = NormSpec::from_json(string(json, "json")?)?;
        spec.validate()?;
        new_context(spec, table_size, out)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `ctx` must come from one of the constructors and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mt_context_free(ctx: *mut MtContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_radon_flag(ctx: *const MtContext, out: *mut MtRadonFlag) -> MtStatus {
    guard(|| {
        let flag = match context(ctx)?.radon_flag() {
            RadonFlag::Radon => MtRadonFlag::Radon,
            RadonFlag::NotRadon => MtRadonFlag::NotRadon,
            RadonFlag::Unknown => MtRadonFlag::Unknown,
        };
        write(out, flag)
    })
}

/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_norm(ctx: *const MtContext, v: MtVec2, out: *mut f64) -> MtStatus {
    guard(|| write(out, context(ctx)?.norm(v.into())?))
}

/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_antinorm(ctx: *const MtContext, v: MtVec2, out: *mut f64) -> MtStatus {
    guard(|| write(out, context(ctx)?.antinorm(v.into())?))
}

/// Birkhoff map: the direction `x` is Birkhoff orthogonal to, scaled to
/// antinorm one and lying to the left of `x`.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_b(ctx: *const MtContext, x: MtVec2, out: *mut MtVec2) -> MtStatus {
    guard(|| write(out, birkhoff::birkhoff_b(context(ctx)?, x.into())?.into()))
}

type PairFn = fn(&PlaneContext, Vec2, Vec2) -> minktrig::Result<f64>;

unsafe fn pair(f: PairFn, ctx: *const MtContext, x: MtVec2, y: MtVec2, out: *mut f64) -> MtStatus {
    guard(|| write(out, f(context(ctx)?, x.into(), y.into())?))
}

/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_cm(ctx: *const MtContext, x: MtVec2, y: MtVec2, out: *mut f64) -> MtStatus {
    pair(trig::cm, ctx, x, y, out)
}

/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_sn(ctx: *const MtContext, x: MtVec2, y: MtVec2, out: *mut f64) -> MtStatus {
    pair(trig::sn, ctx, x, y, out)
}

/// Only defined in Radon planes; otherwise `MT_STATUS_UNSUPPORTED`.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_cn(ctx: *const MtContext, x: MtVec2, y: MtVec2, out: *mut f64) -> MtStatus {
    pair(trig::cn, ctx, x, y, out)
}

/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_ca(ctx: *const MtContext, x: MtVec2, y: MtVec2, out: *mut f64) -> MtStatus {
    pair(trig::ca, ctx, x, y, out)
}

/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_gateaux(ctx: *const MtContext, x: MtVec2, y: MtVec2, out: *mut f64) -> MtStatus {
    pair(trig::gateaux, ctx, x, y, out)
}

/// Distortion of the tangent pair from an exterior point `p`.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_gamma_from_point(ctx: *const MtContext, p: MtVec2, out: *mut f64) -> MtStatus {
    guard(|| write(out, distortion::gamma_from_point(context(ctx)?, p.into())?))
}

/// Distortion of the tangents at two independent directions `x`, `y`.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_gamma_pair(ctx: *const MtContext, x: MtVec2, y: MtVec2, out: *mut f64) -> MtStatus {
    pair(distortion::gamma_pair, ctx, x, y, out)
}

/// Message for the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
