//! C ABI over `modrep`.
//!
//! Every fallible call returns a [`ModrepStatus`]; on failure the message is
//! available from [`modrep_last_error_message`] on the same thread. Strings
//! handed out through `out` parameters are owned by the caller and must be
//! released with [`modrep_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modrep::field_tower::{FieldTower, FIELD_BOUND};
use modrep::report::{
    diagram_json, emit_report, run_suite, table, tower_for, Format, Suite, SuiteConfig,
};
use modrep::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModrepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Unsupported = 4,
    Computation = 5,
    Panic = 6,
}

/// Opaque handle to a finite field `F_q` together with its quadratic extension.
pub struct ModrepTower {
    inner: FieldTower,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ModrepStatus, String);

fn status_of(e: &Error) -> ModrepStatus {
    match e {
        Error::NotPrime(_)
        | Error::NotPrimePower(_)
        | Error::BoundExceeded { .. }
        | Error::OutOfRange(_)
        | Error::EvenCharacteristic(_)
        | Error::Config(_) => ModrepStatus::InvalidArgument,
        Error::UnsupportedGroup { .. } => ModrepStatus::Unsupported,
        _ => ModrepStatus::Computation,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|l| *l.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ModrepStatus {
    LAST_ERROR.with(|l| *l.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ModrepStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside modrep".into());
            ModrepStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(ModrepStatus::NullPointer, format!("{what} is null"))
}

/// `None` for a null pointer.
unsafe fn opt_str<'a>(s: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if s.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(s)
        .to_str()
        .map(Some)
        .map_err(|_| Failure(ModrepStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn req_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    opt_str(s, what)?.ok_or_else(|| null(what))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(ModrepStatus::Computation, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn tower_ref<'a>(t: *const ModrepTower) -> Result<&'a ModrepTower, Failure> {
    t.as_ref().ok_or_else(|| null("tower"))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn modrep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null after a success.
/// Valid until the next `modrep_*` call on this thread.
#[no_mangle]
pub extern "C" fn modrep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|l| l.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned through an `out` parameter. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn modrep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds `F_q` and `F_{q^2}`. `q` must be a prime power within the field bound.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn modrep_tower_new(q: u64, out: *mut *mut ModrepTower) -> ModrepStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = tower_for(q, FIELD_BOUND)?;
        *out = Box::into_raw(Box::new(ModrepTower { inner }));
        Ok(())
    })
}

/// # Safety
/// `t` must come from `modrep_tower_new` and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn modrep_tower_free(t: *mut ModrepTower) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Characteristic, degree and size of the base field. Any output may be null.
///
/// # Safety
/// `t` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn modrep_tower_params(
    t: *const ModrepTower,
    p: *mut u32,
    n: *mut u32,
    q: *mut u32,
) -> ModrepStatus {
    guard(|| {
        let t = &tower_ref(t)?.inner;
        for (dst, v) in [(p, t.p()), (n, t.n()), (q, t.q())] {
            if !dst.is_null() {
                *dst = v;
            }
        }
        Ok(())
    })
}

/// Table for the tower's field as JSON. `what` is `"dims"` or `"chars"`.
///
/// # Safety
/// `t` must be a live handle, `what` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modrep_table_json(
    t: *const ModrepTower,
    what: *const c_char,
    out: *mut *mut c_char,
) -> ModrepStatus {
    guard(|| {
        let t = &tower_ref(t)?.inner;
        let what = req_str(what, "what")?;
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, table(t.q() as u64, what, Format::Json)?)
    })
}

/// Matrices of the comparison diagram for weight `k` and scalar `s` as JSON.
/// `form` is `"sl2_over_fq"`, `"u2_over_fq2"` or `"gl2_extended"`; null means the first.
///
/// # Safety
/// `t` must be a live handle, `form` null or NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modrep_diagram_json(
    t: *const ModrepTower,
    k: i64,
    s: i64,
    form: *const c_char,
    out: *mut *mut c_char,
) -> ModrepStatus {
    guard(|| {
        let t = &tower_ref(t)?.inner;
        let form = opt_str(form, "form")?.unwrap_or("sl2_over_fq");
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, diagram_json(t.q() as u64, k, s, form)?)
    })
}

/// Runs verification suites over `qs[0..len]` and writes the report.
///
/// `suites` is a comma-separated list (null means all), `format` is `"json"`,
/// `"tsv"` or `"text"` (null means json). `failures`, when non-null, receives
/// the number of failed checks.
///
/// # Safety
/// `qs` must point to `len` values; strings must be null or NUL-terminated;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modrep_verify(
    qs: *const u64,
    len: usize,
    suites: *const c_char,
    seed: u64,
    format: *const c_char,
    out: *mut *mut c_char,
    failures: *mut usize,
) -> ModrepStatus {
    guard(|| {
        if qs.is_null() && len > 0 {
            return Err(null("qs"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let mut cfg = SuiteConfig {
            seed,
            ..SuiteConfig::default()
        };
        if len > 0 {
            cfg.qs = std::slice::from_raw_parts(qs, len).to_vec();
        }
        if let Some(list) = opt_str(suites, "suites")? {
            cfg.suites.clear();
            for name in list.split(',') {
                cfg.suites.extend(Suite::parse(name.trim())?);
            }
        }
        let format = Format::parse(opt_str(format, "format")?.unwrap_or("json"))?;
        let report = run_suite(&cfg)?;
        if !failures.is_null() {
            *failures = report.failures();
        }
        put_string(out, emit_report(&report, format))
    })
}
