//! C ABI for `gamma-aq`.
//!
//! Problems and reports are opaque handles owned by the caller and released
//! with the matching `_free` function. Every fallible call returns a
//! [`GammaAqStatus`]; on failure the message is available from
//! [`gamma_aq_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use gamma_aq::cache::Cache;
use gamma_aq::commands::{cmd_classical, cmd_pi0, cmd_piy, PiyArgs, WeightArg};
use gamma_aq::problem::{parse_problem_str, ProblemFile};
use gamma_aq::report::Report;
use gamma_aq::verify::Status;
use gamma_aq::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaAqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    ResourceCap = 5,
    InvalidArgument = 6,
    Computation = 7,
    Io = 8,
    Panic = 9,
}

/// Outcome recorded in a report.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaAqOutcome {
    Pass = 0,
    Fail = 1,
    Inconclusive = 2,
    Info = 3,
    Error = 4,
}

/// A parsed and validated problem file.
pub struct GammaAqProblem(ProblemFile);

/// A command report with its JSON rendering.
pub struct GammaAqReport {
    report: Report,
    json: CString,
}

/// Options for [`gamma_aq_piy`]. Negative integers mean "use the default".
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GammaAqPiyOptions {
    pub degree: i32,
    pub trunc: i32,
    pub bound: i32,
    /// 0 takes π₀, 1 contracts with `t`, n > 1 with `Λⁿ ∘ t`.
    pub weight: u32,
    pub absolute: bool,
    pub no_empty_partition: bool,
    /// 0 keeps the default resource cap.
    pub cap: u64,
}

impl Default for GammaAqPiyOptions {
    fn default() -> Self {
        GammaAqPiyOptions {
            degree: -1,
            trunc: -1,
            bound: -1,
            weight: 0,
            absolute: false,
            no_empty_partition: false,
            cap: 0,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(err: &Error) -> GammaAqStatus {
    match err {
        Error::Parse { .. } => GammaAqStatus::Parse,
        Error::Validation(_) | Error::InvalidField(_) | Error::MalformedAction(_) => GammaAqStatus::Validation,
        Error::ResourceCap { .. } | Error::DimensionOverflow { .. } => GammaAqStatus::ResourceCap,
        Error::InvalidArgument(_) | Error::Truncation { .. } | Error::TruncationMismatch(..) => {
            GammaAqStatus::InvalidArgument
        }
        Error::Io(_) | Error::Cache(_) => GammaAqStatus::Io,
        _ => GammaAqStatus::Computation,
    }
}

fn fail(code: GammaAqStatus, msg: &str) -> GammaAqStatus {
    set_error(msg);
    code
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), GammaAqStatus>) -> GammaAqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GammaAqStatus::Ok,
        Ok(Err(code)) => code,
        Err(_) => fail(GammaAqStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: gamma_aq::Result<T>) -> Result<T, GammaAqStatus> {
    r.map_err(|e| fail(code_of(&e), &e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, GammaAqStatus> {
    if s.is_null() {
        return Err(fail(GammaAqStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(GammaAqStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn emit_report(report: Report, out: *mut *mut GammaAqReport) -> Result<(), GammaAqStatus> {
    let json = CString::new(report.to_json()).map_err(|_| fail(GammaAqStatus::Computation, "nul in report"))?;
    *out = Box::into_raw(Box::new(GammaAqReport { report, json }));
    Ok(())
}

fn problem_ref<'a>(p: *const GammaAqProblem) -> Result<&'a ProblemFile, GammaAqStatus> {
    unsafe { p.as_ref() }
        .map(|p| &p.0)
        .ok_or_else(|| fail(GammaAqStatus::NullPointer, "null problem"))
}

fn check_out<T>(out: *mut *mut T) -> Result<(), GammaAqStatus> {
    if out.is_null() {
        Err(fail(GammaAqStatus::NullPointer, "null output pointer"))
    } else {
        unsafe { *out = ptr::null_mut() };
        Ok(())
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn gamma_aq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gamma_aq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses and validates problem-file text.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gamma_aq_problem_parse(text: *const c_char, out: *mut *mut GammaAqProblem) -> GammaAqStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(text)?;
        let p = lift(parse_problem_str("ffi", text))?;
        *out = Box::into_raw(Box::new(GammaAqProblem(p)));
        Ok(())
    })
}

/// # Safety
/// `problem` must come from [`gamma_aq_problem_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gamma_aq_problem_free(problem: *mut GammaAqProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// π₀ against Kähler differentials. `trunc` 0 means the default `N = 2`.
///
/// # Safety
/// `problem` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gamma_aq_pi0(
    problem: *const GammaAqProblem,
    trunc: u32,
    out: *mut *mut GammaAqReport,
) -> GammaAqStatus {
    guard(|| {
        check_out(out)?;
        let p = problem_ref(problem)?;
        let r = lift(cmd_pi0(p, (trunc > 0).then_some(trunc as usize)))?;
        emit_report(r, out)
    })
}

/// Classical `D₀` or `D₁`.
///
/// # Safety
/// `problem` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gamma_aq_classical(
    problem: *const GammaAqProblem,
    degree: u32,
    out: *mut *mut GammaAqReport,
) -> GammaAqStatus {
    guard(|| {
        check_out(out)?;
        let p = problem_ref(problem)?;
        let r = lift(cmd_classical(p, degree as usize))?;
        emit_report(r, out)
    })
}

/// Fills `options` with defaults.
///
/// # Safety
/// `options` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gamma_aq_piy_options_default(options: *mut GammaAqPiyOptions) {
    if let Some(o) = options.as_mut() {
        *o = GammaAqPiyOptions::default();
    }
}

/// Relative derived functors. `options` may be null for defaults and
/// `cache_dir` null to skip the cache. A resource-cap failure is reported as
/// an ERROR report (status `Ok`) carrying the largest feasible truncation.
///
/// # Safety
/// Pointers must be null or valid as described above; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gamma_aq_piy(
    problem: *const GammaAqProblem,
    options: *const GammaAqPiyOptions,
    cache_dir: *const c_char,
    out: *mut *mut GammaAqReport,
) -> GammaAqStatus {
    guard(|| {
        check_out(out)?;
        let p = problem_ref(problem)?;
        let o = options.as_ref().copied().unwrap_or_default();
        let opt = |v: i32| (v >= 0).then_some(v as usize);
        let args = PiyArgs {
            degree: opt(o.degree),
            trunc: opt(o.trunc),
            bound: opt(o.bound),
            absolute: o.absolute,
            weight: match o.weight {
                0 => None,
                1 => Some(WeightArg::T),
                n => Some(WeightArg::LambdaT(n as usize)),
            },
            no_empty_partition: o.no_empty_partition,
            cap: (o.cap > 0).then_some(o.cap as usize),
            basis_strategy: false,
        };
        let cache = if cache_dir.is_null() {
            None
        } else {
            Some(Cache::new(PathBuf::from(read_str(cache_dir)?)))
        };
        let r = lift(cmd_piy(p, &args, cache.as_ref()))?;
        emit_report(r, out)
    })
}

/// The report as a JSON document, owned by the report.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gamma_aq_report_json(report: *const GammaAqReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gamma_aq_report_outcome(report: *const GammaAqReport) -> GammaAqOutcome {
    match report.as_ref().map(|r| r.report.status) {
        Some(Status::Pass) => GammaAqOutcome::Pass,
        Some(Status::Fail) => GammaAqOutcome::Fail,
        Some(Status::Inconclusive) => GammaAqOutcome::Inconclusive,
        Some(Status::Info) => GammaAqOutcome::Info,
        Some(Status::Error) | None => GammaAqOutcome::Error,
    }
}

/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gamma_aq_report_free(report: *mut GammaAqReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
