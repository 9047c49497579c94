//! C ABI over `sched-reduce`.
//!
//! Instances and schedules cross the boundary as the JSON documents the CLI
//! reads and writes. Objects are opaque handles released with their `_free`
//! function; strings returned through `char **` are released with
//! `sr_string_free`. Every fallible call returns an `SrStatus`, and on
//! failure `sr_last_error` describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sched_reduce::cli::format::{CommDelayDoc, Document, ScheduleDoc, UmpsDoc};
use sched_reduce::cli::gap::roundtrip_commdelay;
use sched_reduce::model::{validate_commdelay, validate_related, validate_umps, UmpsInstance};
use sched_reduce::reductions::{umps_to_commdelay, CommDelayReductionArtifact};
use sched_reduce::solvers::{solve_umps_exact, SolveLimits, SolveResult};
use sched_reduce::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Format = 3,
    InvalidInstance = 4,
    WrongKind = 5,
    Infeasible = 6,
    BudgetExceeded = 7,
    TooLarge = 8,
    Panic = 9,
    Other = 10,
}

impl From<&Error> for SrStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Format(_) | Error::Io(_) => SrStatus::Format,
            Error::InvalidInstance(_) | Error::CycleDetected(_) | Error::DegenerateInstance(_) => {
                SrStatus::InvalidInstance
            }
            Error::WrongKind { .. } => SrStatus::WrongKind,
            Error::InfeasibleInput(_) | Error::CoLocationViolated { .. } | Error::JobSetMismatch(_) => {
                SrStatus::Infeasible
            }
            Error::BudgetExceeded(_) => SrStatus::BudgetExceeded,
            Error::TooLarge(_) | Error::Overflow(_) => SrStatus::TooLarge,
            _ => SrStatus::Other,
        }
    }
}

/// A UMPS instance.
pub struct SrUmps(UmpsInstance);

/// Result of an exact solve.
pub struct SrSolveResult(SolveResult);

/// Output and provenance of the communication-delay reduction.
pub struct SrCommDelayArtifact(CommDelayReductionArtifact);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: SrStatus, msg: String) -> SrStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), SrStatus>) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SrStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(SrStatus::Panic, "internal panic".into()),
    }
}

fn lift<T>(r: sched_reduce::Result<T>) -> Result<T, SrStatus> {
    r.map_err(|e| fail(SrStatus::from(&e), e.to_string()))
}

unsafe fn input_str<'a>(s: *const c_char) -> Result<&'a str, SrStatus> {
    if s.is_null() {
        return Err(fail(SrStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(SrStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, SrStatus> {
    p.as_ref().ok_or_else(|| fail(SrStatus::NullArgument, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), SrStatus> {
    if out.is_null() {
        return Err(fail(SrStatus::NullArgument, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), SrStatus> {
    let c = CString::new(s).map_err(|_| fail(SrStatus::Other, "string contains NUL".into()))?;
    put(out, c.into_raw())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a `"kind": "umps"` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_umps_from_json(json: *const c_char, out: *mut *mut SrUmps) -> SrStatus {
    guard(|| {
        let text = input_str(json)?;
        let inst = lift(Document::parse(text).and_then(Document::into_umps))?;
        put(out, Box::into_raw(Box::new(SrUmps(inst))))
    })
}

/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_umps_to_json(inst: *const SrUmps, out: *mut *mut c_char) -> SrStatus {
    guard(|| {
        let inst = handle(inst)?;
        put_string(out, Document::Umps(UmpsDoc::from_model(&inst.0)).render())
    })
}

/// # Safety
/// `inst` must be a live handle; `n` and `m` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_umps_size(inst: *const SrUmps, n: *mut usize, m: *mut usize) -> SrStatus {
    guard(|| {
        let inst = handle(inst)?;
        put(n, inst.0.n())?;
        put(m, inst.0.m())
    })
}

/// # Safety
/// `inst` must come from `sr_umps_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_umps_free(inst: *mut SrUmps) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Exact minimum makespan. `max_states` of 0 keeps the default budget.
/// A run that exhausts the budget still succeeds; check
/// `sr_solve_result_proven`.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_umps_solve_exact(
    inst: *const SrUmps,
    max_jobs: usize,
    max_states: u64,
    out: *mut *mut SrSolveResult,
) -> SrStatus {
    guard(|| {
        let inst = handle(inst)?;
        let mut lim = SolveLimits::default().with_max_jobs(max_jobs);
        if max_states > 0 {
            lim.max_states = max_states;
        }
        let r = lift(solve_umps_exact(&inst.0, &lim))?;
        put(out, Box::into_raw(Box::new(SrSolveResult(r))))
    })
}

/// Optimum as a reduced fraction `num / den`.
///
/// # Safety
/// `r` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_solve_result_optimum(r: *const SrSolveResult, num: *mut i64, den: *mut i64) -> SrStatus {
    guard(|| {
        let r = handle(r)?;
        let (p, q) = (*r.0.optimum.numer(), *r.0.optimum.denom());
        let p = i64::try_from(p).map_err(|_| fail(SrStatus::TooLarge, "numerator exceeds int64".into()))?;
        let q = i64::try_from(q).map_err(|_| fail(SrStatus::TooLarge, "denominator exceeds int64".into()))?;
        put(num, p)?;
        put(den, q)
    })
}

/// 1 when the optimum is proven, 0 when a budget ran out, -1 on NULL.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sr_solve_result_proven(r: *const SrSolveResult) -> i32 {
    r.as_ref().map_or(-1, |r| i32::from(r.0.proven_optimal))
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sr_solve_result_states(r: *const SrSolveResult) -> u64 {
    r.as_ref().map_or(0, |r| r.0.states_explored)
}

/// The schedule as a `"kind": "schedule"` document.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_solve_result_schedule_json(r: *const SrSolveResult, out: *mut *mut c_char) -> SrStatus {
    guard(|| {
        let r = handle(r)?;
        put_string(out, Document::Schedule(ScheduleDoc::from_model(&r.0.schedule)).render())
    })
}

/// # Safety
/// `r` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_solve_result_free(r: *mut SrSolveResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Builds the communication-delay instance with one dummy job per machine.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_umps_to_commdelay(inst: *const SrUmps, out: *mut *mut SrCommDelayArtifact) -> SrStatus {
    guard(|| {
        let inst = handle(inst)?;
        let art = lift(umps_to_commdelay(&inst.0))?;
        put(out, Box::into_raw(Box::new(SrCommDelayArtifact(art))))
    })
}

/// # Safety
/// `art` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sr_commdelay_artifact_c_infinity(art: *const SrCommDelayArtifact) -> u64 {
    art.as_ref().map_or(0, |a| a.0.c_infinity)
}

/// The reduced instance as a `"kind": "commdelay"` document.
///
/// # Safety
/// `art` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_commdelay_artifact_output_json(
    art: *const SrCommDelayArtifact,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let art = handle(art)?;
        put_string(out, Document::Commdelay(CommDelayDoc::from_model(&art.0.output)).render())
    })
}

/// # Safety
/// `art` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_commdelay_artifact_free(art: *mut SrCommDelayArtifact) {
    if !art.is_null() {
        drop(Box::from_raw(art));
    }
}

/// Checks a schedule (or solve result) document against a UMPS,
/// commdelay or related instance document. `feasible` receives 1 or 0;
/// the violation list, if any, is available through `sr_last_error`.
///
/// # Safety
/// Both strings must be NUL-terminated; `feasible` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_verify_json(
    instance_json: *const c_char,
    schedule_json: *const c_char,
    feasible: *mut i32,
) -> SrStatus {
    guard(|| {
        let inst = lift(Document::parse(input_str(instance_json)?))?;
        let sched = lift(Document::parse(input_str(schedule_json)?).and_then(Document::into_schedule))?;
        let report = lift(match inst {
            Document::Umps(d) => d.to_model().and_then(|i| validate_umps(&i, &sched)),
            Document::Commdelay(d) => d.to_model().and_then(|i| validate_commdelay(&i, &sched)),
            Document::Related(d) => d.to_model().and_then(|i| validate_related(&i, &sched)),
            other => Err(Error::WrongKind {
                expected: "umps, commdelay or related".into(),
                found: other.kind().into(),
            }),
        })?;
        if !report.feasible() {
            set_error(report.to_string());
        }
        put(feasible, i32::from(report.feasible()))
    })
}

/// One CSV gap row (no header, no newline) for the communication-delay
/// round trip of `inst`.
///
/// # Safety
/// `inst` must be a live handle; `id` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_roundtrip_commdelay(
    inst: *const SrUmps,
    id: *const c_char,
    max_jobs: usize,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let inst = handle(inst)?;
        let id = input_str(id)?;
        let lim = SolveLimits::default().with_max_jobs(max_jobs);
        let row = lift(roundtrip_commdelay(id, &inst.0, &lim, false))?;
        put_string(out, row.csv_line())
    })
}
