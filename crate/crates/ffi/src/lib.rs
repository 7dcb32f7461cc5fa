//! C interface to `sepgpt`.
//!
//! Every fallible call returns a [`SepgptStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and
//! read back with [`sepgpt_last_error`]. Handles are opaque and must be
//! released with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sepgpt::distinguish::{arai_dot_sum, helstrom_bound_product};
use sepgpt::game::{play_named, sep_vs_qubit_count, GameResult};
use sepgpt::operator::{BlochVector, ProductPureState};
use sepgpt::report::serialize;
use sepgpt::{run_all, run_suite, Error, Suite, SuiteOptions, SuiteReport};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SepgptStatus {
    Ok = 0,
    InvalidArgument = 1,
    UnsupportedInstance = 2,
    InconsistentModel = 3,
    StrategyMismatch = 4,
    Parse = 5,
    Io = 6,
    Json = 7,
    NullPointer = 8,
    Utf8 = 9,
    Panic = 10,
}

impl From<&Error> for SepgptStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => SepgptStatus::InvalidArgument,
            Error::UnsupportedInstance(_) => SepgptStatus::UnsupportedInstance,
            Error::InconsistentModel(_) => SepgptStatus::InconsistentModel,
            Error::StrategyMismatch(_) => SepgptStatus::StrategyMismatch,
            Error::Parse(_) => SepgptStatus::Parse,
            Error::Io(_) => SepgptStatus::Io,
            Error::Json(_) => SepgptStatus::Json,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(SepgptStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(SepgptStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SepgptStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic, and returns its status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SepgptStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SepgptStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            SepgptStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(SepgptStatus::Utf8, format!("{what} is not UTF-8: {e}")))
}

/// Message of the last failed call on this thread, or null after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sepgpt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn sepgpt_status_name(status: SepgptStatus) -> *const c_char {
    let s: &'static CStr = match status {
        SepgptStatus::Ok => c"ok",
        SepgptStatus::InvalidArgument => c"invalid-argument",
        SepgptStatus::UnsupportedInstance => c"unsupported-instance",
        SepgptStatus::InconsistentModel => c"inconsistent-model",
        SepgptStatus::StrategyMismatch => c"strategy-mismatch",
        SepgptStatus::Parse => c"parse",
        SepgptStatus::Io => c"io",
        SepgptStatus::Json => c"json",
        SepgptStatus::NullPointer => c"null-pointer",
        SepgptStatus::Utf8 => c"utf8",
        SepgptStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// A finished suite report with its JSON text.
pub struct SepgptReport {
    report: SuiteReport,
    json: CString,
}

/// Runs the named suite (or `all`) with default options apart from `seed`
/// and `rounds`, and stores a new report handle in `*out`.
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_run_suite(
    name: *const c_char,
    seed: u64,
    rounds: u64,
    out: *mut *mut SepgptReport,
) -> SepgptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let name = read_str(name, "name")?;
        let opts = SuiteOptions { seed, rounds, ..SuiteOptions::default() };
        let report = if name == "all" {
            run_all(&opts)?
        } else {
            let suite = Suite::from_name(name)
                .ok_or_else(|| Failure(SepgptStatus::InvalidArgument, format!("unknown suite `{name}`")))?;
            run_suite(suite, &opts)?
        };
        let json = CString::new(serialize(&report)?).map_err(|e| Failure(SepgptStatus::Json, e.to_string()))?;
        *out = Box::into_raw(Box::new(SepgptReport { report, json }));
        Ok(())
    })
}

/// True iff every check passed. False for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_report_passed(r: *const SepgptReport) -> bool {
    r.as_ref().is_some_and(|r| r.report.passed())
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_report_check_count(r: *const SepgptReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.checks.len())
}

/// JSON text of the report, owned by the handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_report_json(r: *const SepgptReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_report_free(r: *mut SepgptReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Outcome of one simulated game.
pub struct SepgptGameResult {
    result: GameResult,
}

/// Plays `n` messages with the strategy family `theory` (`sep`, `quantum`,
/// `quantum-helstrom`, `frozen`, `classical`). `qubits = 0` lets the
/// quantum strategy pick enough qubits.
///
/// # Safety
/// `theory` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_play(
    n: usize,
    theory: *const c_char,
    qubits: usize,
    rounds: u64,
    seed: u64,
    out: *mut *mut SepgptGameResult,
) -> SepgptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let theory = read_str(theory, "theory")?;
        let qubits = (qubits > 0).then_some(qubits);
        let result = play_named(theory, n, qubits, rounds, seed)?;
        *out = Box::into_raw(Box::new(SepgptGameResult { result }));
        Ok(())
    })
}

/// Fraction of rounds won. NaN for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_game_success(g: *const SepgptGameResult) -> f64 {
    g.as_ref().map_or(f64::NAN, |g| g.result.success)
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_game_wins(g: *const SepgptGameResult) -> u64 {
    g.as_ref().map_or(0, |g| g.result.wins)
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_game_rounds(g: *const SepgptGameResult) -> u64 {
    g.as_ref().map_or(0, |g| g.result.rounds_played)
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_game_free(g: *mut SepgptGameResult) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Resources needed for `12^k` messages: `2k` SEP-bits against
/// `ceil(log2 12^k)` qubits.
///
/// # Safety
/// `sep_bits` and `qubits` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_sep_vs_qubit_count(k: usize, sep_bits: *mut usize, qubits: *mut usize) -> SepgptStatus {
    guard(|| {
        if sep_bits.is_null() || qubits.is_null() {
            return Err(null("output"));
        }
        let (m, q) = sep_vs_qubit_count(k)?;
        *sep_bits = m;
        *qubits = q;
        Ok(())
    })
}

/// A product of two pure qubit states given by unit Bloch vectors.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SepgptProductState {
    pub first: [f64; 3],
    pub second: [f64; 3],
}

fn product(s: &SepgptProductState) -> Result<ProductPureState, Failure> {
    Ok(ProductPureState::new(BlochVector::pure(s.first)?, BlochVector::pure(s.second)?)?)
}

/// `a1.a2 + b1.b2` over the two factors; the pair is perfectly distinguishable
/// with separable effects iff this is at most zero.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_arai_dot_sum(
    s: *const SepgptProductState,
    t: *const SepgptProductState,
    out: *mut f64,
) -> SepgptStatus {
    guard(|| {
        let (s, t) = (s.as_ref().ok_or_else(|| null("s"))?, t.as_ref().ok_or_else(|| null("t"))?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = arai_dot_sum(&product(s)?, &product(t)?);
        Ok(())
    })
}

/// Best quantum success probability for telling `s` from `t`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sepgpt_helstrom_bound(
    s: *const SepgptProductState,
    t: *const SepgptProductState,
    out: *mut f64,
) -> SepgptStatus {
    guard(|| {
        let (s, t) = (s.as_ref().ok_or_else(|| null("s"))?, t.as_ref().ok_or_else(|| null("t"))?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = helstrom_bound_product(&product(s)?, &product(t)?);
        Ok(())
    })
}
