//! C ABI for `dyndiv`.
//!
//! Every function returns a [`DyndivStatus`]; on failure the message is
//! available from [`dyndiv_last_error_message`] on the same thread. Strings
//! handed out by the library are freed with [`dyndiv_string_free`], reports
//! with [`dyndiv_report_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dyndiv::cli::{parse_config, report_json, run, timeline_csv, RunOutput};
use dyndiv::engine::{classify_rates, FamilyKind, RateVerdict};
use dyndiv::{Error, Verdict};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DyndivStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Numerical = 4,
    OutOfRange = 5,
    Internal = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DyndivVerdict {
    No = 0,
    Yes = 1,
    Unknown = 2,
    Indeterminate = 3,
}

impl From<Verdict> for DyndivVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::No => DyndivVerdict::No,
            Verdict::Yes => DyndivVerdict::Yes,
            Verdict::Unknown => DyndivVerdict::Unknown,
            Verdict::Indeterminate => DyndivVerdict::Indeterminate,
        }
    }
}

/// Verdicts at one grid time.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyndivPoint {
    pub t: f64,
    pub cp: DyndivVerdict,
    pub p: DyndivVerdict,
    pub d: DyndivVerdict,
}

/// Verdicts over the whole grid plus oracle counts.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyndivSummary {
    pub cp: DyndivVerdict,
    pub p: DyndivVerdict,
    pub d: DyndivVerdict,
    pub oracle_checks: usize,
    pub oracle_disagreements: usize,
}

/// Pointwise verdicts for a single rate vector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyndivRateVerdict {
    pub cp: DyndivVerdict,
    pub p: DyndivVerdict,
    pub d: DyndivVerdict,
}

impl From<&RateVerdict> for DyndivRateVerdict {
    fn from(v: &RateVerdict) -> Self {
        Self {
            cp: v.cp.into(),
            p: v.p.into(),
            d: v.d.into(),
        }
    }
}

/// Opaque result of [`dyndiv_analyze`].
pub struct DyndivReport {
    output: RunOutput,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(DyndivStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_config() {
            DyndivStatus::Config
        } else if e.is_numerical() {
            DyndivStatus::Numerical
        } else {
            DyndivStatus::Internal
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(DyndivStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DyndivStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DyndivStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            DyndivStatus::Panic
        }
    }
}

unsafe fn report_ref<'a>(report: *const DyndivReport) -> Result<&'a DyndivReport, Failure> {
    report.as_ref().ok_or_else(|| null("report"))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(DyndivStatus::Internal, "output contains a NUL byte".into()))
}

/// Parses a TOML configuration, runs the analysis and stores a new report
/// in `*out`.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_analyze(
    config_toml: *const c_char,
    out: *mut *mut DyndivReport,
) -> DyndivStatus {
    guard(|| {
        if config_toml.is_null() {
            return Err(null("config"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(config_toml)
            .to_str()
            .map_err(|e| Failure(DyndivStatus::InvalidUtf8, format!("config is not UTF-8: {e}")))?;
        let cfg = parse_config(text)?;
        let output = run(&cfg)?;
        *out = Box::into_raw(Box::new(DyndivReport { output }));
        Ok(())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from [`dyndiv_analyze`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_report_free(report: *mut DyndivReport) {
    if !report.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(report))));
    }
}

/// Number of grid points, or 0 for a null report.
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_report_len(report: *const DyndivReport) -> usize {
    report
        .as_ref()
        .map_or(0, |r| r.output.report.points.len())
}

/// # Safety
/// `report` must be a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_report_point(
    report: *const DyndivReport,
    index: usize,
    out: *mut DyndivPoint,
) -> DyndivStatus {
    guard(|| {
        let r = report_ref(report)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let points = &r.output.report.points;
        let p = points.get(index).ok_or_else(|| {
            Failure(
                DyndivStatus::OutOfRange,
                format!("point {index} out of range (len {})", points.len()),
            )
        })?;
        *out = DyndivPoint {
            t: p.t,
            cp: p.cp.into(),
            p: p.p.into(),
            d: p.d.into(),
        };
        Ok(())
    })
}

/// # Safety
/// `report` must be a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_report_summary(
    report: *const DyndivReport,
    out: *mut DyndivSummary,
) -> DyndivStatus {
    guard(|| {
        let r = report_ref(report)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = &r.output.report.summary;
        *out = DyndivSummary {
            cp: s.cp.into(),
            p: s.p.into(),
            d: s.d.into(),
            oracle_checks: s.oracle_checks,
            oracle_disagreements: s.oracle_disagreements,
        };
        Ok(())
    })
}

/// Full JSON report; free the string with [`dyndiv_string_free`].
///
/// # Safety
/// `report` must be a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_report_to_json(
    report: *const DyndivReport,
    out: *mut *mut c_char,
) -> DyndivStatus {
    guard(|| {
        let r = report_ref(report)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = into_c_string(report_json(&r.output)?)?;
        Ok(())
    })
}

/// Timeline CSV; free the string with [`dyndiv_string_free`].
///
/// # Safety
/// `report` must be a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_report_to_csv(
    report: *const DyndivReport,
    out: *mut *mut c_char,
) -> DyndivStatus {
    guard(|| {
        let r = report_ref(report)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = into_c_string(timeline_csv(&r.output.report)?)?;
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn classify(
    kind: FamilyKind,
    dim: usize,
    rates: *const f64,
    len: usize,
    out: *mut DyndivRateVerdict,
) -> DyndivStatus {
    guard(|| {
        if rates.is_null() {
            return Err(null("rates"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let rates = std::slice::from_raw_parts(rates, len);
        *out = (&classify_rates(kind, dim, rates)?).into();
        Ok(())
    })
}

/// Pointwise verdicts for qubit Pauli rates `(γ₁, γ₂, γ₃)`.
///
/// # Safety
/// `rates` must point to 3 doubles and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_classify_pauli(
    rates: *const f64,
    out: *mut DyndivRateVerdict,
) -> DyndivStatus {
    classify(FamilyKind::Pauli, 2, rates, 3, out)
}

/// Pointwise verdicts for generalized Pauli rates `γ₁ … γ_{d+1}`.
///
/// # Safety
/// `rates` must point to `len` doubles and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_classify_gpc(
    rates: *const f64,
    len: usize,
    dim: usize,
    out: *mut DyndivRateVerdict,
) -> DyndivStatus {
    classify(FamilyKind::Gpc, dim, rates, len, out)
}

/// Pointwise verdicts for phase-covariant rates `(γ₊, γ₋, γ₃)`.
///
/// # Safety
/// `rates` must point to 3 doubles and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dyndiv_classify_phasecov(
    rates: *const f64,
    out: *mut DyndivRateVerdict,
) -> DyndivStatus {
    classify(FamilyKind::PhaseCov, 2, rates, 3, out)
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn dyndiv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn dyndiv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
