//! C ABI for the casediff simulator.
//!
//! Instances and traces are opaque handles owned by the caller and released
//! with the matching `_free` function. Every call returns a [`CdStatus`];
//! on failure [`cd_last_error`] describes what went wrong on this thread.
//! Strings handed out by the library are released with [`cd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use casediff::comparative::compare_instances;
use casediff::config::{ConfigError, RunConfig, RunSettings};
use casediff::dynamics::{
    coverage_check, simulate_with, threshold_sequence, DiffusionTrace, SimulationOptions,
};
use casediff::{export, ComparativeError, DynamicsError, Instance};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or incomplete TOML configuration.
    Config = 3,
    /// The configuration parsed but describes an invalid instance.
    Validation = 4,
    Simulation = 5,
    OutOfRange = 6,
    /// The individual never adopts within the simulated horizon.
    NotAdopted = 7,
    Comparison = 8,
    Panic = 99,
}

/// A validated instance together with the run settings from its config.
pub struct CdInstance {
    instance: Instance,
    run: RunSettings,
}

pub struct CdTrace {
    instance: Instance,
    trace: DiffusionTrace,
}

struct Failure {
    status: CdStatus,
    message: String,
}

impl Failure {
    fn new(status: CdStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let status = match e {
            ConfigError::Model(_) => CdStatus::Validation,
            _ => CdStatus::Config,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        Failure::new(CdStatus::Simulation, e.to_string())
    }
}

impl From<ComparativeError> for Failure {
    fn from(e: ComparativeError) -> Self {
        Failure::new(CdStatus::Comparison, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: Option<String>) {
    let text = message.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CdStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|payload| {
        let what = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure::new(
            CdStatus::Panic,
            format!("internal error: {what}"),
        ))
    });
    match outcome {
        Ok(()) => {
            set_last_error(None);
            CdStatus::Ok
        }
        Err(f) => {
            set_last_error(Some(f.message));
            f.status
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::new(CdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_slot<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::new(CdStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn hand_out(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Parses a TOML config and builds its instance.
///
/// `seed` may be null; otherwise it overrides the generator seed.
///
/// # Safety
/// `toml` must be a nul-terminated string, `seed` null or valid, and `out`
/// a valid location for the new handle.
#[no_mangle]
pub unsafe extern "C" fn cd_instance_from_toml(
    toml: *const c_char,
    seed: *const u64,
    out: *mut *mut CdInstance,
) -> CdStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let cfg = RunConfig::from_toml(text(toml, "toml")?)?;
        let instance = cfg.instance(seed.as_ref().copied())?;
        *out = Box::into_raw(Box::new(CdInstance {
            instance,
            run: cfg.run,
        }));
        Ok(())
    })
}

/// # Safety
/// `instance` must be null or a handle from [`cd_instance_from_toml`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cd_instance_free(instance: *mut CdInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Number of individuals in the instance.
///
/// # Safety
/// `instance` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cd_instance_size(
    instance: *const CdInstance,
    out: *mut usize,
) -> CdStatus {
    guard(|| {
        *out_slot(out, "out")? = borrow(instance, "instance")?.instance.size();
        Ok(())
    })
}

/// Runs the diffusion. A `horizon` of 0 uses the horizon from the config.
///
/// # Safety
/// `instance` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn cd_simulate(
    instance: *const CdInstance,
    horizon: u64,
    out: *mut *mut CdTrace,
) -> CdStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let handle = borrow(instance, "instance")?;
        let options = SimulationOptions {
            fast_forward: handle.run.fast_forward,
            mode: handle.run.mode,
            ..SimulationOptions::new(if horizon == 0 {
                handle.run.horizon
            } else {
                horizon
            })
        };
        let trace = simulate_with(&handle.instance, &options)?.trace;
        *out = Box::into_raw(Box::new(CdTrace {
            instance: handle.instance.clone(),
            trace,
        }));
        Ok(())
    })
}

/// # Safety
/// `trace` must be null or a handle from [`cd_simulate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cd_trace_free(trace: *mut CdTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Adopters by the end of `period`.
///
/// # Safety
/// `trace` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cd_trace_cumulative_at(
    trace: *const CdTrace,
    period: u64,
    out: *mut usize,
) -> CdStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let trace = &borrow(trace, "trace")?.trace;
        if period > trace.horizon() {
            return Err(Failure::new(
                CdStatus::OutOfRange,
                format!("period {period} beyond horizon {}", trace.horizon()),
            ));
        }
        *out = trace.cumulative_at(period);
        Ok(())
    })
}

/// Period in which `individual` (0-based) adopts.
///
/// # Safety
/// `trace` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cd_trace_adoption_period(
    trace: *const CdTrace,
    individual: usize,
    out: *mut u64,
) -> CdStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let trace = &borrow(trace, "trace")?.trace;
        if individual >= trace.population_size() {
            return Err(Failure::new(
                CdStatus::OutOfRange,
                format!("individual {individual} of {}", trace.population_size()),
            ));
        }
        match trace.adoption_period(individual) {
            Some(p) => {
                *out = p;
                Ok(())
            }
            None => Err(Failure::new(
                CdStatus::NotAdopted,
                format!(
                    "individual {individual} does not adopt by t={}",
                    trace.horizon()
                ),
            )),
        }
    })
}

/// Per-period CSV with thresholds, as written by `casediff run`.
///
/// # Safety
/// `trace` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cd_trace_csv(trace: *const CdTrace, out: *mut *mut c_char) -> CdStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let handle = borrow(trace, "trace")?;
        let thresholds = match threshold_sequence(&handle.trace, &handle.instance) {
            Ok(h) => Some(h),
            Err(DynamicsError::ThresholdsUndefined) => None,
            Err(e) => return Err(e.into()),
        };
        *out = hand_out(export::trace_csv(&handle.trace, thresholds.as_ref()));
        Ok(())
    })
}

/// Terminal summary as JSON.
///
/// # Safety
/// `trace` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cd_trace_summary_json(
    trace: *const CdTrace,
    out: *mut *mut c_char,
) -> CdStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        *out = hand_out(export::summary_json(&borrow(trace, "trace")?.trace));
        Ok(())
    })
}

/// Closed-form coverage check as JSON. Needs a uniform network.
///
/// # Safety
/// `instance` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cd_coverage_json(
    instance: *const CdInstance,
    out: *mut *mut c_char,
) -> CdStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let report = coverage_check(&borrow(instance, "instance")?.instance)?;
        *out = hand_out(serde_json::to_string_pretty(&report).expect("serializable"));
        Ok(())
    })
}

/// Compares two product specifications on the same population.
/// A `horizon` of 0 uses the first config's horizon.
///
/// # Safety
/// `a` and `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cd_compare_json(
    a: *const CdInstance,
    b: *const CdInstance,
    horizon: u64,
    out: *mut *mut c_char,
) -> CdStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        let horizon = if horizon == 0 { a.run.horizon } else { horizon };
        let report = compare_instances(&a.instance, &b.instance, horizon)?;
        *out = hand_out(serde_json::to_string_pretty(&report.to_json()).expect("serializable"));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn cd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn cd_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
