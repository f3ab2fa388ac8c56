//! C ABI over `agwwo-core`: build a scenario, run an optimizer, read the
//! metrics and the convergence trace.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every fallible call returns an
//! [`AgwwoStatus`]; the message of the most recent failure on the calling
//! thread is available through [`agwwo_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use agwwo_core::harness::{parse_config, support_ratios};
use agwwo_core::optimizers::{run, Algorithm, OptimizerConfig, RunTrace};
use agwwo_core::scenario::{build_scenario, Scenario, ScenarioParams};
use agwwo_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgwwoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    InvalidArgument = 3,
    Io = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgwwoAlgorithm {
    Agwwo = 0,
    Wwo = 1,
    Aga = 2,
    Cmt = 3,
}

impl From<AgwwoAlgorithm> for Algorithm {
    fn from(a: AgwwoAlgorithm) -> Self {
        match a {
            AgwwoAlgorithm::Agwwo => Algorithm::Agwwo,
            AgwwoAlgorithm::Wwo => Algorithm::Wwo,
            AgwwoAlgorithm::Aga => Algorithm::Aga,
            AgwwoAlgorithm::Cmt => Algorithm::Cmt,
        }
    }
}

/// Overrides for a run; zero fields keep the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AgwwoRunOptions {
    pub population: u32,
    pub iterations: u32,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AgwwoTracePoint {
    pub iteration: u64,
    pub best_fitness: f64,
    pub avg_fitness: f64,
    pub best_energy: f64,
    pub diversity: f64,
}

/// Opaque scenario handle.
pub struct AgwwoScenario {
    inner: Scenario,
    optimizer: OptimizerConfig,
}

/// Opaque finished-run handle.
pub struct AgwwoRun {
    inner: RunTrace,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: AgwwoStatus, msg: impl Into<String>) -> AgwwoStatus {
    set_error(msg);
    status
}

fn from_core(err: Error) -> AgwwoStatus {
    let status = match &err {
        Error::Io { .. } => AgwwoStatus::Io,
        Error::Contract(_) | Error::Domain(_) => AgwwoStatus::InvalidArgument,
        _ => AgwwoStatus::InvalidConfig,
    };
    fail(status, err.to_string())
}

fn guarded(f: impl FnOnce() -> AgwwoStatus) -> AgwwoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(AgwwoStatus::Panic, "internal panic"),
    }
}

fn store<T>(out: *mut *mut T, value: T) {
    // SAFETY: callers check `out` for null before building `value`.
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

/// Creates a scenario with default parameters.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn agwwo_scenario_new_default(seed: u64, out: *mut *mut AgwwoScenario) -> AgwwoStatus {
    guarded(|| {
        if out.is_null() {
            return fail(AgwwoStatus::NullPointer, "out is null");
        }
        match build_scenario(&ScenarioParams::default(), seed) {
            Ok(inner) => {
                store(
                    out,
                    AgwwoScenario {
                        inner,
                        optimizer: OptimizerConfig::default(),
                    },
                );
                AgwwoStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Creates a scenario from config text in the CLI's TOML format. The
/// `[scenario]` and `[optimizer]` tables are used; `[experiment]` is
/// validated but otherwise ignored.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a valid pointer
/// to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn agwwo_scenario_from_toml(
    config_toml: *const c_char,
    seed: u64,
    out: *mut *mut AgwwoScenario,
) -> AgwwoStatus {
    guarded(|| {
        if config_toml.is_null() || out.is_null() {
            return fail(AgwwoStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(config_toml).to_str() else {
            return fail(AgwwoStatus::InvalidArgument, "config is not UTF-8");
        };
        let spec = match parse_config(text) {
            Ok(s) => s,
            Err(e) => return from_core(e),
        };
        match build_scenario(&spec.scenario, seed) {
            Ok(inner) => {
                store(
                    out,
                    AgwwoScenario {
                        inner,
                        optimizer: spec.optimizer,
                    },
                );
                AgwwoStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `scenario` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn agwwo_scenario_free(scenario: *mut AgwwoScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Number of mobile devices, or 0 for a null handle.
///
/// # Safety
/// `scenario` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn agwwo_scenario_num_md(scenario: *const AgwwoScenario) -> usize {
    scenario.as_ref().map_or(0, |s| s.inner.num_md())
}

/// Runs `algorithm` on `scenario`. `options` may be null.
///
/// # Safety
/// `scenario` must be a live handle, `options` null or valid, and `out` a
/// valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn agwwo_run(
    scenario: *const AgwwoScenario,
    algorithm: AgwwoAlgorithm,
    options: *const AgwwoRunOptions,
    out: *mut *mut AgwwoRun,
) -> AgwwoStatus {
    guarded(|| {
        let Some(scn) = scenario.as_ref() else {
            return fail(AgwwoStatus::NullPointer, "scenario is null");
        };
        if out.is_null() {
            return fail(AgwwoStatus::NullPointer, "out is null");
        }
        let opts = options.as_ref().copied().unwrap_or_default();
        let mut cfg = scn.optimizer.clone();
        if opts.population > 0 {
            cfg.population = opts.population as usize;
        }
        if opts.iterations > 0 {
            cfg.iterations = opts.iterations as usize;
        }
        match run(algorithm.into(), &scn.inner, &cfg, opts.seed) {
            Ok(inner) => {
                store(out, AgwwoRun { inner });
                AgwwoStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `run` must be null or a handle from [`agwwo_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn agwwo_run_free(run: *mut AgwwoRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Network-wide energy of the best solution in joules; NaN for null.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn agwwo_run_network_energy(run: *const AgwwoRun) -> f64 {
    run.as_ref().map_or(f64::NAN, |r| r.inner.report.network_energy)
}

/// Device-side energy of the best solution in joules; NaN for null.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn agwwo_run_local_energy(run: *const AgwwoRun) -> f64 {
    run.as_ref().map_or(f64::NAN, |r| r.inner.report.total_local_energy)
}

/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn agwwo_run_best_fitness(run: *const AgwwoRun) -> f64 {
    run.as_ref().map_or(f64::NAN, |r| r.inner.best_fitness)
}

/// Fractions of devices meeting their deadline and breach budget.
///
/// # Safety
/// `run` must be a live handle; `time_ratio` and `cost_ratio` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agwwo_run_support_ratios(
    run: *const AgwwoRun,
    time_ratio: *mut f64,
    cost_ratio: *mut f64,
) -> AgwwoStatus {
    let Some(r) = run.as_ref() else {
        return fail(AgwwoStatus::NullPointer, "run is null");
    };
    if time_ratio.is_null() || cost_ratio.is_null() {
        return fail(AgwwoStatus::NullPointer, "output pointer is null");
    }
    let (t, c) = support_ratios(&r.inner.report);
    *time_ratio = t;
    *cost_ratio = c;
    AgwwoStatus::Ok
}

/// Number of trace points (iterations plus the initial population).
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn agwwo_run_trace_len(run: *const AgwwoRun) -> usize {
    run.as_ref().map_or(0, |r| r.inner.rows.len())
}

/// # Safety
/// `run` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agwwo_run_trace_point(
    run: *const AgwwoRun,
    index: usize,
    out: *mut AgwwoTracePoint,
) -> AgwwoStatus {
    let Some(r) = run.as_ref() else {
        return fail(AgwwoStatus::NullPointer, "run is null");
    };
    if out.is_null() {
        return fail(AgwwoStatus::NullPointer, "out is null");
    }
    let Some(row) = r.inner.rows.get(index) else {
        return fail(
            AgwwoStatus::InvalidArgument,
            format!("trace index {index} out of range ({} points)", r.inner.rows.len()),
        );
    };
    *out = AgwwoTracePoint {
        iteration: row.iteration as u64,
        best_fitness: row.best_fitness,
        avg_fitness: row.avg_fitness,
        best_energy: row.best_energy,
        diversity: row.diversity,
    };
    AgwwoStatus::Ok
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message length
/// excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn agwwo_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn agwwo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
