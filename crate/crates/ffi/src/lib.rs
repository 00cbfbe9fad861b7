//! C ABI over the cosmic-code engine.
//!
//! Every fallible call returns a [`CcStatus`] and writes results through out
//! pointers. On failure the thread's last error message is available from
//! [`cc_last_error_message`]. Handles are opaque and must be released with
//! their matching `*_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;

use cosmic_code::algebra::{
    boson_ladder, effective_rest_mass, leap_fission, qvsl_speed, superluminal_energy, Kind,
    ParticleState,
};
use cosmic_code::constants::{load_constants, PhysicalConstants};
use cosmic_code::hybrid::{
    collapse, decohere, gap_check, wavefunction_from_weights, GapStatus, Selector, Violation,
    Wavefunction,
};
use cosmic_code::report::{emit_report, Format, Report};
use cosmic_code::scenario::{parse_scenario, run_scenario, RunError};

/// Number of entries written by [`cc_boson_ladder`].
pub const CC_LADDER_LEN: usize = 14;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Parse = 4,
    Stage = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcGap {
    Satisfied = 0,
    Boundary = 1,
    CompleteAttachment = 2,
    CompleteDetachment = 3,
    BelowBound = 4,
}

pub struct CcConstants(PhysicalConstants);

pub struct CcWavefunction(Wavefunction);

pub struct CcReport {
    report: Report,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let msg = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: CcStatus, msg: impl ToString) -> CcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> CcStatus) -> CcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(CcStatus::Panic, "internal panic"),
    }
}

unsafe fn constants<'a>(c: *const CcConstants) -> Option<&'a PhysicalConstants> {
    c.as_ref().map(|c| &c.0)
}

unsafe fn write<T>(out: *mut T, value: T) -> CcStatus {
    if out.is_null() {
        return fail(CcStatus::NullPointer, "output pointer is null");
    }
    out.write(value);
    CcStatus::Ok
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, CcStatus> {
    if s.is_null() {
        return Err(fail(CcStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(CcStatus::InvalidArgument, e))
}

/// Last error message on this thread, or NULL. The pointer stays valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Engine version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[no_mangle]
pub extern "C" fn cc_constants_new_default() -> *mut CcConstants {
    Box::into_raw(Box::new(CcConstants(PhysicalConstants::default())))
}

/// Parses a constants JSON document. An empty string yields the defaults.
#[no_mangle]
pub unsafe extern "C" fn cc_constants_from_json(
    json: *const c_char,
    out: *mut *mut CcConstants,
) -> CcStatus {
    guard(|| {
        let json = match str_arg(json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match load_constants(json) {
            Ok(c) => write(out, Box::into_raw(Box::new(CcConstants(c)))),
            Err(e) if e.field().is_some() => fail(CcStatus::OutOfRange, e),
            Err(e) => fail(CcStatus::Parse, e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn cc_constants_free(c: *mut CcConstants) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

#[no_mangle]
pub unsafe extern "C" fn cc_constants_alpha(c: *const CcConstants) -> f64 {
    constants(c).map_or(f64::NAN, |c| c.alpha())
}

macro_rules! scalar_op {
    ($c:expr, $out:expr, |$k:ident| $body:expr) => {
        guard(|| {
            let Some($k) = constants($c) else {
                return fail(CcStatus::NullPointer, "constants handle is null");
            };
            match $body {
                Ok(v) => write($out, v),
                Err(e) => fail(CcStatus::OutOfRange, e),
            }
        })
    };
}

#[no_mangle]
pub unsafe extern "C" fn cc_alpha_power(c: *const CcConstants, k: i32, out: *mut f64) -> CcStatus {
    scalar_op!(c, out, |k_| k_.alpha_power(k))
}

#[no_mangle]
pub unsafe extern "C" fn cc_qvsl_speed(
    c: *const CcConstants,
    spacetime_dim: i32,
    out: *mut f64,
) -> CcStatus {
    scalar_op!(c, out, |k| qvsl_speed(k, spacetime_dim))
}

#[no_mangle]
pub unsafe extern "C" fn cc_superluminal_energy(
    c: *const CcConstants,
    m0: f64,
    spacetime_dim: i32,
    out: *mut f64,
) -> CcStatus {
    scalar_op!(c, out, |k| superluminal_energy(k, m0, spacetime_dim))
}

#[no_mangle]
pub unsafe extern "C" fn cc_effective_rest_mass(
    c: *const CcConstants,
    m0: f64,
    mass_dim: i32,
    out: *mut f64,
) -> CcStatus {
    scalar_op!(c, out, |k| effective_rest_mass(k, m0, mass_dim))
}

/// Writes the ladder masses F5, B5, …, F11, B11 (GeV) into `out`, which
/// must hold at least `CC_LADDER_LEN` doubles.
#[no_mangle]
pub unsafe extern "C" fn cc_boson_ladder(
    c: *const CcConstants,
    out: *mut f64,
    len: usize,
) -> CcStatus {
    guard(|| {
        let Some(k) = constants(c) else {
            return fail(CcStatus::NullPointer, "constants handle is null");
        };
        if out.is_null() {
            return fail(CcStatus::NullPointer, "output buffer is null");
        }
        if len < CC_LADDER_LEN {
            return fail(
                CcStatus::BufferTooSmall,
                format!("need {CC_LADDER_LEN} slots"),
            );
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (slot, e) in dst.iter_mut().zip(boson_ladder(k)) {
            *slot = e.mass_gev;
        }
        CcStatus::Ok
    })
}

/// Number of dimensional orbitals produced by fissioning a `d` particle by `n`.
#[no_mangle]
pub unsafe extern "C" fn cc_leap_fission_orbitals(
    mass_dim: i32,
    n: u8,
    out_count: *mut u8,
) -> CcStatus {
    guard(|| {
        let state = match ParticleState::simple(4, mass_dim, Kind::Boson, 1.0) {
            Ok(s) => s,
            Err(e) => return fail(CcStatus::OutOfRange, e),
        };
        match leap_fission(&state, n) {
            Ok((_, orbitals)) => write(out_count, orbitals.count()),
            Err(e) => fail(CcStatus::OutOfRange, e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn cc_gap_check(
    c: *const CcConstants,
    dx: f64,
    dp: f64,
    out: *mut CcGap,
) -> CcStatus {
    guard(|| {
        let Some(k) = constants(c) else {
            return fail(CcStatus::NullPointer, "constants handle is null");
        };
        let gap = match gap_check(k, dx, dp) {
            Ok(GapStatus::Satisfied) => CcGap::Satisfied,
            Ok(GapStatus::Boundary) => CcGap::Boundary,
            Ok(GapStatus::Violated(Violation::CompleteAttachment)) => CcGap::CompleteAttachment,
            Ok(GapStatus::Violated(Violation::CompleteDetachment)) => CcGap::CompleteDetachment,
            Ok(GapStatus::Violated(Violation::BelowBound)) => CcGap::BelowBound,
            Err(e) => return fail(CcStatus::InvalidArgument, e),
        };
        write(out, gap)
    })
}

/// Builds a wavefunction from `len` attachment weights, each in (0, 1).
#[no_mangle]
pub unsafe extern "C" fn cc_wavefunction_new(
    weights: *const f64,
    len: usize,
    out: *mut *mut CcWavefunction,
) -> CcStatus {
    guard(|| {
        if weights.is_null() && len > 0 {
            return fail(CcStatus::NullPointer, "weights pointer is null");
        }
        let weights = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(weights, len)
        };
        match wavefunction_from_weights(weights) {
            Ok(wf) => write(out, Box::into_raw(Box::new(CcWavefunction(wf)))),
            Err(e) => fail(CcStatus::InvalidArgument, e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn cc_wavefunction_free(wf: *mut CcWavefunction) {
    if !wf.is_null() {
        drop(Box::from_raw(wf));
    }
}

#[no_mangle]
pub unsafe extern "C" fn cc_wavefunction_len(wf: *const CcWavefunction) -> usize {
    wf.as_ref().map_or(0, |w| w.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn cc_wavefunction_density(
    wf: *const CcWavefunction,
    out: *mut f64,
    len: usize,
) -> CcStatus {
    guard(|| {
        let Some(wf) = wf.as_ref() else {
            return fail(CcStatus::NullPointer, "wavefunction handle is null");
        };
        if out.is_null() {
            return fail(CcStatus::NullPointer, "output buffer is null");
        }
        let density = wf.0.density();
        if len < density.len() {
            return fail(
                CcStatus::BufferTooSmall,
                format!("need {} slots", density.len()),
            );
        }
        std::slice::from_raw_parts_mut(out, density.len()).copy_from_slice(density);
        CcStatus::Ok
    })
}

/// Collapses onto an explicit cell.
#[no_mangle]
pub unsafe extern "C" fn cc_wavefunction_collapse_at(
    wf: *const CcWavefunction,
    index: usize,
    out_index: *mut usize,
) -> CcStatus {
    guard(|| {
        let Some(wf) = wf.as_ref() else {
            return fail(CcStatus::NullPointer, "wavefunction handle is null");
        };
        match collapse(&wf.0, Selector::Index(index)) {
            Ok(o) => write(out_index, o.chosen_index),
            Err(e) => fail(CcStatus::OutOfRange, e),
        }
    })
}

/// Seeded collapse; the same seed always selects the same cell.
#[no_mangle]
pub unsafe extern "C" fn cc_wavefunction_decohere(
    wf: *const CcWavefunction,
    seed: u64,
    out_index: *mut usize,
) -> CcStatus {
    guard(|| {
        let Some(wf) = wf.as_ref() else {
            return fail(CcStatus::NullPointer, "wavefunction handle is null");
        };
        write(out_index, decohere(&wf.0, seed).chosen_index)
    })
}

/// Parses and runs a scenario document (all sections).
#[no_mangle]
pub unsafe extern "C" fn cc_scenario_run(json: *const c_char, out: *mut *mut CcReport) -> CcStatus {
    guard(|| {
        let json = match str_arg(json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let scenario = match parse_scenario(json.as_bytes()) {
            Ok(s) => s,
            Err(e) => return fail(CcStatus::Parse, e),
        };
        let report = match run_scenario(&scenario) {
            Ok(r) => r,
            Err(e @ RunError::Invalid(_)) => return fail(CcStatus::InvalidArgument, e),
            Err(e) => return fail(CcStatus::Stage, e),
        };
        let json = CString::new(emit_report(&report, Format::Json))
            .expect("JSON output contains no NUL bytes");
        write(out, Box::into_raw(Box::new(CcReport { report, json })))
    })
}

/// Report as JSON; owned by the handle and valid until it is freed.
#[no_mangle]
pub unsafe extern "C" fn cc_report_json(report: *const CcReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn cc_report_dark_to_baryonic(
    report: *const CcReport,
    out: *mut f64,
) -> CcStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            return fail(CcStatus::NullPointer, "report handle is null");
        };
        match &r.report.pipeline {
            Some(p) => write(out, p.dark_to_baryonic),
            None => fail(CcStatus::InvalidArgument, "report has no pipeline section"),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn cc_report_free(report: *mut CcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
