//! C ABI over `mre-core`.
//!
//! Every fallible entry point returns an [`MreStatus`] and writes its result
//! through an out-pointer. On failure a message is available from
//! [`mre_last_error`] on the same thread. Panics never cross the boundary;
//! they are reported as `MRE_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mre_core::bounds::{assistant_air_with, SurrogateMode};
use mre_core::entropy::binary_entropy;
use mre_core::error::MreError;
use mre_core::io::{InputError, LoadedState, StateFile};
use mre_core::mixed_opt::{mre_mixed, OptimizerConfig};
use mre_core::qstates::{DensityMatrix, StateVector};
use mre_core::rdm_multi::{kn, mre_pure, Convention};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MreStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    UnsupportedSize = 3,
    Numerical = 4,
    Panic = 5,
}

/// Values accepted by the `convention` parameters.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MreConvention {
    Pairing = 0,
    Printed = 1,
}

/// Values accepted by the `surrogate` parameter.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MreSurrogate {
    Conditional = 0,
    Minimized = 1,
}

/// Opaque pure state.
pub struct MreState {
    psi: StateVector,
}

/// Opaque density matrix.
pub struct MreDensity {
    rho: DensityMatrix,
}

type Failure = (MreStatus, String);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MreStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MreStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            MreStatus::Panic
        }
    }
}

fn core_failure(e: MreError) -> Failure {
    let status = match e {
        MreError::UnsupportedSize(..) => MreStatus::UnsupportedSize,
        MreError::NotHermitian(_) | MreError::NotPsd(_) | MreError::SupportAnomaly(_) => MreStatus::Numerical,
        _ => MreStatus::InvalidInput,
    };
    (status, e.to_string())
}

fn input_failure(e: InputError) -> Failure {
    match e {
        InputError::Malformed(_) => (MreStatus::InvalidInput, e.to_string()),
        InputError::Unsupported(_) => (MreStatus::UnsupportedSize, e.to_string()),
    }
}

fn null(what: &str) -> Failure {
    (MreStatus::NullPointer, format!("null pointer: {what}"))
}

fn parse_convention(raw: i32) -> Result<Convention, Failure> {
    match raw {
        0 => Ok(Convention::PairingCount),
        1 => Ok(Convention::Printed),
        _ => Err((MreStatus::InvalidInput, format!("unknown convention {raw}"))),
    }
}

fn parse_surrogate(raw: i32) -> Result<SurrogateMode, Failure> {
    match raw {
        0 => Ok(SurrogateMode::Conditional),
        1 => Ok(SurrogateMode::Minimized),
        _ => Err((MreStatus::InvalidInput, format!("unknown surrogate {raw}"))),
    }
}

/// Reads `len` values, or fails on a null pointer.
///
/// # Safety
/// `p` must be null or point to `len` readable doubles.
unsafe fn doubles<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn state_ref<'a>(state: *const MreState) -> Result<&'a MreState, Failure> {
    state.as_ref().ok_or_else(|| null("state"))
}

/// Builds a pure state from `len = 2^n_qubits` amplitudes split into real
/// and imaginary parts. Amplitudes within `1e-4` of unit norm are
/// renormalized.
///
/// # Safety
/// `re` and `im` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_state_new(
    n_qubits: usize,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut MreState,
) -> MreStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let re = doubles(re, len, "re")?;
        let im = doubles(im, len, "im")?;
        let file = StateFile {
            n_qubits,
            amplitudes: Some(re.iter().zip(im).map(|(&r, &i)| [r, i]).collect()),
            density_matrix: None,
        };
        let LoadedState::Pure(psi) = file.load().map_err(input_failure)?.state else {
            unreachable!("amplitudes load as a pure state")
        };
        out.write(Box::into_raw(Box::new(MreState { psi })));
        Ok(())
    })
}

/// # Safety
/// `state` must be null or come from [`mre_state_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mre_state_free(state: *mut MreState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_state_num_qubits(state: *const MreState, out: *mut usize) -> MreStatus {
    guard(|| write(out, state_ref(state)?.psi.n_qubits()))
}

/// MRE of a pure state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_state_pure(state: *const MreState, convention: i32, out: *mut f64) -> MreStatus {
    guard(|| {
        let s = state_ref(state)?;
        let v = mre_pure(&s.psi, parse_convention(convention)?).map_err(core_failure)?.value;
        write(out, v)
    })
}

/// Assistant upper bound `E_AIR` of a pure state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_state_assistant(
    state: *const MreState,
    convention: i32,
    surrogate: i32,
    out: *mut f64,
) -> MreStatus {
    guard(|| {
        let s = state_ref(state)?;
        let report = assistant_air_with(
            &s.psi,
            parse_convention(convention)?,
            parse_surrogate(surrogate)?,
            &OptimizerConfig::default(),
        )
        .map_err(core_failure)?;
        write(out, report.e_air)
    })
}

/// Builds a density matrix from `len = 4^n_qubits` row-major entries.
///
/// # Safety
/// `re` and `im` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_density_new(
    n_qubits: usize,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut MreDensity,
) -> MreStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let re = doubles(re, len, "re")?;
        let im = doubles(im, len, "im")?;
        let dim = 1usize.checked_shl(n_qubits as u32).unwrap_or(0);
        if n_qubits >= 16 || dim * dim != len {
            return Err((MreStatus::InvalidInput, format!("expected {dim}x{dim} entries, got {len}")));
        }
        let rows = (0..dim).map(|i| (0..dim).map(|j| [re[i * dim + j], im[i * dim + j]]).collect()).collect();
        let file = StateFile { n_qubits, amplitudes: None, density_matrix: Some(rows) };
        let LoadedState::Mixed(rho) = file.load().map_err(input_failure)?.state else {
            unreachable!("a density grid loads as a mixed state")
        };
        out.write(Box::into_raw(Box::new(MreDensity { rho })));
        Ok(())
    })
}

/// # Safety
/// `density` must be null or come from [`mre_density_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mre_density_free(density: *mut MreDensity) {
    if !density.is_null() {
        drop(Box::from_raw(density));
    }
}

/// Decomposition-minimized MRE of a mixed state. `restarts = 0` uses the
/// default.
///
/// # Safety
/// `density` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_density_mixed(
    density: *const MreDensity,
    convention: i32,
    seed: u64,
    restarts: usize,
    out: *mut f64,
) -> MreStatus {
    guard(|| {
        let d = density.as_ref().ok_or_else(|| null("density"))?;
        let mut config = OptimizerConfig { seed, ..Default::default() };
        if restarts > 0 {
            config.restarts = restarts;
        }
        let v = mre_mixed(&d.rho, parse_convention(convention)?, &config).map_err(core_failure)?.value;
        write(out, v)
    })
}

/// `k_n` as an exact fraction.
///
/// # Safety
/// `numerator` and `denominator` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_kn(n: usize, convention: i32, numerator: *mut u64, denominator: *mut u64) -> MreStatus {
    guard(|| {
        if numerator.is_null() || denominator.is_null() {
            return Err(null("out"));
        }
        let k = kn(n, parse_convention(convention)?).map_err(core_failure)?;
        write(numerator, *k.numer())?;
        write(denominator, *k.denom())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_binary_entropy(x: f64, out: *mut f64) -> MreStatus {
    guard(|| write(out, binary_entropy(x).map_err(core_failure)?))
}

/// Message for the most recent failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mre_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn mre_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
