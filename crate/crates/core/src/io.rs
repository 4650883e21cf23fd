//! JSON state files.
//!
//! A pure state lists `2^n` amplitudes as `[re, im]` pairs:
//!
//! ```json
//! { "n_qubits": 2, "amplitudes": [[0.7071, 0], [0, 0], [0, 0], [0.7071, 0]] }
//! ```
//!
//! A mixed state gives a `2^n × 2^n` grid under `density_matrix` instead.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mixed_opt::MAX_MIXED_QUBITS;
use crate::qlinalg::{c, ComplexMatrix};
use crate::qstates::{DensityMatrix, StateVector, STATE_TOL};
use crate::rdm_multi::{MAX_QUBITS, MIN_QUBITS};

/// Deviations up to this are renormalized silently.
pub const EXACT_TOL: f64 = 1e-8;
/// Deviations up to this are renormalized with a warning.
pub const RENORMALIZE_TOL: f64 = 1e-4;

#[derive(Debug, Error, PartialEq)]
pub enum InputError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density_matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoadedState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Loaded {
    pub state: LoadedState,
    pub warnings: Vec<String>,
}

impl StateFile {
    pub fn from_state(psi: &StateVector) -> Self {
        Self {
            n_qubits: psi.n_qubits(),
            amplitudes: Some(psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            density_matrix: None,
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        Self {
            n_qubits: rho.n_qubits(),
            amplitudes: None,
            density_matrix: Some((0..m.dim()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }

    pub fn parse(text: &str) -> Result<Loaded, InputError> {
        let file: StateFile = serde_json::from_str(text).map_err(|e| InputError::Malformed(e.to_string()))?;
        file.load()
    }

    pub fn load(&self) -> Result<Loaded, InputError> {
        let n = self.n_qubits;
        match (&self.amplitudes, &self.density_matrix) {
            (Some(amps), None) => {
                if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
                    return Err(InputError::Unsupported(format!(
                        "{n} qubits (pure states support {MIN_QUBITS}..={MAX_QUBITS})"
                    )));
                }
                load_pure(n, amps)
            }
            (None, Some(rows)) => {
                if !(MIN_QUBITS..=MAX_MIXED_QUBITS).contains(&n) {
                    return Err(InputError::Unsupported(format!(
                        "{n} qubits (mixed states support {MIN_QUBITS}..={MAX_MIXED_QUBITS})"
                    )));
                }
                load_mixed(n, rows)
            }
            (Some(_), Some(_)) => {
                Err(InputError::Malformed("give either `amplitudes` or `density_matrix`, not both".into()))
            }
            (None, None) => Err(InputError::Malformed("missing `amplitudes` or `density_matrix`".into())),
        }
    }
}

fn check_finite(values: impl IntoIterator<Item = f64>) -> Result<(), InputError> {
    if values.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(InputError::Malformed("non-finite number in state file".into()))
    }
}

fn load_pure(n: usize, amps: &[[f64; 2]]) -> Result<Loaded, InputError> {
    let dim = 1usize << n;
    if amps.len() != dim {
        return Err(InputError::Malformed(format!("expected {dim} amplitudes for {n} qubits, got {}", amps.len())));
    }
    check_finite(amps.iter().flatten().copied())?;
    let amplitudes: Vec<_> = amps.iter().map(|&[re, im]| c(re, im)).collect();
    let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
    let deviation = (norm_sqr - 1.0).abs();
    let mut warnings = Vec::new();
    if deviation > RENORMALIZE_TOL {
        return Err(InputError::Malformed(format!("squared norm {norm_sqr} is not 1")));
    }
    if deviation > EXACT_TOL {
        warnings.push(format!("renormalized amplitudes (squared norm was {norm_sqr})"));
    }
    let psi = match StateVector::new(amplitudes.clone()) {
        Ok(psi) => psi,
        Err(_) => StateVector::normalized(amplitudes).map_err(|e| InputError::Malformed(e.to_string()))?,
    };
    Ok(Loaded { state: LoadedState::Pure(psi), warnings })
}

fn load_mixed(n: usize, rows: &[Vec<[f64; 2]>]) -> Result<Loaded, InputError> {
    let dim = 1usize << n;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(InputError::Malformed(format!("expected a {dim}x{dim} density matrix for {n} qubits")));
    }
    check_finite(rows.iter().flatten().flatten().copied())?;
    let mut m = ComplexMatrix::from_fn(dim, |i, j| c(rows[i][j][0], rows[i][j][1]));
    let mut warnings = Vec::new();

    let defect = m.hermiticity_defect();
    if defect > RENORMALIZE_TOL {
        return Err(InputError::Malformed(format!("density matrix is not Hermitian (defect {defect:e})")));
    }
    if defect > STATE_TOL {
        if defect > EXACT_TOL {
            warnings.push(format!("symmetrized density matrix (Hermiticity defect {defect:e})"));
        }
        m = m.hermitian_part();
    }

    let tr = m.trace().re;
    let deviation = (tr - 1.0).abs();
    if deviation > RENORMALIZE_TOL {
        return Err(InputError::Malformed(format!("trace {tr} is not 1")));
    }
    if deviation > EXACT_TOL {
        warnings.push(format!("renormalized density matrix (trace was {tr})"));
    }
    if deviation > STATE_TOL {
        m = m.scale_real(1.0 / tr);
    }
    let rho = DensityMatrix::new(m).map_err(|e| InputError::Malformed(e.to_string()))?;
    Ok(Loaded { state: LoadedState::Mixed(rho), warnings })
}
