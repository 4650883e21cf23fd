//! The assistant upper bound `E_AIR` and the three-qubit bound.
//!
//! For a pure state, `S(ρ ‖ ⊗_k σ_k) = Σ_k [S(ρ_k) + S(ρ_k‖σ_k)]` whenever
//! the second argument is a product over blocks. Every pairing term of the
//! reference state is such a product, so convexity of the relative entropy
//! in its second argument bounds the MRE by a weighted sum of pair terms
//! `E_pair + S(ρ_pair)` and single-party entropies `S(ρ_m)`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::entropy::{relative_entropy, von_neumann_entropy, RelEntropy};
use crate::error::{MreError, Result};
use crate::mixed_opt::{mre_mixed_with_candidates, Decomposition, DecompositionSource, OptimizerConfig};
use crate::qstates::{pair_conditional_decomposition, StateVector};
use crate::rdm_multi::{
    check_size, factorial, kn, mre_pure, pair_reference_mixture, ratio_f64, Convention, MAX_QUBITS,
};

/// Which value stands in for the MRE of a reduced pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurrogateMode {
    /// `S(ρ_pair ‖ R^M_pair)` over the pair-conditional decomposition.
    #[default]
    #[serde(rename = "theorem1", alias = "theorem1_decomposition")]
    Conditional,
    /// The decomposition minimum found by the mixed-state optimizer.
    Minimized,
}

impl fmt::Display for SurrogateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurrogateMode::Conditional => "theorem1",
            SurrogateMode::Minimized => "minimized",
        })
    }
}

impl FromStr for SurrogateMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "theorem1" | "theorem1_decomposition" => Ok(SurrogateMode::Conditional),
            "minimized" => Ok(SurrogateMode::Minimized),
            other => Err(format!("unknown surrogate `{other}` (expected theorem1|minimized)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairBoundTerm {
    pub pair: (usize, usize),
    /// MRE of the reduced pair, or its surrogate.
    pub e_pair: f64,
    /// `S(ρ_pair)`
    pub s_pair: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n_qubits: usize,
    pub e_air: f64,
    pub pair_terms: Vec<PairBoundTerm>,
    /// `S(ρ_m)` for each party.
    pub single_terms: Vec<f64>,
    pub convention: Convention,
    pub surrogate: SurrogateMode,
    pub coefficients: AirCoefficients,
    /// `n·k_n`, informational only.
    pub apparent_max: f64,
}

impl BoundReport {
    /// Re-evaluates `E_AIR` from the recorded terms.
    pub fn recompute(&self) -> f64 {
        let pairs: f64 = self.pair_terms.iter().map(|t| t.e_pair + t.s_pair).sum();
        let singles: f64 = self.single_terms.iter().sum();
        self.coefficients.combine(pairs, singles)
    }
}

/// `E_AIR = (pair · Σ_pairs [E + S] + single · Σ_m S_m) / normalization`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AirCoefficients {
    pub pair: Ratio<u64>,
    pub single: Ratio<u64>,
    pub normalization: Ratio<u64>,
}

impl AirCoefficients {
    pub fn combine(&self, pair_sum: f64, single_sum: f64) -> f64 {
        (ratio_f64(self.pair) * pair_sum + ratio_f64(self.single) * single_sum) / ratio_f64(self.normalization)
    }
}

/// Summed per-`α` coefficients of the assistant.
///
/// Under `PairingCount` a fixed pair lies in `(n−2)!/((α−1)!·2^{α−1}·(n−2α)!)`
/// pairings of size `α` and a fixed party is a spectator in
/// `(n−2α)(n−1)!/(α!·2^α·(n−2α)!)` of them; `Printed` drops the powers of two.
pub fn air_coefficients(n: usize, convention: Convention) -> Result<AirCoefficients> {
    check_size(n, MAX_QUBITS)?;
    let mut pair = Ratio::from_integer(0u64);
    let mut single = Ratio::from_integer(0u64);
    let mut normalization = Ratio::from_integer(0u64);
    for alpha in 1..=n / 2 {
        let rest = factorial(n - 2 * alpha);
        let (pair_pow, single_pow) = match convention {
            Convention::PairingCount => (1u64 << (alpha - 1), 1u64 << alpha),
            Convention::Printed => (1, 1),
        };
        pair += Ratio::new(factorial(n - 2), factorial(alpha - 1) * pair_pow * rest);
        single += Ratio::new((n - 2 * alpha) as u64 * factorial(n - 1), factorial(alpha) * single_pow * rest);
        normalization += Ratio::new(factorial(n) * (n - alpha) as u64, factorial(alpha) * single_pow * rest);
    }
    Ok(AirCoefficients { pair, single, normalization })
}

pub fn assistant_air(psi: &StateVector, convention: Convention, surrogate: SurrogateMode) -> Result<BoundReport> {
    assistant_air_with(psi, convention, surrogate, &OptimizerConfig::default())
}

/// [`assistant_air`] with an explicit optimizer configuration for the
/// `Minimized` surrogate.
pub fn assistant_air_with(
    psi: &StateVector,
    convention: Convention,
    surrogate: SurrogateMode,
    config: &OptimizerConfig,
) -> Result<BoundReport> {
    let n = psi.n_qubits();
    let coefficients = air_coefficients(n, convention)?;
    let rho = psi.density();

    let mut pair_terms = Vec::new();
    for s in 0..n {
        for t in (s + 1)..n {
            let rho_pair = rho.reduced(&[s, t])?;
            let s_pair = von_neumann_entropy(&rho_pair)?;
            let conditional = match relative_entropy(&rho_pair, &pair_reference_mixture(psi, (s, t))?)? {
                RelEntropy::Finite(v) => v,
                RelEntropy::Infinite { support_violation_mass } => {
                    return Err(MreError::SupportAnomaly(support_violation_mass))
                }
            };
            let e_pair = match surrogate {
                SurrogateMode::Conditional => conditional,
                SurrogateMode::Minimized => {
                    let seed = pair_conditional_decomposition(psi, (s, t))?;
                    let seed = Decomposition {
                        terms: seed.terms.into_iter().map(|t| (t.weight, t.state)).collect(),
                        source: DecompositionSource::User,
                    };
                    let min = mre_mixed_with_candidates(&rho_pair, Convention::PairingCount, config, &[seed])?;
                    min.value.min(conditional)
                }
            };
            pair_terms.push(PairBoundTerm { pair: (s, t), e_pair, s_pair });
        }
    }
    let single_terms = if n > 2 {
        (0..n).map(|m| von_neumann_entropy(&rho.reduced(&[m])?)).collect::<Result<Vec<_>>>()?
    } else {
        vec![0.0; n]
    };

    let mut report = BoundReport {
        n_qubits: n,
        e_air: 0.0,
        pair_terms,
        single_terms,
        convention,
        surrogate,
        coefficients,
        apparent_max: n as f64 * ratio_f64(kn(n, convention)?),
    };
    report.e_air = report.recompute().max(0.0);
    Ok(report)
}

/// How the duplicated single-party entropy in the three-qubit bound is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ThreeQubitReading {
    /// One `S(ρ_m)` per party.
    #[default]
    Corrected,
    /// Counts `S(ρ_A)` twice.
    Literal,
}

/// `(1/6)[Σ_pairs (E_pair + S(ρ_pair)) + S(ρ_A) + S(ρ_B) + S(ρ_C)]`, plus an
/// extra `S(ρ_A)/6` in the literal reading.
pub fn three_qubit_bound(psi: &StateVector, reading: ThreeQubitReading) -> Result<f64> {
    if psi.n_qubits() != 3 {
        return Err(MreError::InvalidDimension(format!("three-qubit bound got {} qubits", psi.n_qubits())));
    }
    let rho = psi.density();
    let mut total = 0.0;
    for pair in [(0, 1), (0, 2), (1, 2)] {
        let rho_pair = rho.reduced(&[pair.0, pair.1])?;
        total += relative_entropy(&rho_pair, &pair_reference_mixture(psi, pair)?)?.value();
        total += von_neumann_entropy(&rho_pair)?;
    }
    let singles: Vec<f64> = (0..3).map(|m| von_neumann_entropy(&rho.reduced(&[m])?)).collect::<Result<_>>()?;
    total += singles.iter().sum::<f64>();
    if reading == ThreeQubitReading::Literal {
        total += singles[0];
    }
    Ok(total / 6.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssistantBoundCheck {
    pub e_mre: f64,
    pub e_air: f64,
    /// `e_air − e_mre`
    pub margin: f64,
    pub holds: bool,
}

pub const BOUND_TOL: f64 = 1e-9;

/// Compares the MRE with the assistant (pair-conditional surrogate).
pub fn check_assistant_bound(psi: &StateVector, convention: Convention) -> Result<AssistantBoundCheck> {
    let e_mre = mre_pure(psi, convention)?.value;
    let e_air = assistant_air(psi, convention, SurrogateMode::Conditional)?.e_air;
    let margin = e_air - e_mre;
    Ok(AssistantBoundCheck { e_mre, e_air, margin, holds: margin >= -BOUND_TOL })
}
