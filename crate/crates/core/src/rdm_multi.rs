//! Relative density matrices for three and more qubits.
//!
//! The n-party reference state averages, over every partial pairing of the
//! parties, the product of the pair reference mixtures `R^M_st` at the
//! paired slots and the single-party reduced states at the spectator slots.
//! `R^M_st = Σ_i p_i R(ψ_i)` runs over the pair-conditional decomposition
//! of the reduced pair state.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::entropy::{relative_entropy, RelEntropy};
use crate::error::{MreError, Result};
use crate::qlinalg::{c, kron, kron_all, ComplexMatrix, C64};
use crate::qstates::{pair_conditional_decomposition, DensityMatrix, StateVector, ZERO_WEIGHT_TOL};
use crate::rdm_pair::relative_density_pair;

pub const MIN_QUBITS: usize = 2;
pub const MAX_QUBITS: usize = 6;

/// How partial pairings are counted in the normalizations.
///
/// `PairingCount` counts each set of disjoint pairs once:
/// `n!/(α!·2^α·(n−2α)!)` terms of size `α`. `Printed` uses the literal
/// coefficient `n!/(α!(n−2α)!)`, which counts every pairing `2^α` times. The
/// two agree for `n ≤ 3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    #[default]
    #[serde(rename = "pairing", alias = "pairing_count")]
    PairingCount,
    Printed,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::PairingCount => "pairing",
            Convention::Printed => "printed",
        })
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pairing" | "pairing_count" => Ok(Convention::PairingCount),
            "printed" => Ok(Convention::Printed),
            other => Err(format!("unknown convention `{other}` (expected pairing|printed)")),
        }
    }
}

/// A set of disjoint pairs `(s, t)`, `s < t`, ordered by `s`, plus the
/// unpaired parties.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairingTerm {
    pub pairs: Vec<(usize, usize)>,
    pub spectators: Vec<usize>,
}

impl PairingTerm {
    pub fn alpha(&self) -> usize {
        self.pairs.len()
    }

    /// Qubit order of the tensor factors: each pair, then the spectators.
    fn factor_order(&self) -> Vec<usize> {
        self.pairs.iter().flat_map(|&(s, t)| [s, t]).chain(self.spectators.iter().copied()).collect()
    }
}

pub fn check_size(n: usize, max: usize) -> Result<()> {
    if !(MIN_QUBITS..=max).contains(&n) {
        return Err(MreError::UnsupportedSize(n, MIN_QUBITS, max));
    }
    Ok(())
}

/// All partial pairings with at least one pair, sorted by size then pairs.
pub fn enumerate_pairings(n: usize) -> Result<Vec<PairingTerm>> {
    check_size(n, MAX_QUBITS)?;
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    let mut used = vec![false; n];
    collect_pairings(0, n, &mut used, &mut pairs, &mut out);
    out.retain(|t| !t.pairs.is_empty());
    out.sort_by(|a, b| a.alpha().cmp(&b.alpha()).then_with(|| a.pairs.cmp(&b.pairs)));
    Ok(out)
}

fn collect_pairings(
    from: usize,
    n: usize,
    used: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<PairingTerm>,
) {
    let Some(s) = (from..n).find(|&q| !used[q]) else {
        let spectators = (0..n).filter(|q| !pairs.iter().any(|&(s, t)| s == *q || t == *q)).collect();
        out.push(PairingTerm { pairs: pairs.clone(), spectators });
        return;
    };
    // s stays a spectator
    used[s] = true;
    collect_pairings(s + 1, n, used, pairs, out);
    for t in (s + 1)..n {
        if used[t] {
            continue;
        }
        used[t] = true;
        pairs.push((s, t));
        collect_pairings(s + 1, n, used, pairs, out);
        pairs.pop();
        used[t] = false;
    }
    used[s] = false;
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Number of size-`alpha` terms under the convention.
pub(crate) fn term_multiplicity(n: usize, alpha: usize, convention: Convention) -> u64 {
    let base = factorial(n) / (factorial(alpha) * factorial(n - 2 * alpha));
    match convention {
        Convention::Printed => base,
        Convention::PairingCount => base >> alpha,
    }
}

/// Weight given to one enumerated pairing of size `alpha`.
fn pairing_weight(alpha: usize, convention: Convention) -> f64 {
    match convention {
        Convention::PairingCount => 1.0,
        Convention::Printed => (1u64 << alpha) as f64,
    }
}

/// Proportionality factor `k_n = Σ_α c_α / Σ_α c_α (n − α)`.
pub fn kn(n: usize, convention: Convention) -> Result<Ratio<u64>> {
    check_size(n, MAX_QUBITS)?;
    let (mut num, mut den) = (0u64, 0u64);
    for alpha in 1..=n / 2 {
        let c = term_multiplicity(n, alpha, convention);
        num += c;
        den += c * (n - alpha) as u64;
    }
    Ok(Ratio::new(num, den))
}

pub(crate) fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `R^M = Σ_i p_i R(ψ_i)` over the pair-conditional decomposition of qubits `pair`.
pub fn pair_reference_mixture(psi: &StateVector, pair: (usize, usize)) -> Result<DensityMatrix> {
    let decomposition = pair_conditional_decomposition(psi, pair)?;
    let mut r = ComplexMatrix::zeros(4);
    for term in &decomposition.terms {
        r.add_scaled(relative_density_pair(&term.state)?.matrix(), term.weight);
    }
    Ok(DensityMatrix::from_matrix_unchecked(r))
}

/// Three-qubit reference state built directly from the amplitudes `a…h`.
pub fn relative_density_three(psi: &StateVector) -> Result<DensityMatrix> {
    if psi.n_qubits() != 3 {
        return Err(MreError::InvalidDimension(format!("three-qubit construction got {} qubits", psi.n_qubits())));
    }
    let amp: &[C64] = psi.amplitudes();
    let [a, b, cc, d, e, f, g, h] = [amp[0], amp[1], amp[2], amp[3], amp[4], amp[5], amp[6], amp[7]];

    let rho_a = psi.reduced(&[0])?.into_matrix();
    let rho_b = psi.reduced(&[1])?.into_matrix();
    let rho_c = psi.reduced(&[2])?.into_matrix();

    // Conditional pure states per pair: (first block, second block).
    let ab = [[a, cc, e, g], [b, d, f, h]];
    let ac = [[a, b, e, f], [cc, d, g, h]];
    let bc = [[a, b, cc, d], [e, f, g, h]];

    let mut r = ComplexMatrix::zeros(8);
    for (blocks, slot) in [(ab, 0usize), (ac, 1), (bc, 2)] {
        for block in blocks {
            let p: f64 = block.iter().map(|z| z.norm_sqr()).sum();
            if p <= ZERO_WEIGHT_TOL {
                continue;
            }
            let state = StateVector::normalized(block.to_vec())?;
            let basis = crate::rdm_pair::pair_basis(&state)?;
            for j in 0..2 {
                let (x, y) = (&basis.basis_x[j], &basis.basis_y[j]);
                let term = match slot {
                    0 => kron(&kron(x, y), &rho_c),
                    1 => kron(&kron(x, &rho_b), y),
                    _ => kron(&kron(&rho_a, x), y),
                };
                r.add_scaled(&term, p * basis.q[j] / 3.0);
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(r))
}

/// General n-party reference state.
pub fn relative_density_n(psi: &StateVector, convention: Convention) -> Result<DensityMatrix> {
    let n = psi.n_qubits();
    let pairings = enumerate_pairings(n)?;

    let mut pair_mixtures = std::collections::BTreeMap::new();
    for s in 0..n {
        for t in (s + 1)..n {
            pair_mixtures.insert((s, t), pair_reference_mixture(psi, (s, t))?.into_matrix());
        }
    }
    let singles: Vec<ComplexMatrix> = if n > 2 {
        (0..n).map(|m| psi.reduced(&[m]).map(DensityMatrix::into_matrix)).collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let dim = 1usize << n;
    let mut r = ComplexMatrix::zeros(dim);
    let mut total_weight = 0.0;
    for term in &pairings {
        let factors: Vec<&ComplexMatrix> =
            term.pairs.iter().map(|p| &pair_mixtures[p]).chain(term.spectators.iter().map(|&m| &singles[m])).collect();
        let product = kron_all(factors).permute_qubits(&term.factor_order());
        let w = pairing_weight(term.alpha(), convention);
        r.add_scaled(&product, w);
        total_weight += w;
    }
    if total_weight != 1.0 {
        r = r.scale(c(1.0 / total_weight, 0.0));
    }
    Ok(DensityMatrix::from_matrix_unchecked(r))
}

/// Pure-state MRE with its ingredients.
#[derive(Clone, Debug, PartialEq)]
pub struct PureMre {
    pub n_qubits: usize,
    pub convention: Convention,
    pub kn: Ratio<u64>,
    /// `S(ρ‖R)` before scaling by `k_n`.
    pub relative_entropy: f64,
    pub value: f64,
}

/// `k_n · S(|ψ><ψ| ‖ R(ψ))`
pub fn mre_pure(psi: &StateVector, convention: Convention) -> Result<PureMre> {
    let n = psi.n_qubits();
    let k = kn(n, convention)?;
    let r = relative_density_n(psi, convention)?;
    let s = match relative_entropy(&psi.density(), &r)? {
        RelEntropy::Finite(v) => v,
        RelEntropy::Infinite { support_violation_mass } => {
            return Err(MreError::SupportAnomaly(support_violation_mass))
        }
    };
    Ok(PureMre { n_qubits: n, convention, kn: k, relative_entropy: s, value: ratio_f64(k) * s })
}
