//! Relative density matrix of a two-qubit pure state.
//!
//! For `|ψ>` with reduced polarization vectors `ξ_X`, `ξ_Y` of common norm
//! `ξ`, the reference state is
//!
//! ```text
//! R = q1 ρ̄_X1 ⊗ ρ̄_Y1 + q2 ρ̄_X2 ⊗ ρ̄_Y2,   q1 = (1 − ξ)/2,  q2 = 1 − q1,
//! ρ̄_1 = ½(σ₀ − η·σ),  ρ̄_2 = σ₀ − ρ̄_1,   η = ξ_party / ξ.
//! ```
//!
//! When `ξ` vanishes the polarization direction is undefined and the basis
//! comes from a Schmidt decomposition taken in the computational basis of
//! the first qubit, which gives `η_X = ±η_Y = (0, 0, 1)` on the Bell states.

use crate::entropy::{relative_entropy, RelEntropy};
use crate::error::{MreError, Result};
use crate::qlinalg::{c, ComplexMatrix, C64};
use crate::qstates::{bloch_vector, norm3, single_qubit_from_bloch, DensityMatrix, StateVector};

/// Below this polarization norm the Schmidt fallback is used.
pub const XI_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct PairBasis {
    /// `(q1, q2)`
    pub q: [f64; 2],
    pub basis_x: [ComplexMatrix; 2],
    pub basis_y: [ComplexMatrix; 2],
    pub xi: f64,
    pub eta_x: [f64; 3],
    pub eta_y: [f64; 3],
}

impl PairBasis {
    /// `Σ_j q_j ρ̄_X^(j) ⊗ ρ̄_Y^(j)`
    pub fn relative_density(&self) -> DensityMatrix {
        let mut r = ComplexMatrix::zeros(4);
        for j in 0..2 {
            r.add_scaled(&self.basis_x[j].kron(&self.basis_y[j]), self.q[j]);
        }
        DensityMatrix::from_matrix_unchecked(r)
    }

    /// True when the fallback branch for maximally entangled states was taken.
    pub fn is_degenerate(&self) -> bool {
        self.xi <= XI_TOL
    }
}

fn check_two_qubit(psi: &StateVector) -> Result<()> {
    if psi.n_qubits() != 2 {
        return Err(MreError::InvalidDimension(format!("pair basis needs two qubits, got {}", psi.n_qubits())));
    }
    Ok(())
}

pub fn pair_basis(psi: &StateVector) -> Result<PairBasis> {
    check_two_qubit(psi)?;
    let xi_x = bloch_vector(&psi.reduced(&[0])?)?;
    let xi_y = bloch_vector(&psi.reduced(&[1])?)?;
    let xi = norm3(xi_x).min(1.0);

    let (eta_x, eta_y) = if xi > XI_TOL {
        let nx = norm3(xi_x);
        let ny = norm3(xi_y);
        (xi_x.map(|v| v / nx), xi_y.map(|v| v / ny))
    } else {
        schmidt_directions(psi)
    };

    let q1 = (1.0 - xi) / 2.0;
    let first = |eta: [f64; 3]| single_qubit_from_bloch(eta.map(|v| -v));
    let second = |b: &ComplexMatrix| &ComplexMatrix::identity(2) - b;
    let bx1 = first(eta_x);
    let by1 = first(eta_y);
    let bx2 = second(&bx1);
    let by2 = second(&by1);
    Ok(PairBasis { q: [q1, 1.0 - q1], basis_x: [bx1, bx2], basis_y: [by1, by2], xi, eta_x, eta_y })
}

/// `η` directions for a maximally entangled pair.
///
/// Writes `|ψ> = (|0>|v0> + |1>|v1>)/√2` and takes `ρ̄_X1 = |1><1|`,
/// `ρ̄_Y1 = |v1><v1|`, so `η = −(Bloch vector of ρ̄_1)`.
fn schmidt_directions(psi: &StateVector) -> ([f64; 3], [f64; 3]) {
    let a = psi.amplitudes();
    let row1 = [a[2], a[3]];
    let norm = (row1[0].norm_sqr() + row1[1].norm_sqr()).sqrt();
    let v1: [C64; 2] = if norm > 0.0 {
        [row1[0] / norm, row1[1] / norm]
    } else {
        // unreachable for a normalized state with ξ ≈ 0
        [c(0.0, 0.0), c(1.0, 0.0)]
    };
    let eta_x = [0.0, 0.0, 1.0];
    let proj = DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(&v1));
    let b = bloch_vector(&proj).expect("single qubit");
    (eta_x, b.map(|v| -v))
}

/// Relative density matrix `R` of a two-qubit pure state.
pub fn relative_density_pair(psi: &StateVector) -> Result<DensityMatrix> {
    Ok(pair_basis(psi)?.relative_density())
}

/// `S(|ψ><ψ| ‖ R(ψ))`
pub fn mre_pair_pure(psi: &StateVector) -> Result<f64> {
    let r = relative_density_pair(psi)?;
    match relative_entropy(&psi.density(), &r)? {
        RelEntropy::Finite(v) => Ok(v),
        RelEntropy::Infinite { support_violation_mass } => Err(MreError::SupportAnomaly(support_violation_mass)),
    }
}
