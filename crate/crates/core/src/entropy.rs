//! Binary, von Neumann and relative entropies in bits.

use crate::error::{MreError, Result};
use crate::qlinalg::{eig_hermitian, ZERO_TOL};
use crate::qstates::{DensityMatrix, STATE_TOL};

/// `Tr ρ Π_null(σ)` above this makes `S(ρ‖σ)` infinite.
pub const SUPPORT_TOL: f64 = 1e-10;

/// `S(ρ‖σ)`: finite, or infinite with the mass of `ρ` outside `supp σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RelEntropy {
    Finite(f64),
    Infinite { support_violation_mass: f64 },
}

impl RelEntropy {
    /// The value, with `f64::INFINITY` for the infinite case.
    pub fn value(&self) -> f64 {
        match *self {
            RelEntropy::Finite(v) => v,
            RelEntropy::Infinite { .. } => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RelEntropy::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            RelEntropy::Finite(v) => Some(v),
            RelEntropy::Infinite { .. } => None,
        }
    }
}

/// `H(x) = −x log₂x − (1−x) log₂(1−x)`
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(MreError::Domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(xlog2x_neg(x) + xlog2x_neg(1.0 - x))
}

#[inline]
fn xlog2x_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy of a probability vector, ignoring entries at or below `ZERO_TOL`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > ZERO_TOL).map(|&p| xlog2x_neg(p)).sum()
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = eig_hermitian(rho.matrix(), STATE_TOL)?;
    if let Some(&min) = eig.values.last() {
        if min < -ZERO_TOL {
            return Err(MreError::NotPsd(min));
        }
    }
    Ok(shannon_entropy(&eig.values).max(0.0))
}

pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<RelEntropy> {
    RelativeEntropyFrom::new(rho)?.to(sigma)
}

/// `S(ρ‖·)` for a fixed first argument, caching `Tr ρ log₂ ρ`.
#[derive(Clone, Debug)]
pub struct RelativeEntropyFrom<'a> {
    rho: &'a DensityMatrix,
    neg_entropy: f64,
}

impl<'a> RelativeEntropyFrom<'a> {
    pub fn new(rho: &'a DensityMatrix) -> Result<Self> {
        Ok(Self { rho, neg_entropy: -von_neumann_entropy(rho)? })
    }

    pub fn to(&self, sigma: &DensityMatrix) -> Result<RelEntropy> {
        if sigma.dim() != self.rho.dim() {
            return Err(MreError::DimMismatch(self.rho.dim(), sigma.dim()));
        }
        let eig = eig_hermitian(sigma.matrix(), STATE_TOL)?;
        let mut cross = 0.0;
        let mut null_mass = 0.0;
        for (k, &mu) in eig.values.iter().enumerate() {
            if mu < -ZERO_TOL {
                return Err(MreError::NotPsd(mu));
            }
            let weight = self.rho.matrix().expectation(&eig.vector(k)).re;
            if mu > ZERO_TOL {
                cross += weight * mu.log2();
            } else {
                null_mass += weight;
            }
        }
        if null_mass > SUPPORT_TOL {
            return Ok(RelEntropy::Infinite { support_violation_mass: null_mass });
        }
        let value = self.neg_entropy - cross;
        if value < -1e-10 {
            // Klein's inequality says this cannot happen for valid states.
            return Err(MreError::Domain(format!("negative relative entropy {value}")));
        }
        Ok(RelEntropy::Finite(value.max(0.0)))
    }
}
