//! Named three-qubit state families with known MRE values.

use rand::Rng;

use crate::qlinalg::{c, C64};
use crate::qstates::StateVector;

const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// `(|x> ± |x̄>)/√2` for `x ∈ {000, 001, 010, 011}`: all eight cat states.
pub fn ghz_cats() -> Vec<(String, StateVector)> {
    let mut out = Vec::new();
    for x in 0..4usize {
        let partner = 7 - x;
        for (sign, label) in [(1.0, "+"), (-1.0, "-")] {
            let mut amps = vec![c(0.0, 0.0); 8];
            amps[x] = c(S2, 0.0);
            amps[partner] = c(sign * S2, 0.0);
            out.push((format!("ghz(|{x:03b}>{label}|{partner:03b}>)"), StateVector::new(amps).expect("normalized")));
        }
    }
    out
}

/// The four Bell states `Φ±`, `Ψ±`.
pub fn bell_states() -> Vec<(&'static str, StateVector)> {
    let mk = |a: [f64; 4]| StateVector::new(a.iter().map(|&x| c(x, 0.0)).collect()).expect("normalized");
    vec![
        ("phi+", mk([S2, 0.0, 0.0, S2])),
        ("phi-", mk([S2, 0.0, 0.0, -S2])),
        ("psi+", mk([0.0, S2, S2, 0.0])),
        ("psi-", mk([0.0, S2, -S2, 0.0])),
    ]
}

/// Which party holds the unentangled qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellPlacement {
    /// Bell pair on A,B; spectator C.
    AB,
    /// Bell pair on A,C; spectator B.
    AC,
    /// Bell pair on B,C; spectator A.
    BC,
}

impl BellPlacement {
    pub const ALL: [BellPlacement; 3] = [BellPlacement::AB, BellPlacement::AC, BellPlacement::BC];
}

/// A Bell pair on two parties tensored with `chi` on the third.
pub fn extended_bell(bell: &StateVector, chi: &StateVector, placement: BellPlacement) -> StateVector {
    let base = StateVector::product(&[bell.clone(), chi.clone()]);
    // base qubits: (bell0, bell1, chi)
    match placement {
        BellPlacement::AB => base,
        BellPlacement::AC => base.permute_qubits(&[0, 2, 1]),
        BellPlacement::BC => base.permute_qubits(&[1, 2, 0]),
    }
}

/// All twelve extended Bell states with spectator `|0>`.
pub fn extended_bell_states() -> Vec<(String, StateVector)> {
    let zero = StateVector::basis(1, 0);
    let mut out = Vec::new();
    for placement in BellPlacement::ALL {
        for (name, bell) in bell_states() {
            out.push((format!("ext-bell({name}, {placement:?})"), extended_bell(&bell, &zero, placement)));
        }
    }
    out
}

/// `√w |x> + e^{iφ}√(1−w) |x̄>`, the GHZ-like family with `|amp(x)|² = w`.
///
/// `family` 0..4 selects `x ∈ {000, 001, 010, 011}` (the a/h, b/g, c/f,
/// d/e families).
pub fn ghz_like(family: usize, weight: f64, phase: f64) -> StateVector {
    assert!(family < 4);
    let mut amps = vec![c(0.0, 0.0); 8];
    amps[family] = c(weight.sqrt(), 0.0);
    amps[7 - family] = C64::from_polar((1.0 - weight).max(0.0).sqrt(), phase);
    StateVector::normalized(amps).expect("nonzero")
}

/// Random single-qubit pure state.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> StateVector {
    StateVector::random(1, rng)
}

pub fn random_product_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector {
    let factors: Vec<StateVector> = (0..n).map(|_| random_qubit(rng)).collect();
    StateVector::product(&factors)
}

/// Largest `x` for which the sweep family is defined.
pub const SWEEP_X_MAX: f64 = std::f64::consts::SQRT_2;

/// `x/3|000> + √(2−x²)/3|001> + 1/3|010> + 1/√6|101> + 1/√6|110> + 1/√3|111>`
pub fn sweep_state(x: f64) -> Option<StateVector> {
    if !(0.0..=SWEEP_X_MAX).contains(&x) {
        return None;
    }
    // x·x can round just above 2 at the upper endpoint
    let rad = (2.0 - x * x).max(0.0);
    let s6 = 1.0 / 6f64.sqrt();
    let mut amps = vec![c(0.0, 0.0); 8];
    amps[0] = c(x / 3.0, 0.0);
    amps[1] = c(rad.sqrt() / 3.0, 0.0);
    amps[2] = c(1.0 / 3.0, 0.0);
    amps[5] = c(s6, 0.0);
    amps[6] = c(s6, 0.0);
    amps[7] = c(1.0 / 3f64.sqrt(), 0.0);
    StateVector::new(amps).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_normalized() {
        assert_eq!(ghz_cats().len(), 8);
        assert_eq!(extended_bell_states().len(), 12);
        for k in 0..=20 {
            let x = SWEEP_X_MAX * k as f64 / 20.0;
            assert!(sweep_state(x).is_some(), "x = {x}");
        }
        assert!(sweep_state(1.5).is_none());
        assert!(sweep_state(-0.1).is_none());
    }

    #[test]
    fn extended_bell_placement() {
        let bell = &bell_states()[0].1;
        let one = StateVector::basis(1, 1);
        // (|0>_A |1>_B |0>_C + |1>_A |1>_B |1>_C)/√2
        let s = extended_bell(bell, &one, BellPlacement::AC);
        assert!((s.amplitude(0b010).re - S2).abs() < 1e-15);
        assert!((s.amplitude(0b111).re - S2).abs() < 1e-15);
        // |1>_A ⊗ Φ⁺_BC
        let s = extended_bell(bell, &one, BellPlacement::BC);
        assert!((s.amplitude(0b100).re - S2).abs() < 1e-15);
        assert!((s.amplitude(0b111).re - S2).abs() < 1e-15);
    }
}
