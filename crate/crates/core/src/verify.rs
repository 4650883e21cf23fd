//! Built-in self check against states with known values.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::check_assistant_bound;
use crate::catalog::{
    bell_states, extended_bell, ghz_cats, ghz_like, random_product_state, random_qubit, BellPlacement,
};
use crate::entropy::{binary_entropy, von_neumann_entropy};
use crate::error::Result;
use crate::qlinalg::ComplexMatrix;
use crate::qstates::StateVector;
use crate::rdm_multi::{kn, mre_pure, relative_density_n, relative_density_three, Convention};
use crate::rdm_pair::relative_density_pair;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyRow {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerifyRow {
    fn new(name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Self {
        let pass = (expected - computed).abs() <= tolerance;
        Self { name: name.into(), expected, computed, tolerance, pass }
    }

    /// Passes when `computed >= expected − tolerance`.
    fn at_least(name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Self {
        let pass = computed >= expected - tolerance;
        Self { name: name.into(), expected, computed, tolerance, pass }
    }
}

/// `(numerator, denominator)`
pub type Fraction = (u64, u64);

/// `(n, k_n under PairingCount, k_n under Printed)`.
pub const KN_TABLE: [(usize, Fraction, Fraction); 5] =
    [(2, (1, 1), (1, 1)), (3, (1, 2), (1, 2)), (4, (3, 8), (2, 5)), (5, (5, 17), (4, 13)), (6, (1, 4), (11, 41))];

const SEED: u64 = 0x5eed;

pub fn run_verify() -> Result<Vec<VerifyRow>> {
    let conv = Convention::PairingCount;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut rows = Vec::new();

    for (name, psi) in ghz_cats() {
        rows.push(VerifyRow::new(name, 1.0, mre_pure(&psi, conv)?.value, 1e-9));
    }

    let half_log3 = 0.5 * 3f64.log2();
    for placement in BellPlacement::ALL {
        for (bell_name, bell) in bell_states() {
            let chi = random_qubit(&mut rng);
            let psi = extended_bell(&bell, &chi, placement);
            rows.push(VerifyRow::new(
                format!("ext-bell({bell_name}, {placement:?})"),
                half_log3,
                mre_pure(&psi, conv)?.value,
                1e-9,
            ));
        }
    }

    for k in 0..20 {
        let psi = random_product_state(3, &mut rng);
        rows.push(VerifyRow::new(format!("product[{k}]"), 0.0, mre_pure(&psi, conv)?.value, 1e-9));
    }

    for family in 0..4 {
        for k in 0..10 {
            let w = (k as f64 + 0.5) / 10.0;
            let psi = ghz_like(family, w, 0.3 * k as f64);
            rows.push(VerifyRow::new(
                format!("ghz-like[{family}](w={w:.2})"),
                binary_entropy(w)?,
                mre_pure(&psi, conv)?.value,
                1e-8,
            ));
        }
    }

    for k in 0..10 {
        let psi = StateVector::random(2, &mut rng);
        let ent = von_neumann_entropy(&psi.reduced(&[0])?)?;
        rows.push(VerifyRow::new(format!("two-qubit-reduction[{k}]"), ent, mre_pure(&psi, conv)?.value, 1e-10));
        let diff = relative_density_n(&psi, conv)?.matrix().max_abs_diff(relative_density_pair(&psi)?.matrix());
        rows.push(VerifyRow::new(format!("two-qubit-reference[{k}]"), 0.0, diff, 1e-12));
    }
    for k in 0..10 {
        let psi = StateVector::random(3, &mut rng);
        let diff = relative_density_n(&psi, conv)?.matrix().max_abs_diff(relative_density_three(&psi)?.matrix());
        rows.push(VerifyRow::new(format!("three-qubit-reference[{k}]"), 0.0, diff, 1e-12));
    }

    for (n, pairing, printed) in KN_TABLE {
        for (convention, (num, den)) in [(Convention::PairingCount, pairing), (Convention::Printed, printed)] {
            let got = kn(n, convention)?;
            rows.push(VerifyRow::new(
                format!("k_{n}({convention}) = {num}/{den}"),
                num as f64 / den as f64,
                *got.numer() as f64 / *got.denom() as f64,
                0.0,
            ));
        }
    }

    let mut worst = f64::INFINITY;
    for k in 0..200 {
        let n = 3 + k % 2;
        let psi = StateVector::random(n, &mut rng);
        worst = worst.min(check_assistant_bound(&psi, conv)?.margin);
    }
    rows.push(VerifyRow::at_least("assistant-margin(min over 200)", 0.0, worst, 1e-9));
    let (_, ghz) = &ghz_cats()[0];
    rows.push(VerifyRow::new("assistant-margin(ghz)", 0.0, check_assistant_bound(ghz, conv)?.margin, 1e-9));

    for (name, bell) in bell_states() {
        let diag = if name.starts_with("phi") { [0.5, 0.0, 0.0, 0.5] } else { [0.0, 0.5, 0.5, 0.0] };
        let diff = relative_density_pair(&bell)?.matrix().max_abs_diff(&ComplexMatrix::from_real_diag(&diag));
        rows.push(VerifyRow::new(format!("bell-reference({name})"), 0.0, diff, 1e-12));
    }

    Ok(rows)
}

pub fn render(rows: &[VerifyRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let tol = if r.tolerance == 0.0 { "exact".to_string() } else { format!("{:.0e}", r.tolerance) };
        let _ = writeln!(
            out,
            "{:<40} expected={:<14.9} computed={:<14.9} tol={:<6} {}",
            r.name,
            r.expected,
            r.computed,
            tol,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let _ = writeln!(out, "{} checks, {} failed", rows.len(), failed);
    out
}
