//! Acceptance catalog. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::process::ExitCode;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use mre_core::bounds::check_assistant_bound;
use mre_core::catalog::{
    bell_states, extended_bell, ghz_cats, ghz_like, random_product_state, random_qubit, BellPlacement, SWEEP_X_MAX,
};
use mre_core::entropy::{binary_entropy, von_neumann_entropy};
use mre_core::mixed_opt::{mre_mixed, OptimizerConfig};
use mre_core::qlinalg::{eig_hermitian, log2_on_support, partial_trace, ComplexMatrix, HERMITICITY_TOL, ZERO_TOL};
use mre_core::qstates::{DensityMatrix, StateVector};
use mre_core::rdm_multi::{kn, mre_pure, relative_density_n, relative_density_three, Convention};
use mre_core::rdm_pair::{mre_pair_pure, relative_density_pair};
use mre_core::sweep::{sweep_family, to_csv, SweepSpec};

const CONV: Convention = Convention::PairingCount;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(20_240_601);
    r.set_stream(stream);
    r
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_dev(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn ghz_saturation() -> Outcome {
    let dev = max_dev(ghz_cats().iter().map(|(_, psi)| (mre_pure(psi, CONV).unwrap().value - 1.0).abs()));
    outcome(dev <= 1e-9, format!("8 cat states, max |mre - 1| = {dev:.3e}"))
}

fn extended_bell_values() -> Outcome {
    let target = 0.5 * 3f64.log2();
    let mut r = rng(2);
    let mut dev: f64 = 0.0;
    let mut count = 0;
    for placement in BellPlacement::ALL {
        for (_, bell) in bell_states() {
            for _ in 0..10 {
                let psi = extended_bell(&bell, &random_qubit(&mut r), placement);
                dev = dev.max((mre_pure(&psi, CONV).unwrap().value - target).abs());
                count += 1;
            }
        }
    }
    outcome(dev <= 1e-9, format!("{count} states, max |mre - log2(3)/2| = {dev:.3e}"))
}

fn separable_zero() -> Outcome {
    let mut r = rng(3);
    let worst = max_dev((0..100).map(|_| mre_pure(&random_product_state(3, &mut r), CONV).unwrap().value));
    outcome(worst <= 1e-9, format!("100 product states, max mre = {worst:.3e}"))
}

fn ghz_like_binary_entropy() -> Outcome {
    let mut dev: f64 = 0.0;
    for family in 0..4 {
        for k in 0..=20 {
            let w = k as f64 / 20.0;
            let psi = ghz_like(family, w, 0.37 * k as f64);
            dev = dev.max((mre_pure(&psi, CONV).unwrap().value - binary_entropy(w).unwrap()).abs());
        }
    }
    outcome(dev <= 1e-8, format!("4 families x 21 points, max |mre - H(w)| = {dev:.3e}"))
}

fn two_qubit_agreement() -> Outcome {
    let mut dev: f64 = 0.0;
    for k in 0..=20 {
        let th = FRAC_PI_2 * k as f64 / 20.0;
        let psi = StateVector::new(vec![c(th.cos(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(th.sin(), 0.0)]).unwrap();
        let h = binary_entropy(th.cos().powi(2)).unwrap();
        dev = dev.max((mre_pair_pure(&psi).unwrap() - h).abs());
    }
    let mut r = rng(5);
    let mut dev_random: f64 = 0.0;
    for _ in 0..200 {
        let psi = StateVector::random(2, &mut r);
        let ent = von_neumann_entropy(&psi.reduced(&[0]).unwrap()).unwrap();
        dev_random = dev_random.max((mre_pair_pure(&psi).unwrap() - ent).abs());
    }
    outcome(
        dev <= 1e-8 && dev_random <= 1e-8,
        format!("theta grid max dev {dev:.3e}; 200 random states max dev {dev_random:.3e}"),
    )
}

fn kn_table() -> Outcome {
    let got = |n, conv| {
        let k = kn(n, conv).unwrap();
        (*k.numer(), *k.denom())
    };
    let k2 = got(2, CONV);
    let k3 = got(3, CONV);
    let k4_pairing = got(4, Convention::PairingCount);
    let k4_printed = got(4, Convention::Printed);
    let pass = k2 == (1, 1)
        && got(2, Convention::Printed) == (1, 1)
        && k3 == (1, 2)
        && got(3, Convention::Printed) == (1, 2)
        && k4_pairing == (3, 8)
        && k4_printed == (2, 5);
    outcome(
        pass,
        format!(
            "k2 = {}/{}, k3 = {}/{}, k4 = {}/{} (pairing), {}/{} (printed)",
            k2.0, k2.1, k3.0, k3.1, k4_pairing.0, k4_pairing.1, k4_printed.0, k4_printed.1
        ),
    )
}

fn assistant_bound_property() -> Outcome {
    let states: Vec<StateVector> = {
        let mut r = rng(7);
        (0..10_000).map(|_| StateVector::random(3, &mut r)).collect()
    };
    let worst = states
        .par_iter()
        .map(|psi| check_assistant_bound(psi, CONV).unwrap().margin)
        .reduce(|| f64::INFINITY, f64::min);
    let ghz_gap = max_dev(ghz_cats().iter().map(|(_, psi)| check_assistant_bound(psi, CONV).unwrap().margin.abs()));
    outcome(
        worst >= -1e-9 && ghz_gap <= 1e-9,
        format!("10000 states, min(e_air - mre) = {worst:.3e}; max |gap| at GHZ = {ghz_gap:.3e}"),
    )
}

fn sweep_golden() -> Outcome {
    let spec = SweepSpec { from: 0.0, to: SWEEP_X_MAX, steps: 50 };
    let rows = sweep_family(&spec, CONV).unwrap();
    let shape_ok = rows.len() == 50
        && rows.iter().all(|r| r.x.is_finite() && r.mre.is_finite() && r.e_air.is_finite() && r.mre <= r.e_air);
    let csv = to_csv(&rows);
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/sweep_family.csv");
    let golden = std::fs::read_to_string(&golden_path).unwrap_or_default();
    let exact = golden == csv;
    outcome(
        shape_ok && exact,
        format!(
            "50 rows finite with mre <= e_air: {shape_ok}; matches {}: {exact}",
            golden_path.file_name().unwrap().to_string_lossy()
        ),
    )
}

fn consistency_reductions() -> Outcome {
    let mut r = rng(9);
    let mut dev2: f64 = 0.0;
    let mut dev3: f64 = 0.0;
    for _ in 0..100 {
        let psi = StateVector::random(2, &mut r);
        let general = relative_density_n(&psi, CONV).unwrap();
        dev2 = dev2.max(general.matrix().max_abs_diff(relative_density_pair(&psi).unwrap().matrix()));
        let psi = StateVector::random(3, &mut r);
        let general = relative_density_n(&psi, CONV).unwrap();
        dev3 = dev3.max(general.matrix().max_abs_diff(relative_density_three(&psi).unwrap().matrix()));
    }
    outcome(dev2 <= 1e-12 && dev3 <= 1e-12, format!("n=2 max entry dev {dev2:.3e}; n=3 max entry dev {dev3:.3e}"))
}

fn mixed_sanity() -> Outcome {
    let mut r = rng(10);
    let config = OptimizerConfig { restarts: 4, max_iters: 100, ..Default::default() };
    let mut dev: f64 = 0.0;
    for n in [2, 3, 3, 4] {
        let psi = StateVector::random(n, &mut r);
        let mixed = mre_mixed(&psi.density(), CONV, &config).unwrap().value;
        dev = dev.max((mixed - mre_pure(&psi, CONV).unwrap().value).abs());
    }
    let rho = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5])).unwrap();
    let m = mre_mixed(&rho, CONV, &OptimizerConfig::default()).unwrap();
    let spectral = m.spectral_relative_entropy.value();
    outcome(
        dev <= 1e-9 && m.value.abs() <= 1e-9 && spectral.abs() <= 1e-9,
        format!("rank-1 max |mixed - pure| = {dev:.3e}; (P00+P11)/2: mre = {:.3e}, spectral = {spectral:.3e}", m.value),
    )
}

fn random_hermitian<R: Rng>(dim: usize, r: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| c(r.sample(StandardNormal), r.sample(StandardNormal)));
    (&g + &g.adjoint()).scale_real(0.5)
}

fn random_density<R: Rng>(dim: usize, r: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| c(r.sample(StandardNormal), r.sample(StandardNormal)));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

/// `Tr_{discarded}` by explicit index summation.
fn partial_trace_oracle(m: &ComplexMatrix, n: usize, keep: &[usize]) -> ComplexMatrix {
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    let dk = 1 << keep.len();
    let mut out = ComplexMatrix::zeros(dk);
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            let traced_equal = (0..n).filter(|q| !keep.contains(q)).all(|q| bit(i, q) == bit(j, q));
            if !traced_equal {
                continue;
            }
            let sub = |x: usize| keep.iter().fold(0, |acc, &q| (acc << 1) | bit(x, q));
            out[(sub(i), sub(j))] += m[(i, j)];
        }
    }
    out
}

fn numerics() -> Outcome {
    let mut r = rng(11);
    let mut residual: f64 = 0.0;
    for _ in 0..100 {
        let a = random_hermitian(8, &mut r);
        let eig = eig_hermitian(&a, HERMITICITY_TOL).unwrap();
        for k in 0..8 {
            let v = eig.vector(k);
            let av = a.apply(&v);
            let res = av.iter().zip(&v).map(|(x, y)| (x - y * eig.values[k]).norm()).fold(0.0, f64::max);
            residual = residual.max(res);
        }
    }

    let mut pt_dev: f64 = 0.0;
    for keep in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
        for _ in 0..5 {
            let m = random_density(8, &mut r);
            pt_dev = pt_dev.max(partial_trace(&m, &keep).unwrap().max_abs_diff(&partial_trace_oracle(&m, 3, &keep)));
        }
    }

    let mut klein_min = f64::INFINITY;
    for k in 0..1000 {
        let dim = [2, 4, 8][k % 3];
        let rho = random_density(dim, &mut r);
        let sigma = random_density(dim, &mut r);
        let (log_rho, _) = log2_on_support(&rho, ZERO_TOL).unwrap();
        let (log_sigma, _) = log2_on_support(&sigma, ZERO_TOL).unwrap();
        let s = (rho.trace_product(&log_rho) - rho.trace_product(&log_sigma)).re;
        klein_min = klein_min.min(s);
    }
    outcome(
        residual <= 1e-10 && pt_dev <= 1e-12 && klein_min >= -1e-12,
        format!(
            "8x8 eigen residual {residual:.3e}; partial trace dev {pt_dev:.3e}; min S(rho||sigma) over 1000 pairs = {klein_min:.3e}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("GHZ saturation", ghz_saturation),
        ("extended Bell values", extended_bell_values),
        ("separable zero", separable_zero),
        ("GHZ-like binary entropy", ghz_like_binary_entropy),
        ("two-qubit agreement", two_qubit_agreement),
        ("k_n table", kn_table),
        ("assistant bound property", assistant_bound_property),
        ("sweep golden regression", sweep_golden),
        ("consistency reductions", consistency_reductions),
        ("mixed-state sanity", mixed_sanity),
        ("numerics", numerics),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!("criterion {:>2} {:<26} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failures, failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
