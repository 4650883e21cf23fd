//! MRE of mixed states by minimizing over pure-state decompositions.
//!
//! Every decomposition of `ρ = Σ_j λ_j |e_j><e_j|` (rank `r`) into `m`
//! terms is `|ψ̃_i> = Σ_j W_ij √λ_j |e_j>` for an `m×r` isometry `W`. The
//! search starts from the spectral decomposition, any caller-supplied
//! decompositions and a batch of random isometries, and refines each start
//! with Givens rotations `W ← G(a, b, θ, φ) W` and a line search on `θ`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{RelEntropy, RelativeEntropyFrom};
use crate::error::{MreError, Result};
use crate::qlinalg::{c, eig_hermitian, ComplexMatrix, C64, ZERO_TOL};
use crate::qstates::{DensityMatrix, StateVector, STATE_TOL, ZERO_WEIGHT_TOL};
use crate::rdm_multi::{check_size, kn, ratio_f64, relative_density_n, Convention};

/// Largest register accepted by [`mre_mixed`].
pub const MAX_MIXED_QUBITS: usize = 4;

const GRID_POINTS: usize = 8;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Number of decomposition terms; `None` cycles through `r`, `r + 1`, `r²`.
    pub term_count: Option<usize>,
    pub restarts: usize,
    /// Line searches per start.
    pub max_iters: usize,
    pub step_tolerance: f64,
    pub value_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { term_count: None, restarts: 32, max_iters: 500, step_tolerance: 1e-6, value_tolerance: 1e-9, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionSource {
    Spectral,
    Isometry { start: usize, term_count: usize },
    User,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub terms: Vec<(f64, StateVector)>,
    pub source: DecompositionSource,
}

impl Decomposition {
    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|(p, _)| p).sum()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.terms.first().map(|(_, s)| s.dim()).unwrap_or(1);
        let mut m = ComplexMatrix::zeros(dim);
        for (p, psi) in &self.terms {
            m.add_scaled(&ComplexMatrix::outer(psi.amplitudes()), *p);
        }
        m
    }

    /// `Σ_i p_i R(ψ_i)`
    pub fn reference_mixture(&self, convention: Convention) -> Result<DensityMatrix> {
        let (_, first) = self.terms.first().ok_or_else(|| MreError::Domain("empty decomposition".into()))?;
        let mut r = ComplexMatrix::zeros(first.dim());
        for (p, psi) in &self.terms {
            r.add_scaled(relative_density_n(psi, convention)?.matrix(), *p);
        }
        Ok(DensityMatrix::from_matrix_unchecked(r))
    }
}

/// An `rows × cols` complex matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Isometry {
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if r == 0 || cols == 0 || rows.iter().any(|row| row.len() != cols) || r < cols {
            return Err(MreError::InvalidDimension(format!(
                "isometry needs a rectangular rows >= cols layout, got {r} rows"
            )));
        }
        let w = Self { rows: r, cols, data: rows.into_iter().flatten().collect() };
        let defect = w.defect();
        if defect > STATE_TOL {
            return Err(MreError::NotIsometry(defect));
        }
        Ok(w)
    }

    /// First `cols` rows form the identity.
    pub fn embedding(rows: usize, cols: usize) -> Self {
        let mut data = vec![c(0.0, 0.0); rows * cols];
        for j in 0..cols {
            data[j * cols + j] = c(1.0, 0.0);
        }
        Self { rows, cols, data }
    }

    /// Orthonormalized complex Gaussian matrix.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        assert!(rows >= cols);
        loop {
            let data = (0..rows * cols).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
            let mut w = Self { rows, cols, data };
            if w.orthonormalize() {
                return w;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    /// `max |W†W − I|`
    pub fn defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.cols {
            for b in 0..self.cols {
                let dot: C64 = (0..self.rows).map(|i| self.get(i, a).conj() * self.get(i, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Modified Gram-Schmidt on the columns; false if a column collapses.
    fn orthonormalize(&mut self) -> bool {
        for j in 0..self.cols {
            for k in 0..j {
                let dot: C64 = (0..self.rows).map(|i| self.get(i, k).conj() * self.get(i, j)).sum();
                for i in 0..self.rows {
                    let v = self.get(i, k);
                    self.data[i * self.cols + j] -= dot * v;
                }
            }
            let norm: f64 = (0..self.rows).map(|i| self.get(i, j).norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                return false;
            }
            for i in 0..self.rows {
                self.data[i * self.cols + j] /= norm;
            }
        }
        true
    }

    /// Left-multiplies by the Givens rotation
    /// `[[cos θ, −e^{iφ} sin θ], [e^{−iφ} sin θ, cos θ]]` on rows `a`, `b`.
    pub fn rotated(&self, a: usize, b: usize, theta: f64, phi: f64) -> Self {
        let (s, co) = theta.sin_cos();
        let e = C64::from_polar(1.0, phi);
        let mut out = self.clone();
        for j in 0..self.cols {
            let wa = self.get(a, j);
            let wb = self.get(b, j);
            out.data[a * self.cols + j] = wa * co - e * s * wb;
            out.data[b * self.cols + j] = e.conj() * s * wa + wb * co;
        }
        out
    }
}

/// Eigenpairs of `ρ` above `ZERO_TOL`, with `√λ_j` folded into the vectors.
#[derive(Clone, Debug)]
struct Support {
    n_qubits: usize,
    scaled_vectors: Vec<Vec<C64>>,
}

impl Support {
    fn of(rho: &DensityMatrix) -> Result<Self> {
        let eig = eig_hermitian(rho.matrix(), STATE_TOL)?;
        let mut scaled_vectors = Vec::new();
        for (k, &lam) in eig.values.iter().enumerate() {
            if lam < -STATE_TOL {
                return Err(MreError::NotPsd(lam));
            }
            if lam > ZERO_TOL {
                let sq = lam.sqrt();
                scaled_vectors.push(eig.vector(k).into_iter().map(|z| z * sq).collect());
            }
        }
        Ok(Self { n_qubits: rho.n_qubits(), scaled_vectors })
    }

    fn rank(&self) -> usize {
        self.scaled_vectors.len()
    }

    fn decomposition(&self, w: &Isometry, source: DecompositionSource) -> Decomposition {
        let dim = 1usize << self.n_qubits;
        let mut raw = Vec::with_capacity(w.rows());
        for i in 0..w.rows() {
            let mut v = vec![c(0.0, 0.0); dim];
            for (j, e) in self.scaled_vectors.iter().enumerate() {
                let wij = w.get(i, j);
                for (acc, x) in v.iter_mut().zip(e) {
                    *acc += wij * x;
                }
            }
            let p: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if p > ZERO_WEIGHT_TOL {
                raw.push((p, v));
            }
        }
        let total: f64 = raw.iter().map(|(p, _)| p).sum();
        let terms =
            raw.into_iter().map(|(p, v)| (p / total, StateVector::normalized(v).expect("nonzero term"))).collect();
        Decomposition { terms, source }
    }

    /// Isometry reproducing a decomposition of the same state: `W_ij = <e_j|ψ̃_i>/λ_j`.
    fn isometry_of(&self, d: &Decomposition) -> Option<Isometry> {
        let rows = d.terms.len();
        let cols = self.rank();
        if rows < cols {
            return None;
        }
        let mut data = vec![c(0.0, 0.0); rows * cols];
        for (i, (p, psi)) in d.terms.iter().enumerate() {
            let sp = p.sqrt();
            for (j, e) in self.scaled_vectors.iter().enumerate() {
                let lam: f64 = e.iter().map(|z| z.norm_sqr()).sum();
                let dot: C64 = e.iter().zip(psi.amplitudes()).map(|(a, b)| a.conj() * b).sum();
                data[i * cols + j] = dot * sp / lam;
            }
        }
        let mut w = Isometry { rows, cols, data };
        if w.defect() > 1e-6 || !w.orthonormalize() {
            return None;
        }
        Some(w)
    }
}

/// Decomposition of `ρ` generated by the isometry `W` over its spectral support.
pub fn decomposition_from_isometry(rho: &DensityMatrix, w: &Isometry) -> Result<Decomposition> {
    let support = Support::of(rho)?;
    if w.cols() != support.rank() {
        return Err(MreError::DimMismatch(support.rank(), w.cols()));
    }
    let defect = w.defect();
    if defect > STATE_TOL {
        return Err(MreError::NotIsometry(defect));
    }
    Ok(support.decomposition(w, DecompositionSource::Isometry { start: 0, term_count: w.rows() }))
}

pub fn spectral_decomposition(rho: &DensityMatrix) -> Result<Decomposition> {
    let support = Support::of(rho)?;
    let r = support.rank();
    Ok(support.decomposition(&Isometry::embedding(r, r), DecompositionSource::Spectral))
}

#[derive(Clone, Debug)]
pub struct MixedMre {
    pub n_qubits: usize,
    pub convention: Convention,
    pub kn: Ratio<u64>,
    /// `k_n · min S(ρ‖R^M)` over explored decompositions.
    pub value: f64,
    pub relative_entropy: RelEntropy,
    pub best: Decomposition,
    pub spectral_relative_entropy: RelEntropy,
    pub rank: usize,
    pub starts: usize,
    pub evaluations: usize,
}

pub fn mre_mixed(rho: &DensityMatrix, convention: Convention, config: &OptimizerConfig) -> Result<MixedMre> {
    mre_mixed_with_candidates(rho, convention, config, &[])
}

/// Like [`mre_mixed`], additionally starting from each of `candidates`.
pub fn mre_mixed_with_candidates(
    rho: &DensityMatrix,
    convention: Convention,
    config: &OptimizerConfig,
    candidates: &[Decomposition],
) -> Result<MixedMre> {
    let n = rho.n_qubits();
    check_size(n, MAX_MIXED_QUBITS)?;
    let k = kn(n, convention)?;
    let objective = Objective { rel: RelativeEntropyFrom::new(rho)?, convention };
    let support = Support::of(rho)?;
    let r = support.rank();

    let term_counts: Vec<usize> = match config.term_count {
        Some(m) if m < r => return Err(MreError::Domain(format!("term count {m} is below the rank {r}"))),
        Some(m) => vec![m],
        None => {
            let mut v = vec![r, r + 1, r * r];
            v.dedup();
            v
        }
    };

    // Starts: spectral, caller candidates, then seeded random isometries.
    let mut starts: Vec<Start> = vec![Start::Fixed(spectral_decomposition(rho)?)];
    for d in candidates {
        starts.push(Start::Fixed(Decomposition { terms: d.terms.clone(), source: DecompositionSource::User }));
    }
    for restart in 0..config.restarts {
        let m = term_counts[restart % term_counts.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64);
        starts.push(Start::Random(Isometry::random(m, r, &mut rng)));
    }
    let n_starts = starts.len();

    let results: Vec<Result<Outcome>> = starts
        .into_par_iter()
        .enumerate()
        .map(|(index, start)| run_start(index, start, &support, &objective, config))
        .collect();

    let mut evaluations = 0;
    let mut best: Option<Outcome> = None;
    let mut spectral = None;
    for (index, outcome) in results.into_iter().enumerate() {
        let outcome = outcome?;
        evaluations += outcome.evaluations;
        if index == 0 {
            spectral = Some(outcome.start_value);
        }
        // strict comparison keeps the lowest start index on ties
        if best.as_ref().is_none_or(|b| outcome.value.value() < b.value.value()) {
            best = Some(outcome);
        }
    }
    let best = best.expect("spectral start always present");
    Ok(MixedMre {
        n_qubits: n,
        convention,
        kn: k,
        value: ratio_f64(k) * best.value.value(),
        relative_entropy: best.value,
        best: best.decomposition,
        spectral_relative_entropy: spectral.expect("spectral start"),
        rank: r,
        starts: n_starts,
        evaluations,
    })
}

enum Start {
    Fixed(Decomposition),
    Random(Isometry),
}

struct Outcome {
    value: RelEntropy,
    start_value: RelEntropy,
    decomposition: Decomposition,
    evaluations: usize,
}

struct Objective<'a> {
    rel: RelativeEntropyFrom<'a>,
    convention: Convention,
}

impl Objective<'_> {
    fn eval(&self, d: &Decomposition) -> Result<RelEntropy> {
        self.rel.to(&d.reference_mixture(self.convention)?)
    }
}

fn run_start(
    index: usize,
    start: Start,
    support: &Support,
    objective: &Objective<'_>,
    config: &OptimizerConfig,
) -> Result<Outcome> {
    let mut evaluations = 0usize;
    let (fixed, w) = match start {
        Start::Fixed(d) => {
            let w = support.isometry_of(&d);
            (Some(d), w)
        }
        Start::Random(w) => (None, Some(w)),
    };
    let source = |w: &Isometry| DecompositionSource::Isometry { start: index, term_count: w.rows() };

    let (mut best_d, mut best_v) = match fixed {
        Some(d) => {
            let v = objective.eval(&d)?;
            evaluations += 1;
            (d, v)
        }
        None => {
            let w = w.as_ref().expect("random start has an isometry");
            let d = support.decomposition(w, source(w));
            let v = objective.eval(&d)?;
            evaluations += 1;
            (d, v)
        }
    };
    let start_value = best_v;

    if let Some(w) = w {
        let mut cost = |w: &Isometry| -> Result<(f64, Decomposition)> {
            let d = support.decomposition(w, source(w));
            let v = objective.eval(&d)?.value();
            evaluations += 1;
            Ok((v, d))
        };
        let (w_val, w_dec) = cost(&w)?;
        let (refined_v, refined_d) = refine(w, w_val, w_dec, config, &mut cost)?;
        if refined_v < best_v.value() {
            best_v = objective.eval(&refined_d)?;
            best_d = refined_d;
        }
    }
    Ok(Outcome { value: best_v, start_value, decomposition: best_d, evaluations })
}

fn refine(
    mut w: Isometry,
    mut value: f64,
    mut decomposition: Decomposition,
    config: &OptimizerConfig,
    cost: &mut impl FnMut(&Isometry) -> Result<(f64, Decomposition)>,
) -> Result<(f64, Decomposition)> {
    let m = w.rows();
    let mut searches = 0usize;
    'outer: loop {
        let mut improved = false;
        for a in 0..m {
            for b in (a + 1)..m {
                for phi in [0.0, FRAC_PI_2] {
                    if searches >= config.max_iters {
                        break 'outer;
                    }
                    searches += 1;
                    let (theta, v, d) = line_search(&w, a, b, phi, config.step_tolerance, cost)?;
                    if v < value - config.value_tolerance {
                        w = w.rotated(a, b, theta, phi);
                        value = v;
                        decomposition = d;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok((value, decomposition))
}

/// Coarse grid over one period of `θ`, then golden-section search around the
/// best grid point.
fn line_search(
    w: &Isometry,
    a: usize,
    b: usize,
    phi: f64,
    step_tolerance: f64,
    cost: &mut impl FnMut(&Isometry) -> Result<(f64, Decomposition)>,
) -> Result<(f64, f64, Decomposition)> {
    let h = PI / GRID_POINTS as f64;
    let mut best: Option<(f64, f64, Decomposition)> = None;
    for k in 0..GRID_POINTS {
        let theta = -FRAC_PI_2 + k as f64 * h;
        let (v, d) = cost(&w.rotated(a, b, theta, phi))?;
        if best.as_ref().is_none_or(|(_, bv, _)| v < *bv) {
            best = Some((theta, v, d));
        }
    }
    let (center, _, _) = best.as_ref().expect("grid is nonempty");
    let (mut lo, mut hi) = (center - h, center + h);
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = cost(&w.rotated(a, b, x1, phi))?;
    let mut f2 = cost(&w.rotated(a, b, x2, phi))?;
    while hi - lo > step_tolerance {
        if f1.0 < f2.0 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = cost(&w.rotated(a, b, x1, phi))?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = cost(&w.rotated(a, b, x2, phi))?;
        }
    }
    for (x, f) in [(x1, f1), (x2, f2)] {
        if best.as_ref().is_none_or(|(_, bv, _)| f.0 < *bv) {
            best = Some((x, f.0, f.1));
        }
    }
    Ok(best.expect("grid is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdm_multi::mre_pure;

    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn quick() -> OptimizerConfig {
        OptimizerConfig { restarts: 4, max_iters: 40, step_tolerance: 1e-5, ..Default::default() }
    }

    #[test]
    fn identity_isometry_is_spectral() {
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.7, 0.0, 0.0, 0.3])).unwrap();
        let d = decomposition_from_isometry(&rho, &Isometry::embedding(2, 2)).unwrap();
        assert_eq!(d.terms.len(), 2);
        assert!((d.terms[0].0 - 0.7).abs() < 1e-15);
        assert_eq!(d.terms[0].1, StateVector::basis(2, 0));
        assert!((d.terms[1].0 - 0.3).abs() < 1e-15);
        assert_eq!(d.terms[1].1, StateVector::basis(2, 3));
    }

    #[test]
    fn hadamard_mixing_gives_bell_states() {
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5])).unwrap();
        let w = Isometry::from_rows(vec![vec![c(S2, 0.0), c(S2, 0.0)], vec![c(S2, 0.0), c(-S2, 0.0)]]).unwrap();
        let d = decomposition_from_isometry(&rho, &w).unwrap();
        let plus = [S2, 0.0, 0.0, S2];
        let minus = [S2, 0.0, 0.0, -S2];
        for ((p, psi), target) in d.terms.iter().zip([plus, minus]) {
            assert!((p - 0.5).abs() < 1e-15);
            for (z, t) in psi.amplitudes().iter().zip(target) {
                assert!((z - c(t, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_non_isometry() {
        let rows = vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(Isometry::from_rows(rows), Err(MreError::NotIsometry(_))));
    }

    #[test]
    fn random_isometry_reconstructs_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = StateVector::random(2, &mut rng).density();
        let b = StateVector::random(2, &mut rng).density();
        let rho = DensityMatrix::mixture([(0.6, &a), (0.4, &b)]).unwrap();
        let w = Isometry::random(5, 2, &mut rng);
        assert!(w.defect() < 1e-12);
        let d = decomposition_from_isometry(&rho, &w).unwrap();
        assert!((d.total_weight() - 1.0).abs() < 1e-10);
        assert!(d.reconstruct().max_abs_diff(rho.matrix()) < 1e-8);
    }

    #[test]
    fn rank_one_matches_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 3] {
            let psi = StateVector::random(n, &mut rng);
            let pure = mre_pure(&psi, Convention::PairingCount).unwrap().value;
            let mixed = mre_mixed(&psi.density(), Convention::PairingCount, &quick()).unwrap();
            assert!((mixed.value - pure).abs() < 1e-9, "n={n}: {} vs {pure}", mixed.value);
        }
    }

    #[test]
    fn separable_mixture_is_zero() {
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5])).unwrap();
        let out = mre_mixed(&rho, Convention::PairingCount, &quick()).unwrap();
        assert!(out.value.abs() < 1e-9);
        assert!(out.spectral_relative_entropy.value().abs() < 1e-9);
    }

    #[test]
    fn optimizer_never_worse_than_spectral_and_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = StateVector::random(2, &mut rng).density();
        let b = StateVector::random(2, &mut rng).density();
        let rho = DensityMatrix::mixture([(0.5, &a), (0.5, &b)]).unwrap();
        let first = mre_mixed(&rho, Convention::PairingCount, &quick()).unwrap();
        assert!(first.relative_entropy.value() <= first.spectral_relative_entropy.value() + 1e-12);
        let second = mre_mixed(&rho, Convention::PairingCount, &quick()).unwrap();
        assert_eq!(first.value.to_bits(), second.value.to_bits());
        assert_eq!(first.best, second.best);
        assert!(first.best.reconstruct().max_abs_diff(rho.matrix()) < 1e-8);
    }

    #[test]
    fn term_count_below_rank_is_rejected() {
        let rho = DensityMatrix::maximally_mixed(2);
        let cfg = OptimizerConfig { term_count: Some(2), ..quick() };
        assert!(matches!(mre_mixed(&rho, Convention::PairingCount, &cfg), Err(MreError::Domain(_))));
    }

    #[test]
    fn size_limits() {
        let rho = DensityMatrix::maximally_mixed(5);
        assert_eq!(
            mre_mixed(&rho, Convention::PairingCount, &quick()).unwrap_err(),
            MreError::UnsupportedSize(5, 2, 4)
        );
    }
}
