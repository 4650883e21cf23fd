//! Pure and mixed qubit-register states, Bloch vectors, and the
//! pair-conditional pure-state decomposition.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{MreError, Result};
use crate::qlinalg::{self, c, eig_hermitian, partial_trace, ComplexMatrix, C64};

/// Tolerance on `Σ|amplitude|² = 1` and on the density-matrix invariants.
pub const STATE_TOL: f64 = 1e-10;

/// Conditional blocks with squared norm at or below this are dropped.
pub const ZERO_WEIGHT_TOL: f64 = 1e-14;

/// Normalized amplitudes over `n` qubits, qubit 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized within [`STATE_TOL`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = Self::check_len(amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > STATE_TOL {
            return Err(MreError::NotNormalized(format!("squared norm {norm_sqr}")));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = Self::check_len(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 0.0 || !norm.is_finite() {
            return Err(MreError::NotNormalized(format!("norm {norm}")));
        }
        Ok(Self { n_qubits, amplitudes: amplitudes.into_iter().map(|z| z / norm).collect() })
    }

    fn check_len(len: usize) -> Result<usize> {
        match qlinalg::qubits_for_dim(len) {
            Some(n) if n >= 1 => Ok(n),
            _ => Err(MreError::InvalidDimension(format!("{len} amplitudes is not 2^n for n >= 1"))),
        }
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![c(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = c(1.0, 0.0);
        Self { n_qubits, amplitudes }
    }

    /// Haar-random pure state.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << n_qubits).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        Self::normalized(amps).expect("gaussian vector is nonzero")
    }

    /// Tensor product of the given states, first factor most significant.
    pub fn product(factors: &[StateVector]) -> Self {
        let mut amps = vec![c(1.0, 0.0)];
        for f in factors {
            amps = amps.iter().flat_map(|a| f.amplitudes.iter().map(move |b| a * b)).collect();
        }
        let n_qubits = factors.iter().map(|f| f.n_qubits).sum();
        Self { n_qubits, amplitudes: amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    /// Moves qubit `k` to position `order[k]`.
    pub fn permute_qubits(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.n_qubits);
        let map = qlinalg::permutation_index_map(order);
        let mut amps = vec![c(0.0, 0.0); self.dim()];
        for (src, &dst) in map.iter().enumerate() {
            amps[dst] = self.amplitudes[src];
        }
        Self { n_qubits: self.n_qubits, amplitudes: amps }
    }

    /// Applies one single-qubit operator per qubit.
    pub fn apply_local(&self, ops: &[ComplexMatrix]) -> Self {
        assert_eq!(ops.len(), self.n_qubits);
        let u = qlinalg::kron_all(ops);
        Self { n_qubits: self.n_qubits, amplitudes: u.apply(&self.amplitudes) }
    }

    pub fn density(&self) -> DensityMatrix {
        density_from_state(self)
    }

    /// Reduced state on `keep` (ascending qubit indices).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        reduced_density(&self.density(), keep)
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Hermitian, PSD, unit-trace matrix over `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity within [`STATE_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(MreError::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(MreError::InvalidTrace(tr.re));
        }
        let eig = eig_hermitian(&matrix, STATE_TOL)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(MreError::NotPsd(min));
        }
        Ok(Self::from_matrix_unchecked(matrix))
    }

    /// For matrices that are valid by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { n_qubits: matrix.n_qubits(), matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self::from_matrix_unchecked(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    /// Convex combination `Σ w_k ρ_k`; weights must sum to one.
    pub fn mixture<'a>(terms: impl IntoIterator<Item = (f64, &'a DensityMatrix)>) -> Result<Self> {
        let mut acc: Option<ComplexMatrix> = None;
        let mut total = 0.0;
        for (w, rho) in terms {
            if w < 0.0 {
                return Err(MreError::Domain(format!("negative mixture weight {w}")));
            }
            total += w;
            match acc.as_mut() {
                Some(m) => {
                    if m.dim() != rho.matrix.dim() {
                        return Err(MreError::DimMismatch(m.dim(), rho.matrix.dim()));
                    }
                    m.add_scaled(&rho.matrix, w)
                }
                None => acc = Some(rho.matrix.scale_real(w)),
            }
        }
        let m = acc.ok_or_else(|| MreError::Domain("empty mixture".into()))?;
        if (total - 1.0).abs() > STATE_TOL {
            return Err(MreError::InvalidTrace(total));
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        reduced_density(self, keep)
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_matrix_unchecked(self.matrix.kron(&other.matrix))
    }

    pub fn permute_qubits(&self, order: &[usize]) -> DensityMatrix {
        Self::from_matrix_unchecked(self.matrix.permute_qubits(order))
    }
}

/// `|ψ><ψ|`
pub fn density_from_state(psi: &StateVector) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(&psi.amplitudes))
}

/// Reduced density matrix on `keep`; keeping every qubit returns a copy.
pub fn reduced_density(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.len() == rho.n_qubits && keep.iter().enumerate().all(|(i, &q)| i == q) {
        return Ok(rho.clone());
    }
    partial_trace(&rho.matrix, keep).map(DensityMatrix::from_matrix_unchecked)
}

/// Polarization vector `ξ_k = Tr(ρ σ_k)` of a single qubit.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(MreError::InvalidDimension(format!(
            "bloch vector needs a single qubit, got dimension {}",
            rho.dim()
        )));
    }
    let m = &rho.matrix;
    Ok([
        m.trace_product(&ComplexMatrix::pauli_x()).re,
        m.trace_product(&ComplexMatrix::pauli_y()).re,
        m.trace_product(&ComplexMatrix::pauli_z()).re,
    ])
}

/// `½(σ₀ + v·σ)`
pub fn single_qubit_from_bloch(v: [f64; 3]) -> ComplexMatrix {
    let [x, y, z] = v;
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => c(0.5 * (1.0 + z), 0.0),
        (1, 1) => c(0.5 * (1.0 - z), 0.0),
        (0, 1) => c(0.5 * x, -0.5 * y),
        _ => c(0.5 * x, 0.5 * y),
    })
}

pub fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairTerm {
    pub weight: f64,
    pub state: StateVector,
}

/// Weighted two-qubit pure states whose mixture is a reduced pair state.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDecomposition {
    pub pair: (usize, usize),
    pub terms: Vec<PairTerm>,
}

impl PairDecomposition {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// `Σ w |ψ><ψ|`
    pub fn reconstruct(&self) -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(4);
        for t in &self.terms {
            m.add_scaled(&ComplexMatrix::outer(t.state.amplitudes()), t.weight);
        }
        DensityMatrix::from_matrix_unchecked(m)
    }
}

/// Decomposes the reduced state of qubits `(s, t)` by conditioning on each
/// computational-basis outcome of the remaining qubits.
///
/// Outcomes are visited in ascending order of the complementary bits (read
/// most significant first); null blocks are dropped. For two qubits the
/// result is the single term `(1, ψ)`.
pub fn pair_conditional_decomposition(psi: &StateVector, pair: (usize, usize)) -> Result<PairDecomposition> {
    let n = psi.n_qubits();
    let (s, t) = pair;
    if s >= t || t >= n {
        return Err(MreError::InvalidPair(s, t));
    }
    if n == 2 {
        return Ok(PairDecomposition { pair, terms: vec![PairTerm { weight: 1.0, state: psi.clone() }] });
    }
    let rest: Vec<usize> = (0..n).filter(|&q| q != s && q != t).collect();
    let mut terms = Vec::new();
    for outcome in 0..1usize << rest.len() {
        let mut base = 0usize;
        for (pos, &q) in rest.iter().enumerate() {
            let bit = (outcome >> (rest.len() - 1 - pos)) & 1;
            base |= bit << (n - 1 - q);
        }
        let block: Vec<C64> = (0..4usize)
            .map(|pq| {
                let idx = base | ((pq >> 1) << (n - 1 - s)) | ((pq & 1) << (n - 1 - t));
                psi.amplitudes[idx]
            })
            .collect();
        let weight: f64 = block.iter().map(|z| z.norm_sqr()).sum();
        if weight <= ZERO_WEIGHT_TOL {
            continue;
        }
        let norm = weight.sqrt();
        terms.push(PairTerm {
            weight,
            state: StateVector { n_qubits: 2, amplitudes: block.into_iter().map(|z| z / norm).collect() },
        });
    }
    Ok(PairDecomposition { pair, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn sv(re: &[f64]) -> StateVector {
        StateVector::new(re.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn rejects_unnormalized_and_bad_lengths() {
        assert!(matches!(StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]), Err(MreError::NotNormalized(_))));
        assert!(matches!(StateVector::new(vec![c(1.0, 0.0); 3]), Err(MreError::InvalidDimension(_))));
        assert!(matches!(StateVector::normalized(vec![c(0.0, 0.0); 4]), Err(MreError::NotNormalized(_))));
    }

    #[test]
    fn density_examples() {
        assert_eq!(sv(&[1.0, 0.0]).density().matrix(), &ComplexMatrix::from_real_diag(&[1.0, 0.0]));
        let plus = sv(&[S2, S2]).density();
        for i in 0..2 {
            for j in 0..2 {
                assert!((plus.matrix()[(i, j)] - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn density_matches_outer_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = StateVector::random(3, &mut rng);
        let rho = psi.density();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(rho.matrix()[(i, j)], psi.amplitude(i) * psi.amplitude(j).conj());
            }
        }
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.5, 0.5])).is_ok());
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.6, 0.5])),
            Err(MreError::InvalidTrace(_))
        ));
        assert!(matches!(DensityMatrix::new(ComplexMatrix::from_real_diag(&[1.5, -0.5])), Err(MreError::NotPsd(_))));
    }

    #[test]
    fn bloch_examples() {
        assert_eq!(bloch_vector(&sv(&[1.0, 0.0]).density()).unwrap(), [0.0, 0.0, 1.0]);
        assert_eq!(bloch_vector(&DensityMatrix::maximally_mixed(1)).unwrap(), [0.0, 0.0, 0.0]);
        let b = bloch_vector(&sv(&[S2, S2]).density()).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-15 && b[1].abs() < 1e-15 && b[2].abs() < 1e-15);
        let y = StateVector::new(vec![c(S2, 0.0), c(0.0, S2)]).unwrap();
        let b = bloch_vector(&y.density()).unwrap();
        assert!((b[1] - 1.0).abs() < 1e-15);
        assert!(matches!(bloch_vector(&DensityMatrix::maximally_mixed(2)), Err(MreError::InvalidDimension(_))));
    }

    #[test]
    fn bloch_round_trip() {
        let v = [0.1, -0.4, 0.3];
        let rho = DensityMatrix::new(single_qubit_from_bloch(v)).unwrap();
        let back = bloch_vector(&rho).unwrap();
        for k in 0..3 {
            assert!((back[k] - v[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn conditional_decomposition_ghz() {
        let ghz = sv(&[S2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, S2]);
        let d = pair_conditional_decomposition(&ghz, (0, 1)).unwrap();
        assert_eq!(d.term_count(), 2);
        assert!((d.terms[0].weight - 0.5).abs() < 1e-15);
        assert_eq!(d.terms[0].state, StateVector::basis(2, 0));
        assert!((d.terms[1].weight - 0.5).abs() < 1e-15);
        assert_eq!(d.terms[1].state, StateVector::basis(2, 3));
    }

    #[test]
    fn conditional_decomposition_product_and_w() {
        let d = pair_conditional_decomposition(&StateVector::basis(3, 0), (1, 2)).unwrap();
        assert_eq!(d.terms, vec![PairTerm { weight: 1.0, state: StateVector::basis(2, 0) }]);

        let t = 1.0 / 3f64.sqrt();
        let w = sv(&[0.0, t, t, 0.0, t, 0.0, 0.0, 0.0]);
        let d = pair_conditional_decomposition(&w, (0, 1)).unwrap();
        assert_eq!(d.term_count(), 2);
        // C = 0 block: c = e = 1/√3
        assert!((d.terms[0].weight - 2.0 / 3.0).abs() < 1e-15);
        let expected = sv(&[0.0, S2, S2, 0.0]);
        assert!(d.terms[0].state.amplitudes().iter().zip(expected.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-15));
        // C = 1 block: b = 1/√3
        assert!((d.terms[1].weight - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.terms[1].state, StateVector::basis(2, 0));
    }

    #[test]
    fn conditional_decomposition_errors() {
        let psi = StateVector::basis(3, 0);
        assert_eq!(pair_conditional_decomposition(&psi, (1, 1)), Err(MreError::InvalidPair(1, 1)));
        assert_eq!(pair_conditional_decomposition(&psi, (2, 1)), Err(MreError::InvalidPair(2, 1)));
        assert_eq!(pair_conditional_decomposition(&psi, (0, 3)), Err(MreError::InvalidPair(0, 3)));
    }

    #[test]
    fn two_qubit_decomposition_is_trivial() {
        let psi = sv(&[S2, 0.0, 0.0, S2]);
        let d = pair_conditional_decomposition(&psi, (0, 1)).unwrap();
        assert_eq!(d.terms, vec![PairTerm { weight: 1.0, state: psi }]);
    }

    #[test]
    fn reduced_examples() {
        let ghz = sv(&[S2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, S2]);
        let rc = ghz.reduced(&[2]).unwrap();
        assert!(rc.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);

        let th: f64 = 0.3;
        let psi = sv(&[th.cos(), 0.0, 0.0, th.sin()]);
        let rx = psi.reduced(&[0]).unwrap();
        let expected = ComplexMatrix::from_real_diag(&[th.cos().powi(2), th.sin().powi(2)]);
        assert!(rx.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn permute_and_product() {
        let a = sv(&[0.6, 0.8]);
        let b = sv(&[1.0, 0.0]);
        let ab = StateVector::product(&[a.clone(), b.clone()]);
        let ba = StateVector::product(&[b, a]);
        assert_eq!(ab.permute_qubits(&[1, 0]), ba);
    }
}
