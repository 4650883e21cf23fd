//! Aggregated measure reports for the command line.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{assistant_air_with, PairBoundTerm, SurrogateMode, BOUND_TOL};
use crate::entropy::{von_neumann_entropy, SUPPORT_TOL};
use crate::error::Result;
use crate::mixed_opt::{mre_mixed, OptimizerConfig};
use crate::qlinalg::ZERO_TOL;
use crate::qstates::{DensityMatrix, StateVector, STATE_TOL};
use crate::rdm_multi::{kn, mre_pure, Convention};
use crate::rdm_pair::XI_TOL;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Mre,
    Air,
    #[default]
    All,
}

impl Measure {
    fn wants_mre(self) -> bool {
        matches!(self, Measure::Mre | Measure::All)
    }

    fn wants_air(self) -> bool {
        matches!(self, Measure::Air | Measure::All)
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mre" => Ok(Measure::Mre),
            "air" => Ok(Measure::Air),
            "all" => Ok(Measure::All),
            other => Err(format!("unknown measure `{other}` (expected mre|air|all)")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportOptions {
    pub measure: Measure,
    pub convention: Convention,
    pub surrogate: SurrogateMode,
    pub optimizer: OptimizerConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub zero: f64,
    pub support: f64,
    pub xi: f64,
    pub state: f64,
    pub bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { zero: ZERO_TOL, support: SUPPORT_TOL, xi: XI_TOL, state: STATE_TOL, bound: BOUND_TOL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedSummary {
    pub rank: usize,
    pub starts: usize,
    pub evaluations: usize,
    pub terms: usize,
    pub spectral_relative_entropy: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairEntropy {
    pub pair: (usize, usize),
    pub entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub kind: &'static str,
    pub n_qubits: usize,
    pub convention: Convention,
    pub surrogate: SurrogateMode,
    pub k_n: String,
    pub mre: Option<f64>,
    pub relative_entropy: Option<f64>,
    pub e_air: Option<f64>,
    pub apparent_max: Option<f64>,
    pub pair_entropies: Vec<PairEntropy>,
    pub single_entropies: Vec<f64>,
    pub air_terms: Vec<PairBoundTerm>,
    pub mixed: Option<MixedSummary>,
    pub tolerances: Tolerances,
    pub warnings: Vec<String>,
}

fn entropies(rho: &DensityMatrix) -> Result<(Vec<PairEntropy>, Vec<f64>)> {
    let n = rho.n_qubits();
    let mut pairs = Vec::new();
    for s in 0..n {
        for t in (s + 1)..n {
            pairs.push(PairEntropy { pair: (s, t), entropy: von_neumann_entropy(&rho.reduced(&[s, t])?)? });
        }
    }
    let singles = (0..n).map(|m| von_neumann_entropy(&rho.reduced(&[m])?)).collect::<Result<_>>()?;
    Ok((pairs, singles))
}

pub fn report_pure(psi: &StateVector, opts: &ReportOptions) -> Result<MeasureReport> {
    let n = psi.n_qubits();
    let k = kn(n, opts.convention)?;
    let (pair_entropies, single_entropies) = entropies(&psi.density())?;
    let mut report = MeasureReport {
        kind: "pure",
        n_qubits: n,
        convention: opts.convention,
        surrogate: opts.surrogate,
        k_n: k.to_string(),
        mre: None,
        relative_entropy: None,
        e_air: None,
        apparent_max: None,
        pair_entropies,
        single_entropies,
        air_terms: Vec::new(),
        mixed: None,
        tolerances: Tolerances::default(),
        warnings: Vec::new(),
    };
    if opts.measure.wants_mre() {
        let m = mre_pure(psi, opts.convention)?;
        report.mre = Some(m.value);
        report.relative_entropy = Some(m.relative_entropy);
    }
    if opts.measure.wants_air() {
        let b = assistant_air_with(psi, opts.convention, opts.surrogate, &opts.optimizer)?;
        report.e_air = Some(b.e_air);
        report.apparent_max = Some(b.apparent_max);
        report.air_terms = b.pair_terms;
    }
    Ok(report)
}

/// Mixed states get the decomposition-minimized MRE; the assistant is only
/// defined for pure states and is omitted.
pub fn report_mixed(rho: &DensityMatrix, opts: &ReportOptions) -> Result<MeasureReport> {
    let n = rho.n_qubits();
    let k = kn(n, opts.convention)?;
    let (pair_entropies, single_entropies) = entropies(rho)?;
    let mut report = MeasureReport {
        kind: "mixed",
        n_qubits: n,
        convention: opts.convention,
        surrogate: opts.surrogate,
        k_n: k.to_string(),
        mre: None,
        relative_entropy: None,
        e_air: None,
        apparent_max: None,
        pair_entropies,
        single_entropies,
        air_terms: Vec::new(),
        mixed: None,
        tolerances: Tolerances::default(),
        warnings: Vec::new(),
    };
    if opts.measure.wants_air() {
        report.warnings.push("e_air is defined for pure states only; omitted".into());
    }
    if opts.measure.wants_mre() {
        let m = mre_mixed(rho, opts.convention, &opts.optimizer)?;
        report.mre = Some(m.value);
        report.relative_entropy = Some(m.relative_entropy.value());
        report.mixed = Some(MixedSummary {
            rank: m.rank,
            starts: m.starts,
            evaluations: m.evaluations,
            terms: m.best.terms.len(),
            spectral_relative_entropy: m.spectral_relative_entropy.value(),
            seed: opts.optimizer.seed,
        });
    }
    Ok(report)
}

fn num(v: f64) -> String {
    format!("{v:.9}")
}

impl MeasureReport {
    /// `key = value` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("kind", self.kind.to_string());
        kv("n_qubits", self.n_qubits.to_string());
        kv("convention", self.convention.to_string());
        kv("surrogate", self.surrogate.to_string());
        kv("k_n", self.k_n.clone());
        if let Some(v) = self.mre {
            kv("mre", num(v));
        }
        if let Some(v) = self.relative_entropy {
            kv("relative_entropy", num(v));
        }
        if let Some(v) = self.e_air {
            kv("e_air", num(v));
        }
        if let Some(v) = self.apparent_max {
            kv("apparent_max", num(v));
        }
        for p in &self.pair_entropies {
            kv(&format!("entropy({},{})", p.pair.0, p.pair.1), num(p.entropy));
        }
        for (m, s) in self.single_entropies.iter().enumerate() {
            kv(&format!("entropy({m})"), num(*s));
        }
        for t in &self.air_terms {
            kv(&format!("e_pair({},{})", t.pair.0, t.pair.1), num(t.e_pair));
        }
        if let Some(m) = &self.mixed {
            kv("mixed.rank", m.rank.to_string());
            kv("mixed.terms", m.terms.to_string());
            kv("mixed.starts", m.starts.to_string());
            kv("mixed.evaluations", m.evaluations.to_string());
            kv("mixed.spectral_relative_entropy", num(m.spectral_relative_entropy));
            kv("mixed.seed", m.seed.to_string());
        }
        let t = &self.tolerances;
        kv("tol.zero", format!("{:e}", t.zero));
        kv("tol.support", format!("{:e}", t.support));
        kv("tol.xi", format!("{:e}", t.xi));
        kv("tol.state", format!("{:e}", t.state));
        kv("tol.bound", format!("{:e}", t.bound));
        for w in &self.warnings {
            kv("warning", w.clone());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
