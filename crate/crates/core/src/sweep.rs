//! Parameter sweeps written as CSV.

use rayon::prelude::*;

use crate::bounds::{assistant_air, SurrogateMode};
use crate::catalog::{sweep_state, SWEEP_X_MAX};
use crate::error::{MreError, Result};
use crate::rdm_multi::{mre_pure, Convention};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub mre: f64,
    pub e_air: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.from.is_finite()
            && self.to.is_finite()
            && self.from >= 0.0
            && self.to <= SWEEP_X_MAX
            && self.from < self.to
            && self.steps >= 2;
        if ok {
            Ok(())
        } else {
            Err(MreError::Domain(format!(
                "sweep needs 0 <= from < to <= {SWEEP_X_MAX} and steps >= 2 (got from={}, to={}, steps={})",
                self.from, self.to, self.steps
            )))
        }
    }

    /// `x_k = from + (to − from)·k/(steps − 1)`
    pub fn grid(&self) -> Vec<f64> {
        let span = self.to - self.from;
        (0..self.steps).map(|k| self.from + span * k as f64 / (self.steps - 1) as f64).collect()
    }
}

pub fn sweep_family(spec: &SweepSpec, convention: Convention) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.grid()
        .into_par_iter()
        .map(|x| {
            // rounding can push the last point a hair past the domain edge
            let psi = sweep_state(x.min(SWEEP_X_MAX))
                .ok_or_else(|| MreError::Domain(format!("x = {x} outside the sweep family")))?;
            let mre = mre_pure(&psi, convention)?.value;
            let e_air = assistant_air(&psi, convention, SurrogateMode::Conditional)?.e_air;
            Ok(SweepRow { x, mre, e_air })
        })
        .collect()
}

/// `(min, max)` of `e_air − mre` over the rows.
pub fn gap_spread(rows: &[SweepRow]) -> (f64, f64) {
    rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
        let g = r.e_air - r.mre;
        (lo.min(g), hi.max(g))
    })
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("x,mre,e_air\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", format_g(r.x, 9), format_g(r.mre, 9), format_g(r.e_air, 9)));
    }
    out
}

/// C `printf("%.{precision}g")`.
pub fn format_g(v: f64, precision: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = precision.max(1);
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
