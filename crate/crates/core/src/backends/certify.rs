use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::solution::BezoutSolution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CeilingEntry {
    pub n: usize,
    pub k: usize,
    /// Largest `max(ratio_R, ratio_S)` seen in the calibration ensemble.
    pub max_ratio: f64,
    pub ceiling: f64,
}

/// Empirical per-degree ceilings for `||R|| delta^2`. Produced by the
/// `gen_ceiling` example; not a proven constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeilingTable {
    pub version: u32,
    pub label: String,
    pub seed: u64,
    pub instances_per_pair: usize,
    pub delta_floor: f64,
    pub multiplier: f64,
    pub entries: Vec<CeilingEntry>,
}

const BUILTIN: &str = include_str!("../../data/ceiling_v1.json");

impl CeilingTable {
    pub fn builtin() -> Self {
        serde_json::from_str(BUILTIN).expect("embedded ceiling table parses")
    }

    pub fn lookup(&self, n: usize, k: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.n == n && e.k == k)
            .map(|e| e.ceiling)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub norm_r: f64,
    pub norm_s: f64,
    pub delta: f64,
    /// `max(1, ||A||, ||B||)`
    pub norm_cap: f64,
    /// `||R|| delta^2 / norm_cap`
    pub ratio_r: f64,
    pub ratio_s: f64,
    /// `||R|| delta^min(N,K)`, the weaker estimate.
    pub crude_ratio_r: f64,
    pub crude_ratio_s: f64,
    /// `log ||R|| / log(1/delta)` when both logs are positive.
    pub observed_exponent_r: Option<f64>,
    pub observed_exponent_s: Option<f64>,
    pub residual: f64,
    pub residual_ok: bool,
    pub ceiling: Option<f64>,
    /// `None` when the table has no entry for these degrees.
    pub passed: Option<bool>,
}

fn exponent(norm: f64, delta: f64) -> Option<f64> {
    (norm > 1.0 && delta < 1.0).then(|| norm.ln() / (1.0 / delta).ln())
}

pub fn certify_main_bound(
    a: &Polynomial,
    b: &Polynomial,
    solution: &BezoutSolution,
    delta: f64,
    table: &CeilingTable,
) -> Certification {
    let n = a.degree();
    let k = b.degree();
    let norm_r = solution.r.coeff_norm().value();
    let norm_s = solution.s.coeff_norm().value();
    let norm_cap = 1f64.max(a.coeff_norm().value()).max(b.coeff_norm().value());
    let ratio_r = norm_r * delta * delta / norm_cap;
    let ratio_s = norm_s * delta * delta / norm_cap;
    let crude = delta.powi(n.min(k) as i32);
    let ceiling = table.lookup(n, k);
    Certification {
        norm_r,
        norm_s,
        delta,
        norm_cap,
        ratio_r,
        ratio_s,
        crude_ratio_r: norm_r * crude,
        crude_ratio_s: norm_s * crude,
        observed_exponent_r: exponent(norm_r, delta),
        observed_exponent_s: exponent(norm_s, delta),
        residual: solution.residual,
        residual_ok: solution.residual <= 1e-8 * (1.0 + norm_r + norm_s),
        ceiling,
        passed: ceiling.map(|c| ratio_r <= c && ratio_s <= c),
    }
}
