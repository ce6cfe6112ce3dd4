//! Ensemble certification: every backend and every checkable inequality on
//! seeded random normalized pairs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ensemble::{draw, Instance};
use super::RunConfig;
use crate::backends::{
    argument_principle, certify_main_bound, solve_main_pipeline, solve_quadrature, solve_residue,
    CeilingTable,
};
use crate::poly::Polynomial;
use crate::quadrature::QuadratureConfig;
use crate::regions::{build_region_with_retry, contour_metrics, RegionKind, RegionSpec};
use crate::separation::{check_separation, delta};
use crate::solution::BezoutSolution;
use crate::sylvester::{build, inverse_norm_report, resultant, solve_rhs};

/// One backend run against the Sylvester reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendRun {
    pub backend: String,
    pub residual: f64,
    /// Max coefficient gap to the Sylvester solution.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertRecord {
    pub index: usize,
    pub n: usize,
    pub k: usize,
    pub delta: f64,
    pub delta_tilde_lower: f64,
    pub delta_tilde_upper: f64,
    pub sandwich_ok: bool,
    pub norm_r: f64,
    pub norm_s: f64,
    pub ratio_r: f64,
    pub ratio_s: f64,
    pub sylvester_residual: f64,
    pub backends: Vec<BackendRun>,
    /// Reasons the contour backends were not run (multiple roots, region failure).
    pub skipped: Vec<String>,
    pub resultant_gap: f64,
    pub separation_samples: usize,
    pub separation_hits: usize,
    pub inverse_ratio: f64,
    pub ceiling_passed: Option<bool>,
    pub gamma1_log_length: Option<f64>,
    pub gamma1_log_bound: Option<f64>,
    /// `(1/2 pi i) oint A'/A` and the same for `B`, over `Gamma_1`.
    pub gamma1_zeros_a: Option<f64>,
    pub gamma1_zeros_b: Option<f64>,
    pub millis: Option<f64>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub records: usize,
    pub failed_records: usize,
    pub max_sylvester_residual: f64,
    pub max_backend_gap: f64,
    pub max_resultant_gap: f64,
    pub separation_samples: usize,
    pub separation_hits: usize,
    pub sandwich_failures: usize,
    pub max_ratio_r: f64,
    pub max_ratio_s: f64,
    pub max_inverse_ratio: f64,
    pub ceiling_failures: usize,
    pub ceiling_unknown: usize,
    pub skipped_contour_runs: usize,
    /// `None` for an empty ensemble.
    pub min_delta: Option<f64>,
}

impl Aggregate {
    pub fn from_records(records: &[CertRecord]) -> Self {
        let mut agg = Aggregate {
            records: records.len(),
            ..Default::default()
        };
        for r in records {
            agg.failed_records += usize::from(!r.failures.is_empty());
            agg.max_sylvester_residual = agg.max_sylvester_residual.max(r.sylvester_residual);
            for b in &r.backends {
                agg.max_backend_gap = agg.max_backend_gap.max(b.gap);
            }
            agg.max_resultant_gap = agg.max_resultant_gap.max(r.resultant_gap);
            agg.separation_samples += r.separation_samples;
            agg.separation_hits += r.separation_hits;
            agg.sandwich_failures += usize::from(!r.sandwich_ok);
            agg.max_ratio_r = agg.max_ratio_r.max(r.ratio_r);
            agg.max_ratio_s = agg.max_ratio_s.max(r.ratio_s);
            agg.max_inverse_ratio = agg.max_inverse_ratio.max(r.inverse_ratio);
            match r.ceiling_passed {
                Some(false) => agg.ceiling_failures += 1,
                None => agg.ceiling_unknown += 1,
                Some(true) => {}
            }
            agg.skipped_contour_runs += usize::from(!r.skipped.is_empty());
            agg.min_delta = Some(agg.min_delta.map_or(r.delta, |d| d.min(r.delta)));
        }
        agg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub config: RunConfig,
    pub requested: usize,
    pub rejections: BTreeMap<String, usize>,
    pub records: Vec<CertRecord>,
    pub aggregate: Aggregate,
    pub warnings: Vec<String>,
}

impl CertReport {
    pub fn passed(&self) -> bool {
        self.aggregate.failed_records == 0
    }

    pub fn failures(&self) -> Vec<(usize, &str)> {
        self.records
            .iter()
            .flat_map(|r| r.failures.iter().map(move |f| (r.index, f.as_str())))
            .collect()
    }

    pub fn summary(&self) -> String {
        let a = &self.aggregate;
        let mut out = String::new();
        let rejected: usize = self.rejections.values().sum();
        let _ = writeln!(
            out,
            "instances     {} of {} requested ({} rejected)",
            a.records, self.requested, rejected
        );
        for (k, v) in &self.rejections {
            let _ = writeln!(out, "  rejected    {k}: {v}");
        }
        let rows = [
            ("max residual", a.max_sylvester_residual),
            ("max gap", a.max_backend_gap),
            ("max res. gap", a.max_resultant_gap),
            ("max |R|d^2", a.max_ratio_r),
            ("max |S|d^2", a.max_ratio_s),
            ("max inv ratio", a.max_inverse_ratio),
        ];
        if let Some(d) = a.min_delta {
            let _ = writeln!(out, "min delta     {d:.3e}");
        }
        for (name, v) in rows {
            let _ = writeln!(out, "{name:<13} {v:.3e}");
        }
        let _ = writeln!(
            out,
            "separation    {} hits in {} samples",
            a.separation_hits, a.separation_samples
        );
        let _ = writeln!(out, "sandwich      {} failures", a.sandwich_failures);
        let _ = writeln!(
            out,
            "ceiling       {} failures, {} without a table entry",
            a.ceiling_failures, a.ceiling_unknown
        );
        let _ = writeln!(
            out,
            "contour runs  {} instances skipped",
            a.skipped_contour_runs
        );
        let _ = writeln!(out, "failed        {}", a.failed_records);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

fn scale_of(sol: &BezoutSolution) -> f64 {
    1.0 + sol.r.coeff_norm().value().max(sol.s.coeff_norm().value())
}

/// Runs every check on one instance.
pub fn certify_instance(inst: &Instance, cfg: &RunConfig, table: &CeilingTable) -> CertRecord {
    let start = Instant::now();
    let (a, b) = (&inst.a, &inst.b);
    let (ra, rb) = (&inst.roots_a, &inst.roots_b);
    let one = Polynomial::one();
    let qcfg = QuadratureConfig::default();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();

    let report = delta(a, b, ra, rb);
    let (lower, upper, sandwich_ok) = match &report {
        Ok(r) => (r.delta_tilde_lower, r.delta_tilde_upper, r.sandwich_ok),
        Err(e) => {
            failures.push(format!("delta: {e}"));
            (f64::NAN, f64::NAN, false)
        }
    };
    if !sandwich_ok {
        failures.push(format!(
            "sandwich: [{lower:e}, {upper:e}] against delta {:e}",
            inst.delta
        ));
    }

    let sylvester = build(a, b).and_then(|m| solve_rhs(&m, &one));
    let Ok(reference) = sylvester else {
        failures.push("sylvester: singular system".into());
        return CertRecord {
            index: inst.index,
            n: a.degree(),
            k: b.degree(),
            delta: inst.delta,
            delta_tilde_lower: lower,
            delta_tilde_upper: upper,
            sandwich_ok,
            norm_r: f64::NAN,
            norm_s: f64::NAN,
            ratio_r: f64::NAN,
            ratio_s: f64::NAN,
            sylvester_residual: f64::NAN,
            backends: Vec::new(),
            skipped,
            resultant_gap: f64::NAN,
            separation_samples: 0,
            separation_hits: 0,
            inverse_ratio: f64::NAN,
            ceiling_passed: None,
            gamma1_log_length: None,
            gamma1_log_bound: None,
            gamma1_zeros_a: None,
            gamma1_zeros_b: None,
            millis: None,
            failures,
        };
    };
    if reference.residual > cfg.tol("residual") {
        failures.push(format!("sylvester residual {:e}", reference.residual));
    }

    let mut backends = Vec::new();
    let scale = scale_of(&reference);
    let mut push = |name: &str, sol: &BezoutSolution, failures: &mut Vec<String>| {
        let gap = sol.distance(&reference);
        if gap > cfg.tol("agreement") * scale {
            failures.push(format!("{name}: gap {gap:e} to sylvester"));
        }
        backends.push(BackendRun {
            backend: name.into(),
            residual: sol.residual,
            gap,
        });
    };

    let mut gamma1_log_length = None;
    let mut gamma1_log_bound = None;
    let mut gamma1_zeros_a = None;
    let mut gamma1_zeros_b = None;
    if ra.all_simple() && rb.all_simple() {
        match solve_residue(a, b, ra, rb, &one) {
            Ok(sol) => push("residue", &sol, &mut failures),
            Err(e) => failures.push(format!("residue: {e}")),
        }
        let spec = RegionSpec::new(RegionKind::EA, ra.roots.clone(), rb.roots.clone());
        let regions = build_region_with_retry(&spec).and_then(|(g1, used)| {
            build_region_with_retry(&used.with_kind(RegionKind::EB)).map(|(g2, _)| (g1, g2))
        });
        match regions {
            Ok((g1, g2)) => match solve_quadrature(a, b, ra, rb, &g1, &g2, &one, &qcfg) {
                Ok(sol) => push("quadrature", &sol, &mut failures),
                Err(e) => failures.push(format!("quadrature: {e}")),
            },
            Err(e) => skipped.push(format!("E regions: {e}")),
        }
        match build_region_with_retry(&spec.with_kind(RegionKind::DAEA)) {
            Ok((gamma1, used)) => {
                if let Ok(m) = contour_metrics(&gamma1, &used, a, b, inst.delta) {
                    gamma1_log_length = Some(m.log_length);
                    gamma1_log_bound = Some(m.log_length_bound);
                    if m.log_length > m.log_length_bound {
                        failures.push(format!(
                            "gamma1 log length {} over {}",
                            m.log_length, m.log_length_bound
                        ));
                    }
                }
                let za = argument_principle(a, &gamma1, &qcfg);
                let zb = argument_principle(b, &gamma1, &qcfg);
                if let (Ok(za), Ok(zb)) = (za, zb) {
                    let tol = cfg.tol("winding");
                    if (za.re - a.degree() as f64).abs() > tol
                        || za.im.abs() > tol
                        || zb.norm() > tol
                    {
                        failures.push(format!("argument principle on gamma1: {za}, {zb}"));
                    }
                    gamma1_zeros_a = Some(za.re);
                    gamma1_zeros_b = Some(zb.re);
                }
            }
            Err(e) => skipped.push(format!("gamma1: {e}")),
        }
    } else {
        skipped.push("multiple roots".into());
    }
    match solve_main_pipeline(a, b, &qcfg) {
        Ok(sol) => push("main_pipeline", &sol, &mut failures),
        Err(e) => skipped.push(format!("main pipeline: {e}")),
    }

    let resultant_gap = match resultant(a, b, ra, rb) {
        Ok(r) => {
            if !r.agrees(cfg.tol("resultant")) {
                failures.push(format!("resultant gap {:e}", r.max_relative_gap));
            }
            r.max_relative_gap
        }
        Err(e) => {
            failures.push(format!("resultant: {e}"));
            f64::NAN
        }
    };

    let (separation_samples, separation_hits) =
        match check_separation(a, b, ra, rb, inst.delta, cfg.separation_samples) {
            Ok(s) => (s.samples, s.joint_hits),
            Err(e) => {
                failures.push(format!("separation: {e}"));
                (0, 0)
            }
        };
    if separation_hits > 0 {
        failures.push(format!("separation: {separation_hits} joint hits"));
    }

    let inverse_ratio = match inverse_norm_report(a, b, inst.delta, None) {
        Ok(r) => r.ratio,
        Err(e) => {
            failures.push(format!("inverse norm: {e}"));
            f64::NAN
        }
    };

    let cert = certify_main_bound(a, b, &reference, inst.delta, table);
    if cert.passed == Some(false) {
        failures.push(format!(
            "ceiling: ratios {:e}, {:e} over {:?}",
            cert.ratio_r, cert.ratio_s, cert.ceiling
        ));
    }

    CertRecord {
        index: inst.index,
        n: a.degree(),
        k: b.degree(),
        delta: inst.delta,
        delta_tilde_lower: lower,
        delta_tilde_upper: upper,
        sandwich_ok,
        norm_r: cert.norm_r,
        norm_s: cert.norm_s,
        ratio_r: cert.ratio_r,
        ratio_s: cert.ratio_s,
        sylvester_residual: reference.residual,
        backends,
        skipped,
        resultant_gap,
        separation_samples,
        separation_hits,
        inverse_ratio,
        ceiling_passed: cert.passed,
        gamma1_log_length,
        gamma1_log_bound,
        gamma1_zeros_a,
        gamma1_zeros_b,
        millis: cfg
            .record_timing
            .then(|| start.elapsed().as_secs_f64() * 1e3),
        failures,
    }
}

/// Draws the ensemble and certifies each accepted instance in parallel.
pub fn run_certify(cfg: &RunConfig) -> CertReport {
    let table = CeilingTable::builtin();
    let ensemble = draw(cfg);
    let records: Vec<CertRecord> = ensemble
        .instances
        .par_iter()
        .map(|inst| certify_instance(inst, cfg, &table))
        .collect();
    let aggregate = Aggregate::from_records(&records);
    let mut warnings = Vec::new();
    if records.is_empty() {
        warnings.push(format!(
            "no instance passed the delta floor {}; the report is vacuous",
            cfg.delta_floor
        ));
    }
    if aggregate.ceiling_unknown > 0 {
        warnings.push(format!(
            "{} instances have degrees outside the ceiling table",
            aggregate.ceiling_unknown
        ));
    }
    if aggregate.skipped_contour_runs > 0 {
        warnings.push(format!(
            "{} instances skipped at least one contour backend",
            aggregate.skipped_contour_runs
        ));
    }
    CertReport {
        config: cfg.clone(),
        requested: ensemble.requested,
        rejections: ensemble.rejections,
        records,
        aggregate,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_reproducible() {
        let cfg = RunConfig {
            ensemble_size: 24,
            separation_samples: 2_000,
            ..RunConfig::default()
        };
        let r1 = run_certify(&cfg);
        let r2 = run_certify(&cfg);
        assert_eq!(r1, r2);
        assert!(r1.passed(), "{:?}", r1.failures());
        let rejected: usize = r1.rejections.values().sum();
        assert_eq!(r1.records.len() + rejected, 24);
        assert_eq!(r1.aggregate, Aggregate::from_records(&r1.records));
    }

    #[test]
    fn impossible_floor_gives_empty_report() {
        let cfg = RunConfig {
            ensemble_size: 10,
            delta_floor: 10.0,
            ..RunConfig::default()
        };
        let r = run_certify(&cfg);
        assert!(r.records.is_empty());
        assert!(r.passed());
        assert_eq!(r.warnings.len(), 1);
    }
}
