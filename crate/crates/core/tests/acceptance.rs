//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line is printed; exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use bezout_core::backends::{argument_principle, solve_quadrature, solve_residue};
use bezout_core::harness::{
    discontinuity_row, draw_accepted, run_figures, sharpness_row, Instance, RunConfig,
    SHARPNESS_DEGREES,
};
use bezout_core::quadrature::QuadratureConfig;
use bezout_core::regions::{build_region_with_retry, contour_metrics, RegionKind, RegionSpec};
use bezout_core::separation::{check_separation, delta, delta_tilde};
use bezout_core::sylvester::{build, inverse_norm_report, resultant, solve_rhs};
use bezout_core::{find_roots, Polynomial};

struct Verdict {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(id: &'static str, pass: bool, detail: String) -> Verdict {
    Verdict { id, pass, detail }
}

fn ensemble(seed: u64, size: usize, degree_max: usize) -> Vec<Instance> {
    let cfg = RunConfig {
        seed,
        degree_min: 1,
        degree_max,
        delta_floor: 0.05,
        ..RunConfig::default()
    };
    draw_accepted(&cfg, size)
}

fn sharpness() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for &n in &SHARPNESS_DEGREES {
        for a in [0.9, 0.5, 0.25, 0.1] {
            let row = sharpness_row(n, a, 1e-8);
            let expected_delta = a.powi(n as i32);
            worst = worst
                .max(row.rel_error)
                .max((row.delta - expected_delta).abs() / expected_delta);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "1 sharpness family",
        worst <= 1e-8 && secs < 1.0,
        format!("max rel. error {worst:.2e}, {secs:.3} s"),
    )
}

fn residual_and_agreement(instances: &[Instance]) -> Verdict {
    let start = Instant::now();
    let qcfg = QuadratureConfig::default();
    let one = Polynomial::one();
    let mut worst_residual: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    let mut compared = 0;
    let mut errors = Vec::new();
    for inst in instances {
        let sylvester = solve_rhs(&build(&inst.a, &inst.b).unwrap(), &one).unwrap();
        worst_residual = worst_residual.max(sylvester.residual);
        let (ra, rb) = (&inst.roots_a, &inst.roots_b);
        if !(ra.all_simple() && rb.all_simple()) {
            continue;
        }
        let residue = solve_residue(&inst.a, &inst.b, ra, rb, &one);
        let spec = RegionSpec::from_roots(RegionKind::EA, ra, rb).unwrap();
        let quadrature = build_region_with_retry(&spec)
            .and_then(|(g1, used)| {
                build_region_with_retry(&used.with_kind(RegionKind::EB)).map(|(g2, _)| (g1, g2))
            })
            .map_err(Into::into)
            .and_then(|(g1, g2)| solve_quadrature(&inst.a, &inst.b, ra, rb, &g1, &g2, &one, &qcfg));
        match (residue, quadrature) {
            (Ok(res), Ok(quad)) => {
                worst_gap = worst_gap
                    .max(res.distance(&sylvester))
                    .max(quad.distance(&sylvester))
                    .max(quad.distance(&res));
                compared += 1;
            }
            (r, q) => errors.push(format!("#{}: {:?} {:?}", inst.index, r.err(), q.err())),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "2 residual and backend agreement",
        instances.len() == 500 && worst_residual <= 1e-9 && worst_gap <= 1e-7 && errors.is_empty() && secs < 30.0,
        format!(
            "{} pairs, max residual {worst_residual:.2e}, max gap {worst_gap:.2e} over {compared} simple-root pairs, {} errors, {secs:.1} s",
            instances.len(),
            errors.len()
        ),
    )
}

fn resultant_triple(instances: &[Instance]) -> Verdict {
    let mut worst: f64 = 0.0;
    for inst in instances {
        let r = resultant(&inst.a, &inst.b, &inst.roots_a, &inst.roots_b).unwrap();
        worst = worst.max(r.max_relative_gap);
    }
    verdict(
        "3 resultant triple",
        worst <= 1e-6,
        format!("max relative gap {worst:.2e}"),
    )
}

fn separation(instances: &[Instance]) -> Verdict {
    let mut hits = 0;
    let mut samples = 0;
    for inst in instances.iter().take(100) {
        let report = check_separation(
            &inst.a,
            &inst.b,
            &inst.roots_a,
            &inst.roots_b,
            inst.delta,
            100_000,
        )
        .unwrap();
        hits += report.joint_hits;
        samples += report.samples;
    }
    verdict(
        "4 disjoint sub-level sets",
        hits == 0 && samples == 100 * 100_000,
        format!("{hits} joint hits in {samples} samples"),
    )
}

fn sandwich(instances: &[Instance]) -> (Verdict, Verdict) {
    let mut bad = 0;
    for inst in instances {
        let r = delta(&inst.a, &inst.b, &inst.roots_a, &inst.roots_b).unwrap();
        let floor = r.delta / 3f64.powi(inst.a.degree().max(inst.b.degree()) as i32);
        if !(floor <= r.delta_tilde_upper && r.delta_tilde_upper <= r.delta + 1e-9) {
            bad += 1;
        }
    }
    let a = Polynomial::from_real(&[0.0, 1.0]);
    let b = Polynomial::from_real(&[1.0, -1.0]);
    let tilde = delta_tilde(&a, &b).unwrap();
    (
        verdict(
            "5a delta sandwich",
            bad == 0,
            format!(
                "{bad} of {} instances outside delta/3^max(N,K) <= upper <= delta",
                instances.len()
            ),
        ),
        verdict(
            "5b delta-tilde of (z, 1-z) equals 0.5",
            (tilde.upper - 0.5).abs() <= 1e-6,
            format!(
                "upper bound {:.12}, lower bound {:.12}",
                tilde.upper, tilde.lower
            ),
        ),
    )
}

fn figures() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    match run_figures(dir.path()) {
        Ok(r) => verdict(
            "6 figure reproduction",
            r.all_ok,
            format!(
                "E_A {} components, E_B {}, Gamma_1 windings {:?} / {:?}",
                r.e_a_components, r.e_b_components, r.gamma1_windings_alpha, r.gamma1_windings_beta
            ),
        ),
        Err(e) => verdict("6 figure reproduction", false, e.to_string()),
    }
}

fn argument_principle_and_log_length(instances: &[Instance]) -> (Verdict, Verdict) {
    let qcfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    let mut counted = 0;
    let mut built = 0;
    let mut over = 0;
    let mut worst_fraction: f64 = 0.0;
    for inst in instances {
        let (ra, rb) = (&inst.roots_a, &inst.roots_b);
        let Ok(spec) = RegionSpec::from_roots(RegionKind::DAEA, ra, rb) else {
            continue;
        };
        let Ok((gamma1, used)) = build_region_with_retry(&spec) else {
            continue;
        };
        built += 1;
        if counted < 50 {
            let za = argument_principle(&inst.a, &gamma1, &qcfg).unwrap();
            let zb = argument_principle(&inst.b, &gamma1, &qcfg).unwrap();
            worst = worst
                .max((za.re - inst.a.degree() as f64).abs())
                .max(za.im.abs())
                .max(zb.norm());
            counted += 1;
        }
        let m = contour_metrics(&gamma1, &used, &inst.a, &inst.b, inst.delta).unwrap();
        let bound = 6.0 * PI * (inst.a.degree() as f64).powi(inst.b.degree() as i32 + 1);
        worst_fraction = worst_fraction.max(m.log_length / bound);
        over += usize::from(m.log_length > bound);
    }
    (
        verdict(
            "7 argument principle on Gamma_1",
            counted == 50 && worst <= 1e-6,
            format!("{counted} instances, max deviation {worst:.2e}"),
        ),
        verdict(
            "8 logarithmic length of Gamma_1",
            built > 0 && over == 0,
            format!("{over} of {built} over 6 pi N^(K+1), largest fraction of the bound {worst_fraction:.3}"),
        ),
    )
}

fn sylvester_linear_pair() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    for e in 0..=10 {
        let a = 2f64.powi(-e);
        let pa = Polynomial::from_real(&[0.0, a]);
        let pb = Polynomial::from_real(&[1.0, a]);
        let (ra, rb) = (find_roots(&pa).unwrap(), find_roots(&pb).unwrap());
        let d = delta(&pa, &pb, &ra, &rb).unwrap().delta;
        let report = inverse_norm_report(&pa, &pb, d, None).unwrap();
        worst = worst.max((report.max_entry_norm - 1f64.max(1.0 / a)).abs());
        ratios.push(report.ratio);
    }
    let top = ratios.iter().copied().fold(0.0, f64::max);
    verdict(
        "9 Sylvester inverse for (az, az + 1)",
        worst <= 1e-12 && top.is_finite() && top <= ratios[0] * (1.0 + 1e-12),
        format!(
            "max entry error {worst:.1e}, ratio from {:.3e} down to {:.3e}",
            ratios[0], ratios[10]
        ),
    )
}

fn discontinuity() -> Verdict {
    let rows: Vec<_> = (2..=10).map(discontinuity_row).collect();
    let exact = rows.iter().all(|r| r.dist_a == 1.0 / r.n as f64);
    let small = rows.iter().map(|r| r.delta_n).fold(0.0, f64::max);
    let a = Polynomial::from_real(&[0.0, 1.0]);
    let b = Polynomial::from_real(&[1.0, -1.0]);
    let base = delta(&a, &b, &find_roots(&a).unwrap(), &find_roots(&b).unwrap())
        .unwrap()
        .delta;
    verdict(
        "10 discontinuity example",
        small <= 1e-9 && exact && base == 1.0,
        format!("max delta_n {small:.1e}, delta(z, 1-z) = {base}, distances exact: {exact}"),
    )
}

fn main() -> ExitCode {
    let instances = ensemble(20_240_917, 500, 6);
    let (c5a, c5b) = sandwich(&instances);
    let (c7, c8) = argument_principle_and_log_length(&instances);
    let verdicts = [
        sharpness(),
        residual_and_agreement(&instances),
        resultant_triple(&instances),
        separation(&instances),
        c5a,
        c5b,
        figures(),
        c7,
        c8,
        sylvester_linear_pair(),
        discontinuity(),
    ];
    let mut failed = 0;
    for v in &verdicts {
        println!(
            "{} criterion {}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.id,
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    println!(
        "{} of {} criteria passed",
        verdicts.len() - failed,
        verdicts.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
