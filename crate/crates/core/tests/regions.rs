use bezout_core::backends::argument_principle;
use bezout_core::harness::{draw_accepted, instance_rng, unit_disk_point, RunConfig};
use bezout_core::quadrature::QuadratureConfig;
use bezout_core::regions::{
    build_region, build_region_with_retry, RegionError, RegionKind, RegionSpec,
};
use bezout_core::Complex64;
use rand::Rng;

const KINDS: [RegionKind; 6] = [
    RegionKind::EA,
    RegionKind::EB,
    RegionKind::DA,
    RegionKind::DB,
    RegionKind::DAEA,
    RegionKind::DBEB,
];

fn random_spec(seed: u64, index: usize) -> RegionSpec {
    let mut rng = instance_rng(seed, index);
    let n = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=4);
    let alphas = (0..n).map(|_| unit_disk_point(&mut rng) * 1.5).collect();
    let betas = (0..k).map(|_| unit_disk_point(&mut rng) * 1.5).collect();
    RegionSpec::new(RegionKind::EA, alphas, betas)
}

/// Membership from the disk formulas against the winding number of the
/// constructed boundary, at 10^4 points around each region.
#[test]
fn winding_matches_membership() {
    let mut checked = 0;
    for index in 0..12 {
        let base = random_spec(11, index);
        for kind in KINDS {
            let Ok((contour, spec)) = build_region_with_retry(&base.with_kind(kind)) else {
                continue;
            };
            let r = spec.scale() + 0.5;
            let mut rng = instance_rng(99, index);
            for _ in 0..10_000 / KINDS.len() {
                let z = Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
                match contour.winding_number(z) {
                    Ok(w) => {
                        assert_eq!(w, i64::from(spec.contains(z)), "{:?} at {z}", spec.kind);
                        checked += 1;
                    }
                    Err(RegionError::OnContour(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    assert!(checked > 50_000);
}

/// Exact arc-polygon area against a midpoint-grid count of the membership test.
#[test]
fn area_matches_rasterization() {
    let figure = RegionSpec::new(
        RegionKind::EA,
        vec![
            Complex64::new(0.25, 0.125),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.4, 0.0),
        ],
        vec![
            Complex64::new(1.0 / 9.0, 5.0 / 6.0),
            Complex64::new(0.125, 0.5),
            Complex64::new(0.0, 1.0 / 3.0),
            Complex64::new(0.0, 0.2),
        ],
    );
    let specs = [
        figure.clone(),
        figure.with_kind(RegionKind::EB),
        random_spec(5, 1).with_kind(RegionKind::DAEA),
    ];
    for spec in specs {
        let contour = build_region(&spec).unwrap();
        let r = spec.scale() + 0.1;
        let cells = 800;
        let h = 2.0 * r / cells as f64;
        let mut count = 0usize;
        for i in 0..cells {
            for j in 0..cells {
                let z = Complex64::new(-r + (i as f64 + 0.5) * h, -r + (j as f64 + 0.5) * h);
                count += usize::from(spec.contains(z));
            }
        }
        let raster = count as f64 * h * h;
        let exact = contour.signed_area();
        // cell error is bounded by boundary length times cell diagonal
        let slack = contour.total_length * h * std::f64::consts::SQRT_2;
        assert!(
            (raster - exact).abs() <= slack,
            "{:?}: {raster} vs {exact}",
            spec.kind
        );
        assert!(exact > 0.0);
    }
}

/// Rotating and scaling every root by `c` maps the boundary onto itself
/// scaled by `|c|`: component counts are kept, lengths and areas scale.
#[test]
fn similarity_covariance() {
    let c = Complex64::from_polar(2.5, 0.7);
    for index in 0..10 {
        let base = random_spec(23, index);
        let moved = RegionSpec::new(
            RegionKind::EA,
            base.alphas.iter().map(|z| z * c).collect(),
            base.betas.iter().map(|z| z * c).collect(),
        );
        for kind in [RegionKind::EA, RegionKind::EB, RegionKind::DAEA] {
            let (Ok(x), Ok(y)) = (
                build_region(&base.with_kind(kind.clone())),
                build_region(&moved.with_kind(kind)),
            ) else {
                continue;
            };
            assert_eq!(x.loop_count, y.loop_count);
            let s = c.norm();
            assert!((y.total_length - s * x.total_length).abs() <= 1e-9 * y.total_length);
            assert!(
                (y.signed_area() - s * s * x.signed_area()).abs() <= 1e-9 * y.signed_area().abs()
            );
        }
    }
}

/// Every loop of a region boundary turns by exactly one full turn.
#[test]
fn loops_are_closed_and_simple() {
    for index in 0..20 {
        let base = random_spec(31, index);
        for kind in KINDS {
            if let Ok((contour, _)) = build_region_with_retry(&base.with_kind(kind)) {
                for t in contour.loop_turning() {
                    assert!(
                        (t.abs() - std::f64::consts::TAU).abs() < 1e-9,
                        "turning {t}"
                    );
                }
            }
        }
    }
}

#[test]
fn argument_principle_counts_roots() {
    let cfg = RunConfig {
        seed: 404,
        ..RunConfig::default()
    };
    let qcfg = QuadratureConfig::default();
    for inst in draw_accepted(&cfg, 15) {
        if !inst.roots_a.all_simple() || !inst.roots_b.all_simple() {
            continue;
        }
        let spec = RegionSpec::from_roots(RegionKind::EA, &inst.roots_a, &inst.roots_b).unwrap();
        for (kind, inside, outside) in [
            (RegionKind::EA, &inst.a, &inst.b),
            (RegionKind::EB, &inst.b, &inst.a),
            (RegionKind::DAEA, &inst.a, &inst.b),
            (RegionKind::DBEB, &inst.b, &inst.a),
        ] {
            let (contour, _) = build_region_with_retry(&spec.with_kind(kind)).unwrap();
            let n_in = argument_principle(inside, &contour, &qcfg).unwrap();
            let n_out = argument_principle(outside, &contour, &qcfg).unwrap();
            assert!((n_in - Complex64::new(inside.degree() as f64, 0.0)).norm() < 1e-6);
            assert!(n_out.norm() < 1e-6);
        }
    }
}
