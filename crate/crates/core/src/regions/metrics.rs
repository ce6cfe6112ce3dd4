use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::ContourSystem;
use super::{RegionKind, RegionSpec};
use crate::poly::Polynomial;
use crate::quadrature::{contour_abs_integral, ArcRule, QuadratureConfig, QuadratureNotConverged};

/// Measured quantities on a contour next to the bounds they should obey.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourMetrics {
    pub length: f64,
    pub length_bound: Option<f64>,
    /// `oint |du| / |u|`
    pub log_length: f64,
    pub log_length_bound: f64,
    pub min_abs_a: f64,
    pub min_abs_b: f64,
    pub floor_a: f64,
    pub floor_b: f64,
    /// Lower bound for `sup_{|z| <= eps} |P(z)| / ||P||` with `deg P = n`:
    /// Cauchy's estimate `|p_k| <= sup / eps^k` gives `eps^n` for `eps <= 1`.
    pub c5: f64,
    pub c5_formula: String,
    pub epsilon: f64,
    /// Every root lies outside `D(0, 2 eps)`, the setting in which the
    /// `C5 ||A|| / 2^N` floor on the `D`-disk boundaries is valid.
    pub roots_clear_of_origin: bool,
    pub bounds_hold: bool,
}

/// `1 / (4 (N + K + 2))`.
pub fn epsilon_for(n: usize, k: usize) -> f64 {
    1.0 / (4.0 * (n + k + 2) as f64)
}

fn c5_for(eps: f64, degree: usize) -> f64 {
    eps.powi(degree as i32) / eps.max(1.0).powi(degree as i32)
}

/// Picks `z0` among `N + K + 1` points spaced `5 eps` apart on the real axis
/// so that `D(z0, 2 eps)` holds no root. The disks `D(x_k, 2 eps)` are
/// disjoint and there are more of them than roots, so one is always free.
pub fn translation_point(alphas: &[Complex64], betas: &[Complex64]) -> Complex64 {
    let eps = epsilon_for(alphas.len(), betas.len());
    let count = alphas.len() + betas.len() + 1;
    let half = (count as f64 - 1.0) / 2.0;
    (0..count)
        .map(|k| Complex64::new((k as f64 - half) * 5.0 * eps, 0.0))
        .map(|x| {
            let clearance = alphas
                .iter()
                .chain(betas)
                .map(|r| (r - x).norm())
                .fold(f64::INFINITY, f64::min);
            (x, clearance)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(x, _)| x)
        .unwrap_or_default()
}

struct Bounds {
    length: Option<f64>,
    log_length: f64,
    floor_a: f64,
    floor_b: f64,
}

fn bounds_for(
    kind: &RegionKind,
    spec: &RegionSpec,
    a: &Polynomial,
    b: &Polynomial,
    delta: f64,
    eps: f64,
) -> Bounds {
    let n = spec.alphas.len();
    let k = spec.betas.len();
    let m = spec.scale() - 1.0;
    let pow = |base: usize, e: usize| (base as f64).powi(e as i32);
    let d_floor = |p: &Polynomial, deg: usize| {
        c5_for(eps, deg) * p.coeff_norm().value() / 2f64.powi(deg as i32)
    };
    let d_length = |roots: &[Complex64]| roots.iter().map(|r| 1.5 * PI * r.norm()).sum::<f64>();
    let e_a = delta / 3f64.powi(n as i32);
    let e_b = delta / 3f64.powi(k as i32);
    match kind {
        RegionKind::EA => Bounds {
            length: Some(10.0 * PI * m * pow(n, k) / 3.0),
            log_length: f64::INFINITY,
            floor_a: e_a,
            floor_b: e_b,
        },
        RegionKind::EB => Bounds {
            length: Some(10.0 * PI * m * pow(k, n) / 3.0),
            log_length: f64::INFINITY,
            floor_a: e_a,
            floor_b: e_b,
        },
        RegionKind::DA => Bounds {
            length: Some(d_length(&spec.alphas)),
            log_length: 6.0 * PI * n as f64,
            floor_a: d_floor(a, n),
            floor_b: 0.0,
        },
        RegionKind::DB => Bounds {
            length: Some(d_length(&spec.betas)),
            log_length: 6.0 * PI * k as f64,
            floor_a: 0.0,
            floor_b: d_floor(b, k),
        },
        RegionKind::DAEA => Bounds {
            length: Some(pow(n, k) * d_length(&spec.alphas)),
            log_length: 6.0 * PI * pow(n, k + 1),
            floor_a: d_floor(a, n).min(e_a),
            floor_b: e_b,
        },
        RegionKind::DBEB => Bounds {
            length: Some(pow(k, n) * d_length(&spec.betas)),
            log_length: 6.0 * PI * pow(k, n + 1),
            floor_a: e_a,
            floor_b: d_floor(b, k).min(e_b),
        },
        RegionKind::Inverted(base) => Bounds {
            length: None,
            ..bounds_for(base, spec, a, b, delta, eps)
        },
    }
}

/// Length, logarithmic length and the minima of `|A|`, `|B|` along the
/// contour. For an inverted contour `A` and `B` are evaluated at `1/zeta`,
/// and `|du|/|u|` is unchanged by the inversion.
pub fn contour_metrics(
    contour: &ContourSystem,
    spec: &RegionSpec,
    a: &Polynomial,
    b: &Polynomial,
    delta: f64,
) -> Result<ContourMetrics, QuadratureNotConverged> {
    let n = spec.alphas.len();
    let k = spec.betas.len();
    let eps = epsilon_for(n, k);
    let cfg = QuadratureConfig::default();
    let (log_length, _) = contour_abs_integral(&contour.arcs, |u| 1.0 / u.norm(), &cfg)?;
    let inverted = matches!(contour.kind, RegionKind::Inverted(_));
    let rule = ArcRule::new(&contour.arcs, 64);
    let ends = contour.arcs.iter().map(|arc| arc.start());
    let (mut min_a, mut min_b) = (f64::INFINITY, f64::INFINITY);
    for z in rule.points.iter().copied().chain(ends) {
        let w = if inverted { z.inv() } else { z };
        min_a = min_a.min(a.eval(w).norm());
        min_b = min_b.min(b.eval(w).norm());
    }
    let bounds = bounds_for(&contour.kind, spec, a, b, delta, eps);
    let slack = 1.0 + 1e-9;
    let bounds_hold = log_length <= bounds.log_length * slack
        && bounds
            .length
            .is_none_or(|l| contour.total_length <= l * slack)
        && min_a * slack >= bounds.floor_a
        && min_b * slack >= bounds.floor_b;
    let roots_clear_of_origin = spec
        .alphas
        .iter()
        .chain(&spec.betas)
        .all(|r| r.norm() > 2.0 * eps);
    Ok(ContourMetrics {
        length: contour.total_length,
        length_bound: bounds.length,
        log_length,
        log_length_bound: bounds.log_length,
        min_abs_a: min_a,
        min_abs_b: min_b,
        floor_a: bounds.floor_a,
        floor_b: bounds.floor_b,
        c5: c5_for(eps, n),
        c5_formula: "eps^N / max(1, eps)^N (Cauchy coefficient estimate)".into(),
        epsilon: eps,
        roots_clear_of_origin,
        bounds_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{build_region, invert_contour};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn translation_point_clears_every_root() {
        let eps = epsilon_for(2, 2);
        // roots placed on the first few candidates
        let alphas = vec![c(-10.0 * eps, 0.0), c(-5.0 * eps, 0.0)];
        let betas = vec![c(0.0, 0.0), c(5.0 * eps, 0.0)];
        let z0 = translation_point(&alphas, &betas);
        for r in alphas.iter().chain(&betas) {
            assert!((r - z0).norm() > 2.0 * eps);
        }
    }

    #[test]
    fn c5_is_a_valid_sup_bound() {
        // sup over |z| <= eps of |z^N| is eps^N, attaining the bound
        let eps = epsilon_for(3, 2);
        let p = Polynomial::monomial(3);
        let sup = (0..720)
            .map(|t| {
                p.eval(Complex64::from_polar(eps, t as f64 * 0.5_f64.to_radians()))
                    .norm()
            })
            .fold(0.0, f64::max);
        assert!(sup >= c5_for(eps, 3) * p.coeff_norm().value() * (1.0 - 1e-12));
    }

    #[test]
    fn log_length_survives_inversion() {
        let s = 0.34641;
        let alphas = vec![c(1.0 / 3.0, 0.0), c(-0.2, s), c(-0.2, -s)];
        let betas = vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        let spec = RegionSpec::new(RegionKind::DAEA, alphas.clone(), betas.clone());
        let a = Polynomial::from_roots(c(1.0, 0.0), &alphas);
        let b = Polynomial::from_roots(c(1.0, 0.0), &betas);
        let g = build_region(&spec).unwrap();
        let inv = invert_contour(&g).unwrap();
        let m1 = contour_metrics(&g, &spec, &a, &b, 0.1).unwrap();
        let m2 = contour_metrics(&inv, &spec, &a, &b, 0.1).unwrap();
        assert!((m1.log_length - m2.log_length).abs() < 1e-8 * m1.log_length);
        assert!((m1.min_abs_a - m2.min_abs_a).abs() < 1e-3 * m1.min_abs_a);
        assert!(m1.log_length <= m1.log_length_bound);
    }
}
