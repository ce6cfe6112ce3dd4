//! Root separation quantities for a pair `(A, B)`.
//!
//! `delta` is the smallest value of `|A|` on the roots of `B` and of `|B|` on
//! the roots of `A`. `delta_tilde` is the global minimum of `|A| + |B|` over
//! the plane; it is reported as a bracket because the lower side comes from
//! the separation inequality `delta / 3^max(N,K) <= delta_tilde`, while the
//! upper side is the best value a multistart local search found.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::Polynomial;
use crate::roots::{find_roots, RootError, RootSet};

/// Below `ZERO_THRESHOLD * max(||A||, ||B||)` the pair is treated as sharing a root.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeparationError {
    #[error("both polynomials must be nonconstant")]
    Constant,
    #[error("polynomials share a root (delta = {delta:e})")]
    CommonRoot { delta: f64 },
    #[error("root certificates failed; refusing to compute delta")]
    UnverifiedRoots,
    #[error("sub-level threshold must be positive, got {0}")]
    NonPositiveLevel(f64),
    #[error("coefficient norms must not exceed 1 (got {norm_a}, {norm_b})")]
    NotNormalized { norm_a: f64, norm_b: f64 },
    #[error("{joint} sample point(s) lie in both sub-level sets, first at {first}")]
    Violation { joint: usize, first: Complex64 },
    #[error(transparent)]
    Roots(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaTilde {
    pub lower: f64,
    pub upper: f64,
    pub witness: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub delta: f64,
    pub delta_tilde_lower: f64,
    pub delta_tilde_upper: f64,
    /// Root at which the `delta` minimum is attained.
    pub argmin_witness: Complex64,
    /// Point at which the best `|A| + |B|` value was found.
    pub tilde_witness: Complex64,
    pub sandwich_ok: bool,
    /// Empirical ensemble maximum of delta, filled in by ensemble runs.
    pub t_bound_note: Option<f64>,
}

/// Tolerance for the sandwich check.
pub const SANDWICH_TOLERANCE: f64 = 1e-9;

/// Raw minimum without the common-root guard.
pub fn delta_value(
    a: &Polynomial,
    b: &Polynomial,
    roots_a: &RootSet,
    roots_b: &RootSet,
) -> (f64, Complex64) {
    let from_a = roots_a.roots.iter().map(|&r| (b.eval(r).norm(), r));
    let from_b = roots_b.roots.iter().map(|&r| (a.eval(r).norm(), r));
    from_a
        .chain(from_b)
        .fold((f64::INFINITY, Complex64::new(0.0, 0.0)), |best, cur| {
            if cur.0 < best.0 {
                cur
            } else {
                best
            }
        })
}

fn check_nonconstant(a: &Polynomial, b: &Polynomial) -> Result<(), SeparationError> {
    if a.degree() == 0 || b.degree() == 0 {
        Err(SeparationError::Constant)
    } else {
        Ok(())
    }
}

fn guarded_delta(
    a: &Polynomial,
    b: &Polynomial,
    roots_a: &RootSet,
    roots_b: &RootSet,
) -> Result<(f64, Complex64), SeparationError> {
    check_nonconstant(a, b)?;
    if !roots_a.verified || !roots_b.verified {
        return Err(SeparationError::UnverifiedRoots);
    }
    let (delta, witness) = delta_value(a, b, roots_a, roots_b);
    let scale = a.coeff_norm().value().max(b.coeff_norm().value());
    if delta <= ZERO_THRESHOLD * scale {
        return Err(SeparationError::CommonRoot { delta });
    }
    Ok((delta, witness))
}

/// Full report: `delta`, the `delta_tilde` bracket and the sandwich flag.
pub fn delta(
    a: &Polynomial,
    b: &Polynomial,
    roots_a: &RootSet,
    roots_b: &RootSet,
) -> Result<DeltaReport, SeparationError> {
    let (delta, argmin_witness) = guarded_delta(a, b, roots_a, roots_b)?;
    let tilde = delta_tilde_with(a, b, roots_a, roots_b, delta)?;
    let sandwich_ok = tilde.lower - SANDWICH_TOLERANCE <= tilde.upper
        && tilde.upper <= delta + SANDWICH_TOLERANCE;
    Ok(DeltaReport {
        delta,
        delta_tilde_lower: tilde.lower,
        delta_tilde_upper: tilde.upper,
        argmin_witness,
        tilde_witness: tilde.witness,
        sandwich_ok,
        t_bound_note: None,
    })
}

/// Bracket for `min |A| + |B|`, computing roots internally.
pub fn delta_tilde(a: &Polynomial, b: &Polynomial) -> Result<DeltaTilde, SeparationError> {
    check_nonconstant(a, b)?;
    let ra = find_roots(a)?;
    let rb = find_roots(b)?;
    let (delta, _) = delta_value(a, b, &ra, &rb);
    delta_tilde_with(a, b, &ra, &rb, delta)
}

fn delta_tilde_with(
    a: &Polynomial,
    b: &Polynomial,
    roots_a: &RootSet,
    roots_b: &RootSet,
    delta: f64,
) -> Result<DeltaTilde, SeparationError> {
    let max_deg = a.degree().max(b.degree()) as i32;
    let lower = (delta / 3f64.powi(max_deg)).max(0.0);
    let objective = |z: Complex64| a.eval(z).norm() + b.eval(z).norm();

    let mut seeds: Vec<Complex64> = Vec::new();
    seeds.extend(&roots_a.roots);
    seeds.extend(&roots_b.roots);
    for d in [a.derivative(), b.derivative()] {
        if d.degree() >= 1 {
            seeds.extend(find_roots(&d)?.roots);
        }
    }
    // coarse grid over the Cauchy disk; keep the best grid points as seeds
    let radius = roots_a.cauchy_bound.max(roots_b.cauchy_bound);
    let grid = 24;
    let mut cells: Vec<(f64, Complex64)> = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        for j in 0..grid {
            let x = -radius + 2.0 * radius * (i as f64 + 0.5) / grid as f64;
            let y = -radius + 2.0 * radius * (j as f64 + 0.5) / grid as f64;
            let z = Complex64::new(x, y);
            if z.norm() <= radius {
                cells.push((objective(z), z));
            }
        }
    }
    cells.sort_by(|x, y| x.0.total_cmp(&y.0));
    seeds.extend(cells.iter().take(8).map(|c| c.1));

    let step = 0.05 * radius;
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for seed in seeds {
        let found = minimize(&objective, seed, step);
        if found.0 < best.0 {
            best = found;
        }
    }
    Ok(DeltaTilde {
        lower,
        upper: best.0,
        witness: best.1,
    })
}

/// Nelder-Mead in the plane: rounds of 50 iterations, restarted around the
/// incumbent until a round improves by less than `1e-10`.
fn minimize<F: Fn(Complex64) -> f64>(f: &F, start: Complex64, step: f64) -> (f64, Complex64) {
    const ROUND: usize = 50;
    const RESTART_TOL: f64 = 1e-10;
    const MAX_ROUNDS: usize = 40;
    let mut best = (f(start), start);
    let mut size = step;
    for _ in 0..MAX_ROUNDS {
        let x0 = best.1;
        let mut simplex = [
            (f(x0), x0),
            (f(x0 + size), x0 + size),
            (
                f(x0 + Complex64::new(0.0, size)),
                x0 + Complex64::new(0.0, size),
            ),
        ];
        for _ in 0..ROUND {
            simplex.sort_by(|p, q| p.0.total_cmp(&q.0));
            let centroid = (simplex[0].1 + simplex[1].1) * 0.5;
            let worst = simplex[2];
            let reflect = centroid + (centroid - worst.1);
            let fr = f(reflect);
            if fr < simplex[0].0 {
                let expand = centroid + (centroid - worst.1) * 2.0;
                let fe = f(expand);
                simplex[2] = if fe < fr { (fe, expand) } else { (fr, reflect) };
            } else if fr < simplex[1].0 {
                simplex[2] = (fr, reflect);
            } else {
                let contract = centroid + (worst.1 - centroid) * 0.5;
                let fc = f(contract);
                if fc < worst.0 {
                    simplex[2] = (fc, contract);
                } else {
                    let b = simplex[0].1;
                    for v in simplex.iter_mut().skip(1) {
                        let p = b + (v.1 - b) * 0.5;
                        *v = (f(p), p);
                    }
                }
            }
        }
        simplex.sort_by(|p, q| p.0.total_cmp(&q.0));
        let improvement = best.0 - simplex[0].0;
        if simplex[0].0 < best.0 {
            best = simplex[0];
        }
        let spread = (simplex[1].1 - simplex[0].1)
            .norm()
            .max((simplex[2].1 - simplex[0].1).norm());
        size = (spread * 4.0).max(1e-14 * (1.0 + best.1.norm()));
        if improvement < RESTART_TOL && spread < 1e-9 * (1.0 + best.1.norm()) {
            break;
        }
    }
    best
}

/// Membership in the sub-level set `{ z : |p(z)| < eps }`.
pub fn sublevel_member(p: &Polynomial, eps: f64, z: Complex64) -> Result<bool, SeparationError> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(SeparationError::NonPositiveLevel(eps));
    }
    Ok(p.eval(z).norm() < eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub samples: usize,
    pub in_a: usize,
    pub in_b: usize,
    pub joint_hits: usize,
    pub level_a: f64,
    pub level_b: f64,
}

/// Van der Corput radical inverse.
fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Deterministic probe points: a Halton cloud over the Cauchy disk plus
/// geometric rings around every root.
pub fn separation_probes(roots_a: &RootSet, roots_b: &RootSet, n_samples: usize) -> Vec<Complex64> {
    let radius = roots_a.cauchy_bound.max(roots_b.cauchy_bound);
    let centers: Vec<Complex64> = roots_a
        .roots
        .iter()
        .chain(&roots_b.roots)
        .copied()
        .collect();
    let n_ring = if centers.is_empty() { 0 } else { n_samples / 2 };
    let n_cloud = n_samples - n_ring;
    let mut out = Vec::with_capacity(n_samples);
    for i in 1..=n_cloud {
        let r = radius * radical_inverse(i, 2).sqrt();
        let t = TAU * radical_inverse(i, 3);
        out.push(Complex64::from_polar(r, t));
    }
    if n_ring > 0 {
        let per_center = n_ring / centers.len();
        let levels = 24usize;
        for (ci, &c) in centers.iter().enumerate() {
            let count = if ci + 1 == centers.len() {
                n_ring - per_center * (centers.len() - 1)
            } else {
                per_center
            };
            for k in 0..count {
                let level = k % levels;
                let rho = radius * 10f64.powf(-6.0 * level as f64 / (levels - 1) as f64);
                let t = TAU * radical_inverse(k + 1, 5) + 0.1 * ci as f64;
                out.push(c + Complex64::from_polar(rho, t));
            }
        }
    }
    out
}

/// Samples the plane and confirms no point is in both
/// `L(A, delta/3^N)` and `L(B, delta/3^K)`.
pub fn check_separation(
    a: &Polynomial,
    b: &Polynomial,
    roots_a: &RootSet,
    roots_b: &RootSet,
    delta: f64,
    n_samples: usize,
) -> Result<SeparationReport, SeparationError> {
    check_nonconstant(a, b)?;
    let (norm_a, norm_b) = (a.coeff_norm().value(), b.coeff_norm().value());
    if norm_a > 1.0 + 1e-12 || norm_b > 1.0 + 1e-12 {
        return Err(SeparationError::NotNormalized { norm_a, norm_b });
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(SeparationError::NonPositiveLevel(delta));
    }
    let level_a = delta / 3f64.powi(a.degree() as i32);
    let level_b = delta / 3f64.powi(b.degree() as i32);
    let mut report = SeparationReport {
        samples: 0,
        in_a: 0,
        in_b: 0,
        joint_hits: 0,
        level_a,
        level_b,
    };
    let mut first = None;
    for z in separation_probes(roots_a, roots_b, n_samples) {
        report.samples += 1;
        let ia = a.eval(z).norm() < level_a;
        let ib = b.eval(z).norm() < level_b;
        report.in_a += ia as usize;
        report.in_b += ib as usize;
        if ia && ib {
            report.joint_hits += 1;
            first.get_or_insert(z);
        }
    }
    match first {
        Some(first) => Err(SeparationError::Violation {
            joint: report.joint_hits,
            first,
        }),
        None => Ok(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pair(a: &Polynomial, b: &Polynomial) -> (RootSet, RootSet) {
        (find_roots(a).unwrap(), find_roots(b).unwrap())
    }

    fn sharp_pair(n: usize, a: f64) -> (Polynomial, Polynomial) {
        let w = Complex64::from_polar(1.0, TAU / (2 * n - 1) as f64);
        let roots: Vec<_> = (1..=n).map(|j| w.powi(j as i32) * a).collect();
        (
            Polynomial::monomial(n),
            Polynomial::from_roots(c(1.0, 0.0), &roots),
        )
    }

    #[test]
    fn delta_of_linear_pair_is_one() {
        let a = Polynomial::monomial(1);
        let b = Polynomial::from_real(&[1.0, -1.0]);
        let (ra, rb) = pair(&a, &b);
        let rep = delta(&a, &b, &ra, &rb).unwrap();
        assert_eq!(rep.delta, 1.0);
        assert!(rep.sandwich_ok);
    }

    #[test]
    fn delta_of_sharpness_pair() {
        let (a, b) = sharp_pair(2, 0.5);
        let (ra, rb) = pair(&a, &b);
        let rep = delta(&a, &b, &ra, &rb).unwrap();
        assert!((rep.delta - 0.25).abs() < 1e-14);
    }

    #[test]
    fn common_root_rejected() {
        let a = Polynomial::monomial(1);
        let (ra, rb) = pair(&a, &a);
        assert!(matches!(
            delta(&a, &a, &ra, &rb),
            Err(SeparationError::CommonRoot { .. })
        ));
    }

    #[test]
    fn tilde_of_linear_pair() {
        // |z| + |1 - z| >= |z + 1 - z| = 1 with equality on [0, 1]
        let a = Polynomial::monomial(1);
        let b = Polynomial::from_real(&[1.0, -1.0]);
        let t = delta_tilde(&a, &b).unwrap();
        assert!((t.upper - 1.0).abs() < 1e-6, "{t:?}");
        assert!((t.lower - 1.0 / 3.0).abs() < 1e-15);
        assert!(t.lower <= t.upper && t.upper <= 1.0 + 1e-9);
    }

    #[test]
    fn tilde_of_sharpness_pair() {
        let (a, b) = sharp_pair(2, 0.5);
        let t = delta_tilde(&a, &b).unwrap();
        assert!(t.upper <= 0.25 + 1e-12);
        assert!((t.lower - 0.25 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn sublevel_predicate() {
        let p = Polynomial::monomial(1);
        assert!(sublevel_member(&p, 0.5, c(0.25, 0.0)).unwrap());
        assert!(!sublevel_member(&p, 0.5, c(1.0, 0.0)).unwrap());
        assert!(sublevel_member(&p, 0.0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn separation_on_linear_pair() {
        let a = Polynomial::monomial(1);
        let b = Polynomial::from_real(&[1.0, -1.0]);
        let (ra, rb) = pair(&a, &b);
        let rep = check_separation(&a, &b, &ra, &rb, 1.0, 10_000).unwrap();
        assert_eq!(rep.joint_hits, 0);
        assert_eq!(rep.samples, 10_000);
        assert!(rep.in_a > 0 && rep.in_b > 0);
    }

    #[test]
    fn separation_rejects_unnormalized() {
        let a = Polynomial::from_real(&[0.0, 2.0]);
        let b = Polynomial::from_real(&[1.0, -1.0]);
        let (ra, rb) = pair(&a, &b);
        assert!(matches!(
            check_separation(&a, &b, &ra, &rb, 1.0, 10),
            Err(SeparationError::NotNormalized { .. })
        ));
    }

    #[test]
    fn delta_scales_linearly() {
        let a = Polynomial::from_real(&[0.3, -0.2, 0.9]);
        let b = Polynomial::new(vec![c(0.1, 0.4), c(-0.7, 0.2), c(0.3, 0.0), c(0.5, -0.5)]);
        let s = c(0.37, -1.9);
        let (ra, rb) = pair(&a, &b);
        let (d, _) = delta_value(&a, &b, &ra, &rb);
        let (sa, sb) = (a.scale(s), b.scale(s));
        let (rsa, rsb) = pair(&sa, &sb);
        let (ds, _) = delta_value(&sa, &sb, &rsa, &rsb);
        assert!((ds - s.norm() * d).abs() <= 1e-12 * ds);
    }

    #[test]
    fn discontinuity_family() {
        let a = Polynomial::monomial(1);
        for n in 2..=10 {
            let nf = n as f64;
            let an = Polynomial::from_real(&[0.0, 1.0, 1.0 / nf]);
            let bn = Polynomial::from_real(&[1.0, -1.0, -(1.0 / nf + 1.0 / (nf * nf))]);
            let (ra, rb) = pair(&an, &bn);
            let (d, _) = delta_value(&an, &bn, &ra, &rb);
            assert!(d <= 1e-9, "n={n} delta={d}");
            assert_eq!(an.distance(&a), 1.0 / nf);
        }
    }

    #[test]
    fn translation_invariance() {
        let a = Polynomial::new(vec![c(0.2, -0.1), c(0.5, 0.3), c(-0.4, 0.8)]);
        let b = Polynomial::new(vec![c(-0.6, 0.0), c(0.1, 0.9), c(0.7, -0.2), c(0.3, 0.3)]);
        let (ra, rb) = pair(&a, &b);
        let (d0, _) = delta_value(&a, &b, &ra, &rb);
        let shift = c(0.45, -0.3);
        let (ta, tb) = (a.translate(shift), b.translate(shift));
        let (rta, rtb) = pair(&ta, &tb);
        let (d1, _) = delta_value(&ta, &tb, &rta, &rtb);
        assert!((d0 - d1).abs() <= 1e-10 * d0);
    }
}
