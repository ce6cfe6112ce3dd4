//! The three closed-form example families: sharpness of the `delta`
//! exponent, blow-up without the norm cap, and discontinuity of `delta`.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::roots::find_roots;
use crate::separation::delta_value;
use crate::sylvester::{build, solve_rhs};

/// `A = z^N`, `B = prod_{j=1..N} (z - a w^j)` with `w = e^(2 pi i / (2N - 1))`.
/// Their Bézout cofactors are `R = z^(N-1) / a^(2N-1)` and
/// `S = -a^(1-2N) prod_{j=N+1..2N-1} (z - a w^j)`.
pub fn sharpness_pair(n: usize, a: f64) -> (Polynomial, Polynomial) {
    let w = Complex64::from_polar(1.0, TAU / (2 * n - 1) as f64);
    let roots: Vec<Complex64> = (1..=n).map(|j| w.powi(j as i32) * a).collect();
    (
        Polynomial::monomial(n),
        Polynomial::from_roots(Complex64::new(1.0, 0.0), &roots),
    )
}

pub fn sharpness_cofactors(n: usize, a: f64) -> (Polynomial, Polynomial) {
    let w = Complex64::from_polar(1.0, TAU / (2 * n - 1) as f64);
    let scale = a.powi(1 - 2 * n as i32);
    let r = Polynomial::monomial(n - 1).scale(Complex64::new(scale, 0.0));
    let rest: Vec<Complex64> = (n + 1..2 * n).map(|j| w.powi(j as i32) * a).collect();
    let s = Polynomial::from_roots(Complex64::new(-scale, 0.0), &rest);
    (r, s)
}

fn delta_of(a: &Polynomial, b: &Polynomial) -> f64 {
    let ra = find_roots(a).expect("nonconstant");
    let rb = find_roots(b).expect("nonconstant");
    delta_value(a, b, &ra, &rb).0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub n: usize,
    pub a: f64,
    pub delta: f64,
    pub norm_r: f64,
    /// `delta^(-2 + 1/N)`
    pub expected: f64,
    pub rel_error: f64,
    pub ok: bool,
}

pub fn sharpness_row(n: usize, a: f64, tol: f64) -> SharpnessRow {
    let (pa, pb) = sharpness_pair(n, a);
    let delta = delta_of(&pa, &pb);
    let sol = solve_rhs(&build(&pa, &pb).expect("nonconstant"), &Polynomial::one())
        .expect("no common root");
    let norm_r = sol.r.coeff_norm().value();
    let expected = delta.powf(-2.0 + 1.0 / n as f64);
    let rel_error = (norm_r - expected).abs() / expected;
    SharpnessRow {
        n,
        a,
        delta,
        norm_r,
        expected,
        rel_error,
        ok: rel_error <= tol,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnnormalizedRow {
    pub n: usize,
    pub a: f64,
    pub delta1: f64,
    /// `|r_(N-1)|` for the pair `a^-2 A`, `a^-2 B`.
    pub top_coeff: f64,
    /// `|r_(N-1)| delta1^2`, which should be `1/a`.
    pub product: f64,
    pub expected: f64,
    pub rel_error: f64,
    pub ok: bool,
}

pub fn unnormalized_row(n: usize, a: f64, tol: f64) -> UnnormalizedRow {
    let (pa, pb) = sharpness_pair(n, a);
    let s = Complex64::new(a.powi(-2), 0.0);
    let (a1, b1) = (pa.scale(s), pb.scale(s));
    let delta1 = delta_of(&a1, &b1);
    let sol = solve_rhs(&build(&a1, &b1).expect("nonconstant"), &Polynomial::one())
        .expect("no common root");
    let top_coeff = sol.r.coeff(n - 1).norm();
    let product = top_coeff * delta1 * delta1;
    let expected = 1.0 / a;
    let rel_error = (product - expected).abs() / expected;
    UnnormalizedRow {
        n,
        a,
        delta1,
        top_coeff,
        product,
        expected,
        rel_error,
        ok: rel_error <= tol,
    }
}

/// `A_n = z + z^2/n`, `B_n = 1 - z - (1/n + 1/n^2) z^2`.
pub fn discontinuity_pair(n: usize) -> (Polynomial, Polynomial) {
    let nf = n as f64;
    (
        Polynomial::from_real(&[0.0, 1.0, 1.0 / nf]),
        Polynomial::from_real(&[1.0, -1.0, -(1.0 / nf + 1.0 / (nf * nf))]),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscontinuityRow {
    pub n: usize,
    pub delta_n: f64,
    pub dist_a: f64,
    pub dist_b: f64,
    pub ok: bool,
}

pub fn discontinuity_row(n: usize) -> DiscontinuityRow {
    let (an, bn) = discontinuity_pair(n);
    let a = Polynomial::from_real(&[0.0, 1.0]);
    let b = Polynomial::from_real(&[1.0, -1.0]);
    let delta_n = delta_of(&an, &bn);
    let dist_a = an.distance(&a);
    let dist_b = bn.distance(&b);
    let nf = n as f64;
    DiscontinuityRow {
        n,
        delta_n,
        dist_a,
        dist_b,
        ok: delta_n <= 1e-9
            && dist_a == 1.0 / nf
            && (dist_b - (1.0 / nf + 1.0 / (nf * nf))).abs() <= f64::EPSILON,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExamplesReport {
    pub sharpness: Vec<SharpnessRow>,
    pub unnormalized: Vec<UnnormalizedRow>,
    pub discontinuity: Vec<DiscontinuityRow>,
    /// `delta(z, 1 - z)`, which should be 1.
    pub baseline_delta: f64,
    pub all_ok: bool,
}

pub const SHARPNESS_DEGREES: [usize; 4] = [2, 3, 4, 5];
pub const SHARPNESS_PARAMS: [f64; 5] = [1.0, 0.9, 0.5, 0.25, 0.1];

pub fn run_examples(tol: f64) -> ExamplesReport {
    let mut sharpness = Vec::new();
    let mut unnormalized = Vec::new();
    for &n in &SHARPNESS_DEGREES {
        for &a in &SHARPNESS_PARAMS {
            sharpness.push(sharpness_row(n, a, tol));
            if a < 1.0 {
                unnormalized.push(unnormalized_row(n, a, tol));
            }
        }
    }
    let discontinuity: Vec<_> = (2..=10).map(discontinuity_row).collect();
    let baseline_delta = delta_of(
        &Polynomial::from_real(&[0.0, 1.0]),
        &Polynomial::from_real(&[1.0, -1.0]),
    );
    let all_ok = sharpness.iter().all(|r| r.ok)
        && unnormalized.iter().all(|r| r.ok)
        && discontinuity.iter().all(|r| r.ok)
        && baseline_delta == 1.0;
    ExamplesReport {
        sharpness,
        unnormalized,
        discontinuity,
        baseline_delta,
        all_ok,
    }
}

impl ExamplesReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let mark = |ok: bool| if ok { "ok" } else { "MISMATCH" };
        let _ = writeln!(out, "sharpness: ||R|| against delta^(-2+1/N)");
        let _ = writeln!(
            out,
            "{:>3} {:>6} {:>12} {:>14} {:>14} {:>10}",
            "N", "a", "delta", "||R||", "expected", "rel.err"
        );
        for r in &self.sharpness {
            let _ = writeln!(
                out,
                "{:>3} {:>6} {:>12.4e} {:>14.6e} {:>14.6e} {:>10.2e} {}",
                r.n,
                r.a,
                r.delta,
                r.norm_r,
                r.expected,
                r.rel_error,
                mark(r.ok)
            );
        }
        let _ = writeln!(
            out,
            "\nwithout the norm cap: |r_(N-1)| delta1^2 against 1/a"
        );
        let _ = writeln!(
            out,
            "{:>3} {:>6} {:>12} {:>14} {:>10}",
            "N", "a", "delta1", "product", "rel.err"
        );
        for r in &self.unnormalized {
            let _ = writeln!(
                out,
                "{:>3} {:>6} {:>12.4e} {:>14.6e} {:>10.2e} {}",
                r.n,
                r.a,
                r.delta1,
                r.product,
                r.rel_error,
                mark(r.ok)
            );
        }
        let _ = writeln!(
            out,
            "\ndiscontinuity: delta(z, 1-z) = {}",
            self.baseline_delta
        );
        let _ = writeln!(
            out,
            "{:>3} {:>12} {:>12} {:>12}",
            "n", "delta_n", "||A_n-A||", "||B_n-B||"
        );
        for r in &self.discontinuity {
            let _ = writeln!(
                out,
                "{:>3} {:>12.3e} {:>12.6} {:>12.6} {}",
                r.n,
                r.delta_n,
                r.dist_a,
                r.dist_b,
                mark(r.ok)
            );
        }
        out
    }
}
