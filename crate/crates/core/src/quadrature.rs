//! Gauss-Legendre rules on circular arcs.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::regions::Arc;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("quadrature did not converge: change {change:e} at {nodes} nodes per arc")]
pub struct QuadratureNotConverged {
    pub change: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub initial_nodes: usize,
    pub max_nodes: usize,
    /// Stop once successive results differ by less than `tol * max(1, |value|)`.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            initial_nodes: 16,
            max_nodes: 1024,
            tolerance: 1e-9,
        }
    }
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A rule laid out on a list of arcs: `(zeta, dzeta weight, |dzeta| weight)`.
#[derive(Debug, Clone)]
pub struct ArcRule {
    pub points: Vec<Complex64>,
    pub dz: Vec<Complex64>,
    pub ds: Vec<f64>,
}

impl ArcRule {
    /// `n` nodes per piece, after splitting arcs to sweeps of at most pi/2.
    pub fn new(arcs: &[Arc], n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        let mut rule = ArcRule {
            points: Vec::new(),
            dz: Vec::new(),
            ds: Vec::new(),
        };
        for arc in arcs.iter().flat_map(|a| a.split(FRAC_PI_2)) {
            let half = 0.5 * arc.sweep();
            let mid = arc.start_angle + half;
            for (xi, wi) in x.iter().zip(&w) {
                let theta = mid + half * xi;
                let e = Complex64::from_polar(arc.circle.radius, theta);
                rule.points.push(arc.circle.center + e);
                rule.dz.push(Complex64::i() * e * (wi * half));
                rule.ds.push(arc.circle.radius * wi * half.abs());
            }
        }
        rule
    }

    pub fn integrate<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        self.points
            .iter()
            .zip(&self.dz)
            .map(|(&z, &w)| f(z) * w)
            .sum()
    }

    pub fn integrate_abs<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.ds)
            .map(|(&z, &w)| f(z) * w)
            .sum()
    }
}

/// `oint f dzeta` for vector-valued `f`, doubling the node count until the
/// result settles.
pub fn contour_integral_vec<F>(
    arcs: &[Arc],
    width: usize,
    f: F,
    cfg: &QuadratureConfig,
) -> Result<(Vec<Complex64>, usize), QuadratureNotConverged>
where
    F: Fn(Complex64) -> Vec<Complex64>,
{
    let eval = |n: usize| {
        let rule = ArcRule::new(arcs, n);
        let mut acc = vec![Complex64::new(0.0, 0.0); width];
        for (&z, &w) in rule.points.iter().zip(&rule.dz) {
            for (a, v) in acc.iter_mut().zip(f(z)) {
                *a += v * w;
            }
        }
        acc
    };
    let mut n = cfg.initial_nodes.max(1);
    let mut prev = eval(n);
    loop {
        let next_n = n * 2;
        if next_n > cfg.max_nodes {
            let change = f64::INFINITY;
            return Err(QuadratureNotConverged { change, nodes: n });
        }
        let cur = eval(next_n);
        let scale = cur.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let change = cur
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if change <= cfg.tolerance * scale {
            return Ok((cur, next_n));
        }
        if next_n * 2 > cfg.max_nodes {
            return Err(QuadratureNotConverged {
                change,
                nodes: next_n,
            });
        }
        prev = cur;
        n = next_n;
    }
}

/// Scalar version of [`contour_integral_vec`].
pub fn contour_integral<F>(
    arcs: &[Arc],
    f: F,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, usize), QuadratureNotConverged>
where
    F: Fn(Complex64) -> Complex64,
{
    contour_integral_vec(arcs, 1, |z| vec![f(z)], cfg).map(|(v, n)| (v[0], n))
}

/// `oint g |dzeta|` for a nonnegative real integrand, with the same doubling.
pub fn contour_abs_integral<F>(
    arcs: &[Arc],
    g: F,
    cfg: &QuadratureConfig,
) -> Result<(f64, usize), QuadratureNotConverged>
where
    F: Fn(Complex64) -> f64,
{
    let mut n = cfg.initial_nodes.max(1);
    let mut prev = ArcRule::new(arcs, n).integrate_abs(&g);
    while n * 2 <= cfg.max_nodes {
        n *= 2;
        let cur = ArcRule::new(arcs, n).integrate_abs(&g);
        let change = (cur - prev).abs();
        if change <= cfg.tolerance * cur.abs().max(1.0) {
            return Ok((cur, n));
        }
        prev = cur;
    }
    Err(QuadratureNotConverged {
        change: f64::INFINITY,
        nodes: n,
    })
}
