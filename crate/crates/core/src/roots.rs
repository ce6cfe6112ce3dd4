//! All complex roots of a polynomial, with residual certificates.
//!
//! Roots come from the eigenvalues of the balanced companion matrix followed
//! by a few Newton steps. Exact zero roots (vanishing low-order
//! coefficients) are split off first so `z^N` yields exact zeros.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{balance, hessenberg_eigenvalues, CMatrix};
use crate::poly::Polynomial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("constant polynomial has no roots")]
    DegreeZero,
    #[error("companion eigenvalue iteration did not converge")]
    NonConvergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    /// Residuals must satisfy `|p(r)| <= tol * ||p|| * (1 + |r|)^deg`.
    pub residual_tolerance: f64,
    /// Roots closer than `tol * (1 + cauchy_bound)` are flagged as a cluster.
    pub cluster_tolerance: f64,
    /// Newton steps applied after the eigenvalue solve.
    pub newton_steps: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            residual_tolerance: 1e-9,
            cluster_tolerance: 1e-7,
            newton_steps: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|p(root)|` for each root.
    pub residuals: Vec<f64>,
    pub multiplicity_suspect: Vec<bool>,
    /// `1 + ||p|| / |leading|`.
    pub cauchy_bound: f64,
    /// False when some residual exceeds the configured tolerance.
    pub verified: bool,
}

impl RootSet {
    /// Wraps externally known roots (e.g. from a closed form) with the same
    /// certificates `find_roots` would attach.
    pub fn from_known(p: &Polynomial, roots: Vec<Complex64>, cfg: &RootConfig) -> Self {
        let cauchy_bound = cauchy_bound(p);
        let residuals: Vec<f64> = roots.iter().map(|&r| p.eval(r).norm()).collect();
        let norm = p.coeff_norm().value();
        let deg = p.degree() as i32;
        let verified = roots
            .iter()
            .zip(&residuals)
            .all(|(r, &res)| res <= cfg.residual_tolerance * norm * (1.0 + r.norm()).powi(deg));
        let multiplicity_suspect =
            cluster_flags(&roots, cfg.cluster_tolerance * (1.0 + cauchy_bound));
        Self {
            roots,
            residuals,
            multiplicity_suspect,
            cauchy_bound,
            verified,
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn all_simple(&self) -> bool {
        !self.multiplicity_suspect.iter().any(|&f| f)
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }
}

pub fn cauchy_bound(p: &Polynomial) -> f64 {
    1.0 + p.coeff_norm().value() / p.leading().norm()
}

fn cluster_flags(roots: &[Complex64], tol: f64) -> Vec<bool> {
    let mut flags = vec![false; roots.len()];
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if (roots[i] - roots[j]).norm() < tol {
                flags[i] = true;
                flags[j] = true;
            }
        }
    }
    flags
}

pub fn find_roots(p: &Polynomial) -> Result<RootSet, RootError> {
    find_roots_with(p, &RootConfig::default())
}

pub fn find_roots_with(p: &Polynomial, cfg: &RootConfig) -> Result<RootSet, RootError> {
    if p.degree() == 0 {
        return Err(RootError::DegreeZero);
    }
    let coeffs = p.coeffs();
    let zeros = coeffs
        .iter()
        .take_while(|c| **c == Complex64::new(0.0, 0.0))
        .count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let reduced = Polynomial::new(coeffs[zeros..].to_vec());
    roots.extend(companion_roots(&reduced)?);
    for r in roots.iter_mut().skip(zeros) {
        *r = polish(p, *r, cfg.newton_steps);
    }
    Ok(RootSet::from_known(p, roots, cfg))
}

fn companion_roots(p: &Polynomial) -> Result<Vec<Complex64>, RootError> {
    let n = p.degree();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-p.coeff(0) / p.coeff(1)]),
        _ => {}
    }
    let lead = p.leading();
    let mut m = CMatrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -p.coeff(i) / lead;
    }
    balance(&mut m);
    hessenberg_eigenvalues(&m).map_err(|_| RootError::NonConvergence)
}

/// Newton steps that are only kept while they reduce the residual.
fn polish(p: &Polynomial, mut r: Complex64, steps: usize) -> Complex64 {
    let mut res = p.eval(r).norm();
    for _ in 0..steps {
        let (v, d) = p.eval_with_derivative(r);
        if d.norm() == 0.0 || res == 0.0 {
            break;
        }
        let cand = r - v / d;
        let cres = p.eval(cand).norm();
        if cres.is_nan() || res.is_nan() || cres >= res {
            break;
        }
        r = cand;
        res = cres;
    }
    r
}

fn jitter_clusters(roots: &[Complex64], flags: &[bool], tol: f64, radius: f64) -> Vec<Complex64> {
    let n = roots.len();
    let mut out = roots.to_vec();
    let mut group = vec![usize::MAX; n];
    for i in 0..n {
        if !flags[i] || group[i] != usize::MAX {
            continue;
        }
        // grow the cluster transitively
        let mut members = vec![i];
        group[i] = i;
        let mut k = 0;
        while k < members.len() {
            let a = members[k];
            for j in 0..n {
                if group[j] == usize::MAX && (roots[a] - roots[j]).norm() < tol {
                    group[j] = i;
                    members.push(j);
                }
            }
            k += 1;
        }
        let m = members.len();
        let centroid = members.iter().map(|&j| roots[j]).sum::<Complex64>() / m as f64;
        for (slot, &j) in members.iter().enumerate() {
            let angle = std::f64::consts::TAU * slot as f64 / m as f64 + 0.3;
            out[j] = centroid + Complex64::from_polar(radius, angle);
        }
    }
    out
}

fn rebuild(p: &Polynomial, roots: &[Complex64]) -> Polynomial {
    let sharp = Polynomial::from_roots(p.leading(), roots);
    let ratio = p.coeff_norm().value() / sharp.coeff_norm().value();
    sharp.scale(Complex64::new(ratio, 0.0))
}

/// Splits clustered roots of `a` and `b` apart and rescales to the original
/// coefficient norms, keeping `||a' - a|| + ||b' - b|| <= epsilon`.
/// Pairs whose roots are already simple come back unchanged.
pub fn perturb_to_simple(
    a: &Polynomial,
    b: &Polynomial,
    epsilon: f64,
) -> Result<(Polynomial, Polynomial), RootError> {
    let cfg = RootConfig::default();
    let ra = find_roots_with(a, &cfg)?;
    let rb = find_roots_with(b, &cfg)?;
    if ra.all_simple() && rb.all_simple() {
        return Ok((a.clone(), b.clone()));
    }
    let tol_a = cfg.cluster_tolerance * (1.0 + ra.cauchy_bound);
    let tol_b = cfg.cluster_tolerance * (1.0 + rb.cauchy_bound);
    let mut radius = 0.5 * epsilon;
    loop {
        let na = if ra.all_simple() {
            a.clone()
        } else {
            rebuild(
                a,
                &jitter_clusters(&ra.roots, &ra.multiplicity_suspect, tol_a, radius),
            )
        };
        let nb = if rb.all_simple() {
            b.clone()
        } else {
            rebuild(
                b,
                &jitter_clusters(&rb.roots, &rb.multiplicity_suspect, tol_b, radius),
            )
        };
        if na.distance(a) + nb.distance(b) <= epsilon || radius < f64::EPSILON {
            return Ok((na, nb));
        }
        radius *= 0.5;
    }
}
