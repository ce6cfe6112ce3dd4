//! Analytic routes to `A R + B S = P`: interpolation at the roots (the
//! residue evaluation of the contour formulas) and direct quadrature over
//! the region boundaries, plus the reversed-polynomial pipeline.

mod certify;
mod reversed;

pub use certify::{certify_main_bound, CeilingEntry, CeilingTable, Certification};
pub use reversed::{solve_main_pipeline, solve_reversed, solve_translated, Inner};

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::Polynomial;
use crate::quadrature::{contour_integral_vec, QuadratureConfig, QuadratureNotConverged};
use crate::regions::{ContourSystem, RegionError};
use crate::roots::{RootError, RootSet};
use crate::separation::ZERO_THRESHOLD;
use crate::solution::{Backend, BezoutSolution};
use crate::sylvester::SylvesterError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error(
        "roots are not simple; split them with perturb_to_simple or use the Sylvester backend"
    )]
    MultipleRoots,
    #[error("common root: |value| = {0:e}")]
    CommonRoot(f64),
    #[error("interpolation weights overflow")]
    IllConditionedInterpolation,
    #[error("right-hand side has degree {got}, at most {max} allowed")]
    RhsDegree { got: usize, max: usize },
    #[error("contour {contour} has winding {computed} at {point}, expected {expected}")]
    BadContour {
        contour: &'static str,
        point: Complex64,
        expected: i64,
        computed: i64,
    },
    #[error("A(0) = 0 or B(0) = 0; translate before reversing")]
    ZeroRoot,
    #[error(transparent)]
    Quadrature(#[from] QuadratureNotConverged),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Sylvester(#[from] SylvesterError),
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// `g(zeta, z) = (G(zeta) - G(z)) / (zeta - z)`, a polynomial in `z` of
/// degree `deg G - 1` whose coefficients are polynomials in `zeta`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceQuotient {
    pub base: Polynomial,
}

impl DifferenceQuotient {
    pub fn new(base: &Polynomial) -> Self {
        Self { base: base.clone() }
    }

    /// Coefficients `c_j(zeta) = sum_{k>j} g_k zeta^(k-j-1)`, `j < deg G`.
    pub fn coefficients_in_z(&self, zeta: Complex64) -> Vec<Complex64> {
        let n = self.base.degree();
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        if n == 0 {
            return c;
        }
        c[n - 1] = self.base.coeff(n);
        for j in (0..n - 1).rev() {
            c[j] = self.base.coeff(j + 1) + zeta * c[j + 1];
        }
        c
    }

    pub fn poly_in_z(&self, zeta: Complex64) -> Polynomial {
        Polynomial::new(self.coefficients_in_z(zeta))
    }

    pub fn eval(&self, zeta: Complex64, z: Complex64) -> Complex64 {
        self.coefficients_in_z(zeta)
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

fn check_rhs(a: &Polynomial, b: &Polynomial, p: &Polynomial) -> Result<(), BackendError> {
    let max = a.degree() + b.degree() - 1;
    if !p.is_zero() && p.degree() > max {
        return Err(BackendError::RhsDegree {
            got: p.degree(),
            max,
        });
    }
    Ok(())
}

fn check_simple(ra: &RootSet, rb: &RootSet) -> Result<(), BackendError> {
    if ra.all_simple() && rb.all_simple() {
        Ok(())
    } else {
        Err(BackendError::MultipleRoots)
    }
}

/// Coefficients of the polynomial of degree `< nodes.len()` taking `values`
/// at `nodes`, summed from the Lagrange basis.
fn interpolate(nodes: &[Complex64], values: &[Complex64]) -> Result<Polynomial, BackendError> {
    let n = nodes.len();
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let others: Vec<Complex64> = (0..n).filter(|&k| k != i).map(|k| nodes[k]).collect();
        let denom: Complex64 = others.iter().map(|&x| nodes[i] - x).product();
        let weight = values[i] / denom;
        if !weight.is_finite() {
            return Err(BackendError::IllConditionedInterpolation);
        }
        let basis = Polynomial::from_roots(weight, &others);
        for (slot, &c) in acc.iter_mut().zip(basis.coeffs()) {
            *slot += c;
        }
    }
    Ok(Polynomial::new(acc))
}

fn values_over(
    p: &Polynomial,
    other: &Polynomial,
    nodes: &[Complex64],
) -> Result<Vec<Complex64>, BackendError> {
    let floor = ZERO_THRESHOLD * other.coeff_norm().value();
    nodes
        .iter()
        .map(|&x| {
            let d = other.eval(x);
            if d.norm() <= floor {
                Err(BackendError::CommonRoot(d.norm()))
            } else {
                Ok(p.eval(x) / d)
            }
        })
        .collect()
}

/// `S` interpolates `P/B` at the roots of `A`; `R` interpolates `P/A` at
/// the roots of `B`.
pub fn solve_residue(
    a: &Polynomial,
    b: &Polynomial,
    ra: &RootSet,
    rb: &RootSet,
    p: &Polynomial,
) -> Result<BezoutSolution, BackendError> {
    check_rhs(a, b, p)?;
    check_simple(ra, rb)?;
    let s = interpolate(&ra.roots, &values_over(p, b, &ra.roots)?)?;
    let r = interpolate(&rb.roots, &values_over(p, a, &rb.roots)?)?;
    Ok(BezoutSolution::new(a, b, p, r, s, Backend::Residue))
}

/// Literal residue sums `s_j = sum_{k>j} a_k sum_i P(alpha_i) alpha_i^(k-j-1) / (A'(alpha_i) B(alpha_i))`.
/// Worse conditioned than [`solve_residue`]; kept as an independent check.
pub fn residue_sum_oracle(
    a: &Polynomial,
    b: &Polynomial,
    ra: &RootSet,
    rb: &RootSet,
    p: &Polynomial,
) -> Result<BezoutSolution, BackendError> {
    check_rhs(a, b, p)?;
    check_simple(ra, rb)?;
    let sums = |g: &Polynomial, other: &Polynomial, roots: &[Complex64]| {
        let n = g.degree();
        let dg = g.derivative();
        // moments[m] = sum_i P(x_i) x_i^m / (G'(x_i) other(x_i))
        let moments: Vec<Complex64> = (0..n)
            .map(|m| {
                roots
                    .iter()
                    .map(|&x| p.eval(x) * x.powi(m as i32) / (dg.eval(x) * other.eval(x)))
                    .sum()
            })
            .collect();
        Polynomial::new(
            (0..n)
                .map(|j| (j + 1..=n).map(|k| g.coeff(k) * moments[k - j - 1]).sum())
                .collect(),
        )
    };
    let s = sums(a, b, &ra.roots);
    let r = sums(b, a, &rb.roots);
    Ok(BezoutSolution::new(a, b, p, r, s, Backend::Residue))
}

fn verify_windings(
    name: &'static str,
    contour: &ContourSystem,
    inside: &[Complex64],
    outside: &[Complex64],
) -> Result<(), BackendError> {
    let cases = inside
        .iter()
        .map(|&z| (z, 1))
        .chain(outside.iter().map(|&z| (z, 0)));
    for (point, expected) in cases {
        let computed = contour.winding_number(point)?;
        if computed != expected {
            return Err(BackendError::BadContour {
                contour: name,
                point,
                expected,
                computed,
            });
        }
    }
    Ok(())
}

/// `(1/2 pi i) oint_gamma g(zeta, z) P(zeta) / (A(zeta) B(zeta)) dzeta`
/// coefficientwise in `z`, where `g` is the difference quotient of `base`.
pub fn kernel_integral(
    base: &Polynomial,
    a: &Polynomial,
    b: &Polynomial,
    p: &Polynomial,
    contour: &ContourSystem,
    cfg: &QuadratureConfig,
) -> Result<Polynomial, QuadratureNotConverged> {
    let kernel = DifferenceQuotient::new(base);
    let width = base.degree();
    let factor = Complex64::new(0.0, TAU).inv();
    let (coeffs, _) = contour_integral_vec(
        &contour.arcs,
        width,
        |zeta| {
            let w = p.eval(zeta) / (a.eval(zeta) * b.eval(zeta)) * factor;
            kernel
                .coefficients_in_z(zeta)
                .into_iter()
                .map(|c| c * w)
                .collect()
        },
        cfg,
    )?;
    Ok(Polynomial::new(coeffs))
}

/// `S` over `gamma1` (enclosing the roots of `A` only) and `R` over
/// `gamma2` (enclosing the roots of `B` only), both by Gauss-Legendre
/// quadrature with node doubling.
#[allow(clippy::too_many_arguments)]
pub fn solve_quadrature(
    a: &Polynomial,
    b: &Polynomial,
    ra: &RootSet,
    rb: &RootSet,
    gamma1: &ContourSystem,
    gamma2: &ContourSystem,
    p: &Polynomial,
    cfg: &QuadratureConfig,
) -> Result<BezoutSolution, BackendError> {
    check_rhs(a, b, p)?;
    verify_windings("gamma1", gamma1, &ra.roots, &rb.roots)?;
    verify_windings("gamma2", gamma2, &rb.roots, &ra.roots)?;
    let s = kernel_integral(a, a, b, p, gamma1, cfg)?;
    let r = kernel_integral(b, a, b, p, gamma2, cfg)?;
    Ok(BezoutSolution::new(a, b, p, r, s, Backend::Quadrature))
}

/// `(1/2 pi i) oint G'/G`, the number of zeros of `g` enclosed.
pub fn argument_principle(
    g: &Polynomial,
    contour: &ContourSystem,
    cfg: &QuadratureConfig,
) -> Result<Complex64, QuadratureNotConverged> {
    let dg = g.derivative();
    let factor = Complex64::new(0.0, TAU).inv();
    let (v, _) = contour_integral_vec(
        &contour.arcs,
        1,
        |z| vec![dg.eval(z) / g.eval(z) * factor],
        cfg,
    )?;
    Ok(v[0])
}
