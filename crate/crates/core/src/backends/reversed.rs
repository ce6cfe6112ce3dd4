use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{solve_quadrature, solve_residue, BackendError};
use crate::poly::Polynomial;
use crate::quadrature::QuadratureConfig;
use crate::regions::{build_region_with_retry, translation_point, RegionKind, RegionSpec};
use crate::roots::find_roots;
use crate::separation::ZERO_THRESHOLD;
use crate::solution::{Backend, BezoutSolution};
use crate::sylvester::{build, solve_rhs};

/// Backend used for the reversed pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inner {
    Sylvester,
    Residue,
    /// Quadrature over the inverted boundaries of `D_A ∩ E_A` and `D_B ∩ E_B`.
    Quadrature,
}

impl Inner {
    fn tag(self) -> Backend {
        match self {
            Inner::Sylvester => Backend::Sylvester,
            Inner::Residue => Backend::Residue,
            Inner::Quadrature => Backend::Quadrature,
        }
    }
}

fn has_zero_root(p: &Polynomial) -> bool {
    p.coeff(0).norm() <= ZERO_THRESHOLD * p.coeff_norm().value()
}

/// Solves `Ã R̃ + B̃ S̃ = z^(N+K-1)` for `Ã = z^N A(1/z)`, `B̃ = z^K B(1/z)`
/// and returns `R = z^(K-1) R̃(1/z)`, `S = z^(N-1) S̃(1/z)`, so that
/// `A R + B S = 1`.
pub fn solve_reversed(
    a: &Polynomial,
    b: &Polynomial,
    inner: Inner,
    cfg: &QuadratureConfig,
) -> Result<BezoutSolution, BackendError> {
    let (r, s) = reversed_parts(a, b, inner, cfg)?;
    Ok(BezoutSolution::new(
        a,
        b,
        &Polynomial::one(),
        r,
        s,
        Backend::Reversed {
            inner: Box::new(inner.tag()),
            shift: None,
        },
    ))
}

fn reversed_parts(
    a: &Polynomial,
    b: &Polynomial,
    inner: Inner,
    cfg: &QuadratureConfig,
) -> Result<(Polynomial, Polynomial), BackendError> {
    if has_zero_root(a) || has_zero_root(b) {
        return Err(BackendError::ZeroRoot);
    }
    let n = a.degree();
    let k = b.degree();
    let at = a.reverse(n).expect("window equals degree");
    let bt = b.reverse(k).expect("window equals degree");
    let rhs = Polynomial::monomial(n + k - 1);
    let sol = match inner {
        Inner::Sylvester => solve_rhs(&build(&at, &bt)?, &rhs)?,
        Inner::Residue => {
            let ra = find_roots(&at)?;
            let rb = find_roots(&bt)?;
            solve_residue(&at, &bt, &ra, &rb, &rhs)?
        }
        Inner::Quadrature => {
            let ra = find_roots(a)?;
            let rb = find_roots(b)?;
            let spec = RegionSpec::from_roots(RegionKind::DAEA.inverted(), &ra, &rb)?;
            let (gamma1, used) = build_region_with_retry(&spec)?;
            let (gamma2, _) =
                build_region_with_retry(&used.with_kind(RegionKind::DBEB.inverted()))?;
            let rat = find_roots(&at)?;
            let rbt = find_roots(&bt)?;
            solve_quadrature(&at, &bt, &rat, &rbt, &gamma1, &gamma2, &rhs, cfg)?
        }
    };
    let r = sol.r.reverse(k - 1).map_err(|_| BackendError::RhsDegree {
        got: sol.r.degree(),
        max: k - 1,
    })?;
    let s = sol.s.reverse(n - 1).map_err(|_| BackendError::RhsDegree {
        got: sol.s.degree(),
        max: n - 1,
    })?;
    Ok((r, s))
}

/// Translates by `shift` (`A(z + shift)`, `B(z + shift)`), solves the
/// reversed problem and maps back with `R(z) = R_t(z - shift)`.
pub fn solve_translated(
    a: &Polynomial,
    b: &Polynomial,
    shift: Complex64,
    inner: Inner,
    cfg: &QuadratureConfig,
) -> Result<BezoutSolution, BackendError> {
    let (rt, st) = reversed_parts(&a.translate(shift), &b.translate(shift), inner, cfg)?;
    Ok(BezoutSolution::new(
        a,
        b,
        &Polynomial::one(),
        rt.translate(-shift),
        st.translate(-shift),
        Backend::Reversed {
            inner: Box::new(inner.tag()),
            shift: Some(shift),
        },
    ))
}

/// Translate so that `D(0, 2 eps)` is free of roots, reverse, and integrate
/// over the inverted `D ∩ E` boundaries.
pub fn solve_main_pipeline(
    a: &Polynomial,
    b: &Polynomial,
    cfg: &QuadratureConfig,
) -> Result<BezoutSolution, BackendError> {
    let ra = find_roots(a)?;
    let rb = find_roots(b)?;
    let shift = translation_point(&ra.roots, &rb.roots);
    solve_translated(a, b, shift, Inner::Quadrature, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reversed_matches_direct() {
        let a = Polynomial::from_real(&[-0.5, 1.0]);
        let b = Polynomial::from_real(&[0.5, 1.0]);
        let direct = solve_rhs(&build(&a, &b).unwrap(), &Polynomial::one()).unwrap();
        let cfg = QuadratureConfig::default();
        for inner in [Inner::Sylvester, Inner::Residue, Inner::Quadrature] {
            let rev = solve_reversed(&a, &b, inner, &cfg).unwrap();
            assert!(
                rev.distance(&direct) < 1e-9,
                "{inner:?}: {}",
                rev.distance(&direct)
            );
        }
        let at = a.reverse(1).unwrap();
        assert_eq!(at.coeff_norm(), a.coeff_norm());
    }

    #[test]
    fn zero_root_needs_translation() {
        let a = Polynomial::from_real(&[0.0, 1.0]);
        let b = Polynomial::from_real(&[1.0, -1.0]);
        let cfg = QuadratureConfig::default();
        assert_eq!(
            solve_reversed(&a, &b, Inner::Sylvester, &cfg),
            Err(BackendError::ZeroRoot)
        );
        for inner in [Inner::Sylvester, Inner::Residue, Inner::Quadrature] {
            let sol = solve_translated(&a, &b, c(0.5, 0.0), inner, &cfg).unwrap();
            assert!(sol.r.distance(&Polynomial::one()) < 1e-12, "{inner:?}");
            assert!(sol.s.distance(&Polynomial::one()) < 1e-12);
        }
    }

    #[test]
    fn main_pipeline_on_cubic_quartic() {
        let alphas = [c(0.25, 0.125), c(-0.5, 0.0), c(0.4, 0.0)];
        let betas = [
            c(1.0 / 9.0, 5.0 / 6.0),
            c(0.125, 0.5),
            c(0.0, 1.0 / 3.0),
            c(0.0, 0.2),
        ];
        let a = Polynomial::from_roots(c(1.0, 0.0), &alphas);
        let b = Polynomial::from_roots(c(1.0, 0.0), &betas);
        let direct = solve_rhs(&build(&a, &b).unwrap(), &Polynomial::one()).unwrap();
        let sol = solve_main_pipeline(&a, &b, &QuadratureConfig::default()).unwrap();
        let scale = 1.0 + direct.r.coeff_norm().value();
        assert!(
            sol.distance(&direct) < 1e-8 * scale,
            "{}",
            sol.distance(&direct)
        );
    }
}
