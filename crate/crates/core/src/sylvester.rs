//! The Sylvester matrix of a pair and the linear-algebra route to the
//! Bézout equation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{CMatrix, LinalgError, Lu};
use crate::poly::Polynomial;
use crate::roots::RootSet;
use crate::solution::{Backend, BezoutSolution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SylvesterError {
    #[error("both polynomials must have degree at least one")]
    ConstantPolynomial,
    #[error("right-hand side has degree {got}, at most {max} allowed")]
    RhsDegree { got: usize, max: usize },
    #[error("Sylvester matrix is singular (common root): {0}")]
    SingularSystem(LinalgError),
}

/// `(N+K) x (N+K)`: column `c < K` holds `a_0..a_N` at rows `c..c+N`,
/// column `K + c` holds `b_0..b_K` at rows `c..c+K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SylvesterMatrix {
    pub entries: CMatrix,
    pub n: usize,
    pub k: usize,
    pub a: Polynomial,
    pub b: Polynomial,
}

pub fn build(a: &Polynomial, b: &Polynomial) -> Result<SylvesterMatrix, SylvesterError> {
    let n = a.degree();
    let k = b.degree();
    if n == 0 || k == 0 {
        return Err(SylvesterError::ConstantPolynomial);
    }
    let size = n + k;
    let mut m = CMatrix::zeros(size, size);
    for c in 0..k {
        for (i, &ai) in a.coeffs().iter().enumerate() {
            m[(c + i, c)] = ai;
        }
    }
    for c in 0..n {
        for (i, &bi) in b.coeffs().iter().enumerate() {
            m[(c + i, k + c)] = bi;
        }
    }
    Ok(SylvesterMatrix {
        entries: m,
        n,
        k,
        a: a.clone(),
        b: b.clone(),
    })
}

impl SylvesterMatrix {
    pub fn size(&self) -> usize {
        self.n + self.k
    }

    pub fn factor(&self) -> Result<Lu, SylvesterError> {
        self.entries.lu().map_err(SylvesterError::SingularSystem)
    }

    /// Splits an unknown vector into `(R, S)`.
    pub fn unpack(&self, x: &[Complex64]) -> (Polynomial, Polynomial) {
        (
            Polynomial::new(x[..self.k].to_vec()),
            Polynomial::new(x[self.k..].to_vec()),
        )
    }

    fn rhs_vector(&self, p: &Polynomial) -> Result<Vec<Complex64>, SylvesterError> {
        let max = self.size() - 1;
        if !p.is_zero() && p.degree() > max {
            return Err(SylvesterError::RhsDegree {
                got: p.degree(),
                max,
            });
        }
        Ok((0..self.size()).map(|i| p.coeff(i)).collect())
    }

    /// Solve with an existing factorization, refining once when the
    /// backward error is above roundoff level.
    pub fn solve_factored(
        &self,
        lu: &Lu,
        p: &Polynomial,
    ) -> Result<BezoutSolution, SylvesterError> {
        let rhs = self.rhs_vector(p)?;
        let mut x = lu.solve(&rhs).map_err(SylvesterError::SingularSystem)?;
        let resid: Vec<Complex64> = self
            .entries
            .mul_vec(&x)
            .iter()
            .zip(&rhs)
            .map(|(mx, r)| r - mx)
            .collect();
        let resid_norm = resid.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let x_norm = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let roundoff =
            4.0 * f64::EPSILON * self.size() as f64 * self.entries.max_entry_norm() * x_norm;
        if resid_norm > roundoff {
            let dx = lu.solve(&resid).map_err(SylvesterError::SingularSystem)?;
            for (xi, di) in x.iter_mut().zip(dx) {
                *xi += di;
            }
        }
        let (r, s) = self.unpack(&x);
        Ok(BezoutSolution::new(
            &self.a,
            &self.b,
            p,
            r,
            s,
            Backend::Sylvester,
        ))
    }
}

pub fn solve_rhs(m: &SylvesterMatrix, p: &Polynomial) -> Result<BezoutSolution, SylvesterError> {
    m.solve_factored(&m.factor()?, p)
}

/// Solutions for `P = z^l`, `l = 0..N+K-1`, from one factorization. Their
/// stacked unknown vectors are the columns of the inverse matrix.
pub fn solve_monomial_all(m: &SylvesterMatrix) -> Result<Vec<BezoutSolution>, SylvesterError> {
    let lu = m.factor()?;
    (0..m.size())
        .map(|l| m.solve_factored(&lu, &Polynomial::monomial(l)))
        .collect()
}

/// Assembles the solutions of [`solve_monomial_all`] column by column.
pub fn assemble_inverse(m: &SylvesterMatrix, solutions: &[BezoutSolution]) -> CMatrix {
    let size = m.size();
    let mut inv = CMatrix::zeros(size, size);
    for (l, sol) in solutions.iter().enumerate() {
        for (i, v) in sol.stacked(m.n, m.k).into_iter().enumerate() {
            inv[(i, l)] = v;
        }
    }
    inv
}

/// `|det|` three ways: the determinant, `|b_K|^N prod |A(beta_j)|` and
/// `|a_N|^K prod |B(alpha_i)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resultant {
    pub determinant: Complex64,
    pub via_roots_of_b: f64,
    pub via_roots_of_a: f64,
    pub max_relative_gap: f64,
}

impl Resultant {
    pub fn agrees(&self, rel_tol: f64) -> bool {
        self.max_relative_gap <= rel_tol
    }
}

pub fn resultant(
    a: &Polynomial,
    b: &Polynomial,
    roots_a: &RootSet,
    roots_b: &RootSet,
) -> Result<Resultant, SylvesterError> {
    let m = build(a, b)?;
    let determinant = match m.entries.lu() {
        Ok(lu) => lu.determinant(),
        Err(_) => Complex64::new(0.0, 0.0),
    };
    let n = a.degree() as i32;
    let k = b.degree() as i32;
    let via_roots_of_b = b.leading().norm().powi(n)
        * roots_b
            .roots
            .iter()
            .map(|&r| a.eval(r).norm())
            .product::<f64>();
    let via_roots_of_a = a.leading().norm().powi(k)
        * roots_a
            .roots
            .iter()
            .map(|&r| b.eval(r).norm())
            .product::<f64>();
    let values = [determinant.norm(), via_roots_of_b, via_roots_of_a];
    let top = values.iter().copied().fold(0.0, f64::max);
    let low = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max_relative_gap = if top == 0.0 { 0.0 } else { (top - low) / top };
    Ok(Resultant {
        determinant,
        via_roots_of_b,
        via_roots_of_a,
        max_relative_gap,
    })
}

/// `||S^-1||` against `C3 M^(N+K+max(N,K)-1) / delta^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseNormReport {
    /// Largest entry modulus of the inverse.
    pub max_entry_norm: f64,
    pub one_norm: f64,
    pub inf_norm: f64,
    /// `max(||A|| / |a_N|, ||B|| / |b_K|)`
    pub m: f64,
    pub exponent: i32,
    pub c3: f64,
    pub c3_label: String,
    /// Both coefficient norms are at most one.
    pub normalized: bool,
    /// The bound, times `max(||A||, ||B||)` when the pair is not normalized.
    pub bound: f64,
    /// `max_entry_norm * delta^2 / (M^exponent * max(1, ||A||, ||B||))`,
    /// the quantity the constant has to dominate.
    pub ratio: f64,
    pub within_bound: bool,
}

/// Aggregate of the proof chain: the contour length, the root bound `2M`
/// and the `3^(N+K)` floors, maximised over the monomial index. Not a sharp
/// constant.
pub fn default_c3(n: usize, k: usize) -> f64 {
    let top = (n + k + n.max(k) - 1) as i32;
    let lengths = (n as f64).powi(k as i32).max((k as f64).powi(n as i32));
    n.max(k) as f64
        * (5.0f64 / 3.0).powi(top + 1)
        * lengths
        * 3f64.powi((n + k) as i32)
        * 2f64.powi(top)
}

pub fn inverse_norm_report(
    a: &Polynomial,
    b: &Polynomial,
    delta: f64,
    c3: Option<f64>,
) -> Result<InverseNormReport, SylvesterError> {
    let m = build(a, b)?;
    let inv = assemble_inverse(&m, &solve_monomial_all(&m)?);
    let norm_a = a.coeff_norm().value();
    let norm_b = b.coeff_norm().value();
    let big_m = (norm_a / a.leading().norm()).max(norm_b / b.leading().norm());
    let exponent = (m.n + m.k + m.n.max(m.k) - 1) as i32;
    let (c3, c3_label) = match c3 {
        Some(v) => (v, "user supplied".to_string()),
        None => (
            default_c3(m.n, m.k),
            "proof-chain aggregate (empirical scale, not a sharp constant)".to_string(),
        ),
    };
    let normalized = norm_a <= 1.0 && norm_b <= 1.0;
    let norm_factor = if normalized { 1.0 } else { norm_a.max(norm_b) };
    let scale = big_m.powi(exponent) * norm_factor;
    let max_entry_norm = inv.max_entry_norm();
    let bound = c3 * scale / (delta * delta);
    Ok(InverseNormReport {
        max_entry_norm,
        one_norm: inv.one_norm(),
        inf_norm: inv.inf_norm(),
        m: big_m,
        exponent,
        c3,
        c3_label,
        normalized,
        bound,
        ratio: max_entry_norm * delta * delta / scale,
        within_bound: max_entry_norm <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::find_roots;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
        m.to_rows()
    }

    #[test]
    fn linear_pair_layout_and_inverse() {
        for a in [1.0, 0.5, 0.25, 1.0 / 1024.0] {
            let pa = Polynomial::from_real(&[0.0, a]);
            let pb = Polynomial::from_real(&[1.0, a]);
            let m = build(&pa, &pb).unwrap();
            assert_eq!(
                rows(&m.entries),
                vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(a, 0.0), c(a, 0.0)]]
            );
            let inv = assemble_inverse(&m, &solve_monomial_all(&m).unwrap());
            let expected = [[-1.0, 1.0 / a], [1.0, 0.0]];
            for i in 0..2 {
                for j in 0..2 {
                    assert!((inv[(i, j)] - c(expected[i][j], 0.0)).norm() <= 1e-12 / a);
                }
            }
            let report = inverse_norm_report(&pa, &pb, 1.0, None).unwrap();
            assert!((report.max_entry_norm - 1.0 / a).abs() <= 1e-12 / a);
            // M = 1/a and the exponent is 2, so the ratio is a
            assert!((report.ratio - a).abs() <= 1e-12);
        }
    }

    #[test]
    fn linear_pair() {
        let a = Polynomial::from_real(&[0.0, 1.0]);
        let b = Polynomial::from_real(&[1.0, -1.0]);
        let m = build(&a, &b).unwrap();
        assert_eq!(
            rows(&m.entries),
            vec![
                vec![c(0.0, 0.0), c(1.0, 0.0)],
                vec![c(1.0, 0.0), c(-1.0, 0.0)]
            ]
        );
        let sol = solve_rhs(&m, &Polynomial::one()).unwrap();
        assert_eq!(sol.r, Polynomial::one());
        assert_eq!(sol.s, Polynomial::one());
        assert_eq!(sol.residual, 0.0);
        let ra = find_roots(&a).unwrap();
        let rb = find_roots(&b).unwrap();
        let res = resultant(&a, &b, &ra, &rb).unwrap();
        assert!((res.determinant - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(res.agrees(1e-12));
    }

    #[test]
    fn sharpness_pair_n2() {
        let a_param: f64 = 0.5;
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let pa = Polynomial::monomial(2);
        let pb = Polynomial::from_roots(c(1.0, 0.0), &[w * a_param, w * w * a_param]);
        let sol = solve_rhs(&build(&pa, &pb).unwrap(), &Polynomial::one()).unwrap();
        let expected_r = Polynomial::new(vec![c(0.0, 0.0), c(8.0, 0.0)]);
        let expected_s = Polynomial::from_roots(c(-8.0, 0.0), &[w.powi(3) * a_param]);
        assert!(sol.r.distance(&expected_r) < 1e-12);
        assert!(sol.s.distance(&expected_s) < 1e-12);
        assert!((sol.r.coeff_norm().value() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn common_root_is_singular() {
        let z = Polynomial::monomial(1);
        let m = build(&z, &z).unwrap();
        assert!(matches!(
            solve_rhs(&m, &Polynomial::one()),
            Err(SylvesterError::SingularSystem(_))
        ));
        assert_eq!(
            build(&Polynomial::one(), &z),
            Err(SylvesterError::ConstantPolynomial)
        );
    }

    #[test]
    fn rhs_degree_checked() {
        let z = Polynomial::monomial(1);
        let b = Polynomial::from_real(&[1.0, -1.0]);
        let m = build(&z, &b).unwrap();
        assert!(matches!(
            solve_rhs(&m, &Polynomial::monomial(2)),
            Err(SylvesterError::RhsDegree { got: 2, max: 1 })
        ));
    }

    fn arb_poly(min_deg: usize, max_deg: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), min_deg + 1..=max_deg + 1)
            .prop_map(|v| Polynomial::new(v.into_iter().map(|(r, i)| c(r, i)).collect()))
            .prop_filter("leading coefficient bounded away from zero", |p| {
                p.degree() >= 1 && p.leading().norm() > 0.05
            })
    }

    proptest! {
        #[test]
        fn matrix_vector_product_is_polynomial_arithmetic(
            a in arb_poly(1, 6), b in arb_poly(1, 6),
            xs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
        ) {
            let m = build(&a, &b).unwrap();
            let x: Vec<Complex64> = xs.iter().take(m.size()).map(|&(r, i)| c(r, i)).collect();
            prop_assume!(x.len() == m.size());
            let (r, s) = m.unpack(&x);
            let direct = &a * &r + &b * &s;
            let product = m.entries.mul_vec(&x);
            for (i, v) in product.iter().enumerate() {
                prop_assert!((v - direct.coeff(i)).norm() < 1e-13);
            }
        }

        #[test]
        fn solution_degrees_and_residual(a in arb_poly(1, 6), b in arb_poly(1, 6)) {
            let ra = find_roots(&a).unwrap();
            let rb = find_roots(&b).unwrap();
            let (delta, _) = crate::separation::delta_value(&a, &b, &ra, &rb);
            prop_assume!(delta >= 1e-3);
            let m = build(&a, &b).unwrap();
            let sols = solve_monomial_all(&m).unwrap();
            let inv_norm = assemble_inverse(&m, &sols).max_entry_norm();
            for (l, sol) in sols.iter().enumerate() {
                prop_assert!(sol.r.degree() < b.degree() || sol.r.is_zero());
                prop_assert!(sol.s.degree() < a.degree() || sol.s.is_zero());
                prop_assert!(sol.residual <= 1e-10 * (1.0 + inv_norm), "l={} residual={}", l, sol.residual);
            }
            let inv = assemble_inverse(&m, &sols);
            let id = m.entries.mul(&inv);
            let eye = CMatrix::identity(m.size());
            for i in 0..m.size() {
                for j in 0..m.size() {
                    prop_assert!((id[(i, j)] - eye[(i, j)]).norm() <= 1e-10 * (1.0 + inv_norm));
                }
            }
            let res = resultant(&a, &b, &ra, &rb).unwrap();
            prop_assert!(res.agrees(1e-6), "gap {}", res.max_relative_gap);
        }

        #[test]
        fn resultant_is_homogeneous(a in arb_poly(1, 4), b in arb_poly(1, 4), scale in 0.3f64..3.0) {
            let ra = find_roots(&a).unwrap();
            let rb = find_roots(&b).unwrap();
            let sc = c(scale, 0.0);
            let base = resultant(&a, &b, &ra, &rb).unwrap();
            let scaled = resultant(&a.scale(sc), &b.scale(sc), &ra, &rb).unwrap();
            let expected = base.determinant.norm() * scale.powi((a.degree() + b.degree()) as i32);
            prop_assert!((scaled.determinant.norm() - expected).abs() <= 1e-9 * expected.max(1e-300));
        }
    }
}
