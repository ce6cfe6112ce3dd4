//! Dense complex polynomials in the monomial basis.
//!
//! Coefficient `k` multiplies `z^k`. The degree is the index of the last
//! nonzero stored coefficient; tiny trailing coefficients are only removed by
//! an explicit call to [`Polynomial::normalize`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Relative threshold used by [`Polynomial::normalize`] when no explicit one is given.
pub const TRIM_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("reversal window {target} is smaller than the degree {degree}")]
    ReverseWindow { target: usize, degree: usize },
    #[error("a polynomial needs at least one coefficient")]
    Empty,
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
}

/// Maximum modulus of the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CoeffNorm(pub f64);

impl CoeffNorm {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for CoeffNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
    degree: usize,
}

fn last_nonzero(coeffs: &[Complex64]) -> usize {
    coeffs
        .iter()
        .rposition(|c| *c != Complex64::new(0.0, 0.0))
        .unwrap_or(0)
}

impl Polynomial {
    /// Builds a polynomial from coefficients in increasing powers. An empty
    /// vector is treated as the zero polynomial.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        let degree = last_nonzero(&coeffs);
        Self { coeffs, degree }
    }

    /// Checked constructor for untrusted input (files, CLI).
    pub fn try_new(coeffs: Vec<Complex64>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::Empty);
        }
        if let Some(index) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(PolyError::NonFinite { index });
        }
        Ok(Self::new(coeffs))
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0)])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self::new(coeffs)
    }

    /// `leading * prod (z - r)`.
    pub fn from_roots(leading: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![leading];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    /// Stored coefficients up to and including the degree.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs[..=self.degree]
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        if k <= self.degree {
            self.coeffs[k]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree]
    }

    pub fn is_zero(&self) -> bool {
        self.degree == 0 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree == 0
    }

    pub fn coeff_norm(&self) -> CoeffNorm {
        CoeffNorm(self.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs().iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.degree == 0 {
            return Self::zero();
        }
        Self::new(
            self.coeffs()
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Drops trailing coefficients whose modulus is below `rel_tol * ||p||`.
    pub fn normalize(&self, rel_tol: f64) -> Self {
        let cutoff = rel_tol * self.coeff_norm().0;
        let mut coeffs = self.coeffs().to_vec();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// `z^target * p(1/z)`: the coefficients reversed inside a window of
    /// length `target + 1`.
    pub fn reverse(&self, target: usize) -> Result<Self, PolyError> {
        if target < self.degree {
            return Err(PolyError::ReverseWindow {
                target,
                degree: self.degree,
            });
        }
        Ok(Self::new(
            (0..=target).map(|k| self.coeff(target - k)).collect(),
        ))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs().iter().map(|&a| a * c).collect())
    }

    /// `p(z + shift)` by binomial expansion.
    pub fn translate(&self, shift: Complex64) -> Self {
        let n = self.degree;
        let c = self.coeffs();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        // powers[j] = shift^j
        let mut powers = vec![Complex64::new(1.0, 0.0); n + 1];
        for j in 1..=n {
            powers[j] = powers[j - 1] * shift;
        }
        for (k, &ck) in c.iter().enumerate() {
            let mut binom = 1.0;
            for m in (0..=k).rev() {
                // binom = C(k, m), walking m downward from k
                out[m] += ck * binom * powers[k - m];
                binom = binom * m as f64 / (k - m + 1) as f64;
            }
        }
        Self::new(out)
    }

    /// `||self - other||`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).coeff_norm().0
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs() == other.coeffs()
    }
}

impl Default for Polynomial {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.degree.max(rhs.degree) + 1;
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.degree.max(rhs.degree) + 1;
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![Complex64::new(0.0, 0.0); self.degree + rhs.degree + 1];
        for (i, &a) in self.coeffs().iter().enumerate() {
            for (j, &b) in rhs.coeffs().iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) && !(self.is_zero() && k == 0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Wire format: `{"coeffs": [[re, im], ...]}`, index = power.
#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            coeffs: self.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        Polynomial::try_new(
            raw.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}
