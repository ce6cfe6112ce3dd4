use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;

/// Which route produced a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Sylvester,
    Residue,
    Quadrature,
    /// Solved for the reversed pair, optionally after translating by `shift`.
    Reversed {
        inner: Box<Backend>,
        shift: Option<Complex64>,
    },
}

impl Backend {
    pub fn label(&self) -> String {
        match self {
            Backend::Sylvester => "sylvester".into(),
            Backend::Residue => "residue".into(),
            Backend::Quadrature => "quadrature".into(),
            Backend::Reversed { inner, shift: None } => format!("reversed({})", inner.label()),
            Backend::Reversed {
                inner,
                shift: Some(z),
            } => format!("reversed({}, shift={z})", inner.label()),
        }
    }
}

/// `A R + B S = P` with `deg R <= K - 1` and `deg S <= N - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BezoutSolution {
    pub r: Polynomial,
    pub s: Polynomial,
    /// `||A R + B S - P||`
    pub residual: f64,
    pub backend: Backend,
}

impl BezoutSolution {
    pub fn new(
        a: &Polynomial,
        b: &Polynomial,
        p: &Polynomial,
        r: Polynomial,
        s: Polynomial,
        backend: Backend,
    ) -> Self {
        let residual = (&(a * &r + b * &s) - p).coeff_norm().value();
        Self {
            r,
            s,
            residual,
            backend,
        }
    }

    /// The unknown vector `[r_0..r_{K-1}, s_0..s_{N-1}]`.
    pub fn stacked(&self, n: usize, k: usize) -> Vec<Complex64> {
        (0..k)
            .map(|i| self.r.coeff(i))
            .chain((0..n).map(|i| self.s.coeff(i)))
            .collect()
    }

    /// Largest coefficientwise difference to another solution.
    pub fn distance(&self, other: &BezoutSolution) -> f64 {
        self.r.distance(&other.r).max(self.s.distance(&other.s))
    }
}
