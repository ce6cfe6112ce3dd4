//! The root-neighbourhood regions `E_A`, `E_B`, `D_A` and their boundaries as
//! oriented systems of circular arcs.

mod contour;
mod geometry;
mod metrics;
mod svg;

pub use contour::{
    build_region, build_region_with_retry, invert_contour, ContourSystem, WindingProbe,
};
pub use geometry::{circle_meet, wrap_positive, wrap_signed, Arc, CircleMeet, Disk};
pub use metrics::{contour_metrics, translation_point, ContourMetrics};
pub use svg::{emit_svg, SvgScene};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::RootSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("circles {0} and {1} are tangent; jitter the roots and retry")]
    DegenerateArrangement(usize, usize),
    #[error("roots must be simple to build a region")]
    MultipleRoots,
    #[error("root at the origin: the D-disks are empty")]
    RootAtOrigin,
    #[error("boundary arcs do not close into loops")]
    OpenChain,
    #[error("point lies on the contour (distance {0:e})")]
    OnContour(f64),
    #[error("contour passes within {0:e} of the origin")]
    OriginTooClose(f64),
    #[error("region contains the origin, so its inversion is unbounded")]
    UnboundedInversion,
    #[error("winding number {computed} at {point} where {expected} was required")]
    OrientationMismatch {
        point: Complex64,
        expected: i64,
        computed: i64,
    },
    #[error("empty region")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionKind {
    /// `cap_j cup_i D(alpha_i, |beta_j - alpha_i| / 3)`
    EA,
    /// `cap_i cup_j D(beta_j, |alpha_i - beta_j| / 3)`
    EB,
    /// `cup_i D(alpha_i, 3|alpha_i| / 4)`
    DA,
    DB,
    /// `D_A cap E_A`, whose boundary is `Gamma_1`
    DAEA,
    DBEB,
    /// Image of the base region under `z -> 1/z`
    Inverted(Box<RegionKind>),
}

impl RegionKind {
    pub fn inverted(self) -> Self {
        RegionKind::Inverted(Box::new(self))
    }

    pub fn name(&self) -> String {
        match self {
            RegionKind::EA => "E_A".into(),
            RegionKind::EB => "E_B".into(),
            RegionKind::DA => "D_A".into(),
            RegionKind::DB => "D_B".into(),
            RegionKind::DAEA => "D_A∩E_A".into(),
            RegionKind::DBEB => "D_B∩E_B".into(),
            RegionKind::Inverted(base) => format!("1/({})", base.name()),
        }
    }
}

/// A region together with the roots it is built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub kind: RegionKind,
    pub alphas: Vec<Complex64>,
    pub betas: Vec<Complex64>,
}

impl RegionSpec {
    pub fn new(kind: RegionKind, alphas: Vec<Complex64>, betas: Vec<Complex64>) -> Self {
        Self {
            kind,
            alphas,
            betas,
        }
    }

    /// Refuses root sets with suspected multiple roots.
    pub fn from_roots(kind: RegionKind, ra: &RootSet, rb: &RootSet) -> Result<Self, RegionError> {
        if !ra.all_simple() || !rb.all_simple() {
            return Err(RegionError::MultipleRoots);
        }
        Ok(Self::new(kind, ra.roots.clone(), rb.roots.clone()))
    }

    pub fn with_kind(&self, kind: RegionKind) -> Self {
        Self {
            kind,
            ..self.clone()
        }
    }

    /// `1 + max |root|`; all geometric tolerances are relative to this.
    pub fn scale(&self) -> f64 {
        1.0 + self
            .alphas
            .iter()
            .chain(&self.betas)
            .map(|r| r.norm())
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        membership(&self.kind, &self.alphas, &self.betas, z)
    }

    /// Circles whose arcs can bound the region (not deduplicated).
    pub(crate) fn circles(&self) -> Vec<Disk> {
        circles_for(&self.kind, &self.alphas, &self.betas)
    }

    /// Points with prescribed winding numbers: `(point, expected)`.
    pub(crate) fn probes(&self) -> Vec<(Complex64, i64)> {
        probes_for(&self.kind, &self.alphas, &self.betas)
    }
}

fn e_member(inner: &[Complex64], outer: &[Complex64], z: Complex64) -> bool {
    outer
        .iter()
        .all(|&b| inner.iter().any(|&a| 3.0 * (z - a).norm() < (b - a).norm()))
}

fn d_member(roots: &[Complex64], z: Complex64) -> bool {
    roots.iter().any(|&a| 4.0 * (z - a).norm() < 3.0 * a.norm())
}

fn membership(kind: &RegionKind, alphas: &[Complex64], betas: &[Complex64], z: Complex64) -> bool {
    match kind {
        RegionKind::EA => e_member(alphas, betas, z),
        RegionKind::EB => e_member(betas, alphas, z),
        RegionKind::DA => d_member(alphas, z),
        RegionKind::DB => d_member(betas, z),
        RegionKind::DAEA => d_member(alphas, z) && e_member(alphas, betas, z),
        RegionKind::DBEB => d_member(betas, z) && e_member(betas, alphas, z),
        RegionKind::Inverted(base) => {
            z != Complex64::new(0.0, 0.0) && membership(base, alphas, betas, z.inv())
        }
    }
}

fn e_circles(inner: &[Complex64], outer: &[Complex64]) -> Vec<Disk> {
    let mut out = Vec::new();
    for &a in inner {
        for &b in outer {
            out.push(Disk::new(a, (b - a).norm() / 3.0));
        }
    }
    out
}

fn d_circles(roots: &[Complex64]) -> Vec<Disk> {
    roots
        .iter()
        .map(|&a| Disk::new(a, 0.75 * a.norm()))
        .collect()
}

fn circles_for(kind: &RegionKind, alphas: &[Complex64], betas: &[Complex64]) -> Vec<Disk> {
    match kind {
        RegionKind::EA => e_circles(alphas, betas),
        RegionKind::EB => e_circles(betas, alphas),
        RegionKind::DA => d_circles(alphas),
        RegionKind::DB => d_circles(betas),
        RegionKind::DAEA => {
            let mut v = d_circles(alphas);
            v.extend(e_circles(alphas, betas));
            v
        }
        RegionKind::DBEB => {
            let mut v = d_circles(betas);
            v.extend(e_circles(betas, alphas));
            v
        }
        RegionKind::Inverted(_) => Vec::new(),
    }
}

fn probes_for(
    kind: &RegionKind,
    alphas: &[Complex64],
    betas: &[Complex64],
) -> Vec<(Complex64, i64)> {
    let zero = Complex64::new(0.0, 0.0);
    let tag = |pts: &[Complex64], w: i64| pts.iter().map(move |&p| (p, w)).collect::<Vec<_>>();
    match kind {
        RegionKind::EA => [tag(alphas, 1), tag(betas, 0)].concat(),
        RegionKind::EB => [tag(betas, 1), tag(alphas, 0)].concat(),
        RegionKind::DA => [tag(alphas, 1), vec![(zero, 0)]].concat(),
        RegionKind::DB => [tag(betas, 1), vec![(zero, 0)]].concat(),
        RegionKind::DAEA => [tag(alphas, 1), tag(betas, 0), vec![(zero, 0)]].concat(),
        RegionKind::DBEB => [tag(betas, 1), tag(alphas, 0), vec![(zero, 0)]].concat(),
        RegionKind::Inverted(base) => probes_for(base, alphas, betas)
            .into_iter()
            .filter(|(p, _)| *p != zero)
            .map(|(p, w)| (p.inv(), w))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_sit_where_expected() {
        let alphas = vec![c(0.25, 0.125), c(-0.5, 0.0), c(0.4, 0.0)];
        let betas = vec![
            c(1.0 / 9.0, 5.0 / 6.0),
            c(0.125, 0.5),
            c(0.0, 1.0 / 3.0),
            c(0.0, 0.2),
        ];
        let ea = RegionSpec::new(RegionKind::EA, alphas.clone(), betas.clone());
        let eb = ea.with_kind(RegionKind::EB);
        for &a in &alphas {
            assert!(ea.contains(a) && !eb.contains(a));
        }
        for &b in &betas {
            assert!(eb.contains(b) && !ea.contains(b));
        }
        let inv = ea.with_kind(RegionKind::EA.inverted());
        assert!(inv.contains(alphas[0].inv()));
        assert!(!inv.contains(c(0.0, 0.0)));
    }

    #[test]
    fn d_disks_avoid_origin() {
        let spec = RegionSpec::new(RegionKind::DA, vec![c(1.0, 1.0), c(-0.01, 0.0)], vec![]);
        assert!(!spec.contains(c(0.0, 0.0)));
        assert!(spec.contains(c(1.0, 1.0)));
        assert!(spec.contains(c(-0.01, 0.0)));
    }
}
