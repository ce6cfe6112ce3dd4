use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::{circle_meet, wrap_positive, Arc, CircleMeet, Disk};
use super::{RegionError, RegionKind, RegionSpec};

/// Tangency and duplicate-circle threshold, relative to the region scale.
const MEET_TOL: f64 = 1e-12;
/// Arc endpoints closer than this (relative) are joined.
const LINK_TOL: f64 = 1e-9;
/// Points closer than this (relative) to an arc count as on the contour.
const ON_CONTOUR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingProbe {
    pub point: Complex64,
    pub expected: i64,
    pub computed: i64,
}

/// Oriented boundary of a region: arcs stored loop by loop, each loop
/// closed and traversed with the region on its left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourSystem {
    pub kind: RegionKind,
    pub arcs: Vec<Arc>,
    /// Loop index of each arc.
    pub loop_of: Vec<usize>,
    pub loop_count: usize,
    pub total_length: f64,
    pub orientation_certificate: Vec<WindingProbe>,
    /// Some loop lies inside another (a region with holes).
    pub nested: bool,
    pub scale: f64,
}

impl ContourSystem {
    fn assemble(
        kind: RegionKind,
        loops: Vec<Vec<Arc>>,
        probes: Vec<(Complex64, i64)>,
        scale: f64,
    ) -> Result<Self, RegionError> {
        if loops.is_empty() {
            return Err(RegionError::Empty);
        }
        let mut arcs = Vec::new();
        let mut loop_of = Vec::new();
        for (k, l) in loops.iter().enumerate() {
            for arc in l {
                arcs.push(*arc);
                loop_of.push(k);
            }
        }
        let total_length = arcs.iter().map(Arc::length).sum();
        let mut sys = ContourSystem {
            kind,
            arcs,
            loop_of,
            loop_count: loops.len(),
            total_length,
            orientation_certificate: Vec::new(),
            nested: false,
            scale,
        };
        for turning in sys.loop_turning() {
            if ((turning.abs() - TAU) / TAU).abs() > 1e-6 {
                return Err(RegionError::OpenChain);
            }
        }
        for (point, expected) in probes {
            let computed = sys.winding_number(point)?;
            if computed != expected {
                return Err(RegionError::OrientationMismatch {
                    point,
                    expected,
                    computed,
                });
            }
            sys.orientation_certificate.push(WindingProbe {
                point,
                expected,
                computed,
            });
        }
        sys.nested = sys.detect_nesting();
        Ok(sys)
    }

    pub fn loops(&self) -> Vec<&[Arc]> {
        let mut out = Vec::with_capacity(self.loop_count);
        let mut start = 0;
        for k in 0..self.loop_count {
            let end = start
                + self.loop_of[start..]
                    .iter()
                    .take_while(|&&l| l == k)
                    .count();
            out.push(&self.arcs[start..end]);
            start = end;
        }
        out
    }

    pub fn loop_lengths(&self) -> Vec<f64> {
        self.loops()
            .iter()
            .map(|l| l.iter().map(Arc::length).sum())
            .collect()
    }

    /// Total tangent turning per loop: `+2pi` for outer boundaries, `-2pi`
    /// for hole boundaries.
    pub fn loop_turning(&self) -> Vec<f64> {
        self.loops()
            .iter()
            .map(|l| {
                let sweeps: f64 = l.iter().map(Arc::sweep).sum();
                let corners: f64 = (0..l.len())
                    .map(|k| {
                        let next = &l[(k + 1) % l.len()];
                        (next.tangent(0.0) / l[k].tangent(1.0)).arg()
                    })
                    .sum();
                sweeps + corners
            })
            .collect()
    }

    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.arcs
            .iter()
            .map(|a| a.distance_to(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the contour with respect to `z`, computed exactly arc by arc.
    pub fn winding_number(&self, z: Complex64) -> Result<i64, RegionError> {
        let d = self.distance_to(z);
        if d <= ON_CONTOUR_TOL * self.scale {
            return Err(RegionError::OnContour(d));
        }
        Ok(winding_of(&self.arcs, z))
    }

    /// Area enclosed, counted with orientation (Green's theorem, exact on arcs).
    pub fn signed_area(&self) -> f64 {
        self.arcs
            .iter()
            .map(|a| {
                let r = a.circle.radius;
                let c = a.circle.center;
                let e0 = Complex64::from_polar(1.0, a.start_angle);
                let e1 = Complex64::from_polar(1.0, a.end_angle);
                let chord = (c.conj() * (e1 - e0) / Complex64::i()).re;
                0.5 * (r * r * a.sweep() + r * chord)
            })
            .sum()
    }

    /// `per_arc` evenly spaced points on every arc, endpoints included.
    pub fn sample_points(&self, per_arc: usize) -> Vec<Complex64> {
        let per_arc = per_arc.max(2);
        self.arcs
            .iter()
            .flat_map(|a| (0..per_arc).map(move |k| a.point(k as f64 / (per_arc - 1) as f64)))
            .collect()
    }

    fn detect_nesting(&self) -> bool {
        let loops = self.loops();
        for (i, li) in loops.iter().enumerate() {
            let p = li[0].point(0.5);
            for (j, lj) in loops.iter().enumerate() {
                if i != j && winding_of(lj, p) != 0 {
                    return true;
                }
            }
        }
        false
    }
}

fn winding_of(arcs: &[Arc], z: Complex64) -> i64 {
    let total: f64 = arcs.iter().map(|a| a.angle_change(z)).sum();
    (total / TAU).round() as i64
}

fn dedupe_circles(circles: Vec<Disk>, tol: f64) -> Vec<Disk> {
    let mut out: Vec<Disk> = Vec::with_capacity(circles.len());
    for c in circles {
        let dup = out
            .iter()
            .any(|d| (d.center - c.center).norm() <= tol && (d.radius - c.radius).abs() <= tol);
        if !dup {
            out.push(c);
        }
    }
    out
}

/// Splits every circle at its crossings with the others and keeps the
/// pieces that separate the region from its complement, oriented with the
/// region on the left.
fn boundary_arcs<F>(circles: &[Disk], member: F, scale: f64) -> Result<Vec<Arc>, RegionError>
where
    F: Fn(Complex64) -> bool,
{
    let tol = MEET_TOL * scale;
    let mut arcs = Vec::new();
    for (i, ci) in circles.iter().enumerate() {
        let mut angles = Vec::new();
        for (j, cj) in circles.iter().enumerate() {
            if i == j {
                continue;
            }
            match circle_meet(ci, cj, tol) {
                CircleMeet::Crossing(t1, t2) => {
                    angles.push(wrap_positive(t1));
                    angles.push(wrap_positive(t2));
                }
                CircleMeet::Tangent => {
                    return Err(RegionError::DegenerateArrangement(i.min(j), i.max(j)))
                }
                CircleMeet::Disjoint | CircleMeet::Coincident => {}
            }
        }
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let pieces: Vec<(f64, f64)> = if angles.is_empty() {
            vec![(0.0, TAU)]
        } else {
            let m = angles.len();
            (0..m)
                .map(|k| {
                    let hi = if k + 1 < m {
                        angles[k + 1]
                    } else {
                        angles[0] + TAU
                    };
                    (angles[k], hi)
                })
                .collect()
        };
        let h = (1e-7 * scale).min(1e-3 * ci.radius);
        for (lo, hi) in pieces {
            let dir = Complex64::from_polar(1.0, 0.5 * (lo + hi));
            let inside = member(ci.center + dir * (ci.radius - h));
            let outside = member(ci.center + dir * (ci.radius + h));
            if inside && !outside {
                arcs.push(Arc::new(*ci, lo, hi));
            } else if outside && !inside {
                arcs.push(Arc::new(*ci, hi, lo));
            }
        }
    }
    Ok(arcs)
}

fn chain(arcs: Vec<Arc>, tol: f64) -> Result<Vec<Vec<Arc>>, RegionError> {
    let mut used = vec![false; arcs.len()];
    let mut loops = Vec::new();
    for i in 0..arcs.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let first = arcs[i].start();
        let mut end = arcs[i].end();
        let mut current = vec![arcs[i]];
        while (end - first).norm() > tol {
            let next = (0..arcs.len())
                .filter(|&j| !used[j])
                .map(|j| (j, (arcs[j].start() - end).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match next {
                Some((j, d)) if d <= tol => {
                    used[j] = true;
                    end = arcs[j].end();
                    current.push(arcs[j]);
                }
                _ => return Err(RegionError::OpenChain),
            }
        }
        loops.push(current);
    }
    Ok(loops)
}

fn requires_nonzero(kind: &RegionKind, spec: &RegionSpec) -> bool {
    let zero = Complex64::new(0.0, 0.0);
    match kind {
        RegionKind::DA | RegionKind::DAEA => spec.alphas.contains(&zero),
        RegionKind::DB | RegionKind::DBEB => spec.betas.contains(&zero),
        _ => false,
    }
}

pub fn build_region(spec: &RegionSpec) -> Result<ContourSystem, RegionError> {
    if let RegionKind::Inverted(base) = &spec.kind {
        let base_spec = spec.with_kind((**base).clone());
        if base_spec.contains(Complex64::new(0.0, 0.0)) {
            return Err(RegionError::UnboundedInversion);
        }
        return invert_contour(&build_region(&base_spec)?);
    }
    if requires_nonzero(&spec.kind, spec) {
        return Err(RegionError::RootAtOrigin);
    }
    let scale = spec.scale();
    let circles = dedupe_circles(spec.circles(), MEET_TOL * scale);
    let arcs = boundary_arcs(&circles, |z| spec.contains(z), scale)?;
    if arcs.is_empty() {
        return Err(RegionError::Empty);
    }
    let loops = chain(arcs, LINK_TOL * scale)?;
    ContourSystem::assemble(spec.kind.clone(), loops, spec.probes(), scale)
}

/// Retries a degenerate arrangement with roots moved by `1e-9 * scale`
/// (doubling each attempt). Returns the contour and the spec actually used.
pub fn build_region_with_retry(
    spec: &RegionSpec,
) -> Result<(ContourSystem, RegionSpec), RegionError> {
    let mut last = match build_region(spec) {
        Ok(c) => return Ok((c, spec.clone())),
        Err(e @ RegionError::DegenerateArrangement(..)) => e,
        Err(e) => return Err(e),
    };
    let scale = spec.scale();
    for attempt in 0..4 {
        let size = 1e-9 * scale * f64::from(1 << attempt);
        let nudge = |k: usize| Complex64::from_polar(size, 0.7 + 1.3 * k as f64);
        let mut moved = spec.clone();
        let n = moved.alphas.len();
        for (k, a) in moved.alphas.iter_mut().enumerate() {
            *a += nudge(k);
        }
        for (k, b) in moved.betas.iter_mut().enumerate() {
            *b += nudge(n + k);
        }
        match build_region(&moved) {
            Ok(c) => return Ok((c, moved)),
            Err(e @ RegionError::DegenerateArrangement(..)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Image of one arc under `z -> 1/z`. A conformal map keeps the region on
/// the left, so the image of a circle is traversed counterclockwise unless
/// the origin lies inside the original circle.
fn invert_arc(arc: &Arc) -> Arc {
    let c = arc.circle.center;
    let r = arc.circle.radius;
    let denom = c.norm_sqr() - r * r;
    let image = Disk::new(c.conj() / denom, r / denom.abs());
    let ccw = arc.ccw != (denom < 0.0);
    let start = (arc.start().inv() - image.center).arg();
    let end = (arc.end().inv() - image.center).arg();
    let magnitude = if arc.sweep().abs() >= TAU - 1e-12 {
        arc.sweep().abs()
    } else if ccw {
        wrap_positive(end - start)
    } else {
        wrap_positive(start - end)
    };
    let signed = if ccw { magnitude } else { -magnitude };
    Arc::new(image, start, start + signed)
}

/// Maps a contour system through `z -> 1/z`, keeping arc order within each
/// loop. Probes are carried over as their reciprocals and re-verified.
pub fn invert_contour(contour: &ContourSystem) -> Result<ContourSystem, RegionError> {
    let zero = Complex64::new(0.0, 0.0);
    let d0 = contour.distance_to(zero);
    if d0 <= ON_CONTOUR_TOL * contour.scale {
        return Err(RegionError::OriginTooClose(d0));
    }
    for arc in &contour.arcs {
        let gap = (arc.circle.center.norm() - arc.circle.radius).abs();
        if gap <= ON_CONTOUR_TOL * contour.scale {
            return Err(RegionError::OriginTooClose(gap));
        }
    }
    let mut loops = vec![Vec::new(); contour.loop_count];
    for (arc, &l) in contour.arcs.iter().zip(&contour.loop_of) {
        loops[l].push(invert_arc(arc));
    }
    let scale = 1.0
        + loops
            .iter()
            .flatten()
            .map(|a| a.circle.center.norm() + a.circle.radius)
            .fold(0.0, f64::max);
    let probes = contour
        .orientation_certificate
        .iter()
        .filter(|p| p.point != zero)
        .map(|p| (p.point.inv(), p.expected))
        .collect();
    let kind = match &contour.kind {
        RegionKind::Inverted(base) => (**base).clone(),
        other => other.clone().inverted(),
    };
    ContourSystem::assemble(kind, loops, probes, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn figure1() -> RegionSpec {
        RegionSpec::new(
            RegionKind::EA,
            vec![c(0.25, 0.125), c(-0.5, 0.0), c(0.4, 0.0)],
            vec![
                c(1.0 / 9.0, 5.0 / 6.0),
                c(0.125, 0.5),
                c(0.0, 1.0 / 3.0),
                c(0.0, 0.2),
            ],
        )
    }

    fn figure4() -> RegionSpec {
        let s = 0.34641;
        RegionSpec::new(
            RegionKind::DAEA,
            vec![c(1.0 / 3.0, 0.0), c(-0.2, s), c(-0.2, -s)],
            vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)],
        )
    }

    #[test]
    fn figure_one_loop_counts() {
        let ea = build_region(&figure1()).unwrap();
        assert_eq!(ea.loop_count, 2);
        let eb = build_region(&figure1().with_kind(RegionKind::EB)).unwrap();
        assert_eq!(eb.loop_count, 1);
        for sys in [&ea, &eb] {
            assert!(sys
                .orientation_certificate
                .iter()
                .all(|p| p.expected == p.computed));
            assert!(sys.signed_area() > 0.0);
        }
    }

    #[test]
    fn gamma_one_windings() {
        let spec = figure4();
        let g = build_region(&spec).unwrap();
        for &a in &spec.alphas {
            assert_eq!(g.winding_number(a).unwrap(), 1);
        }
        for &b in &spec.betas {
            assert_eq!(g.winding_number(b).unwrap(), 0);
        }
        assert_eq!(g.winding_number(c(0.0, 0.0)).unwrap(), 0);
    }

    #[test]
    fn inversion_carries_windings_and_is_involutive() {
        let spec = figure4();
        let g = build_region(&spec).unwrap();
        let inv = invert_contour(&g).unwrap();
        for &a in &spec.alphas {
            assert_eq!(inv.winding_number(a.inv()).unwrap(), 1);
        }
        for &b in &spec.betas {
            assert_eq!(inv.winding_number(b.inv()).unwrap(), 0);
        }
        let back = invert_contour(&inv).unwrap();
        assert_eq!(back.kind, g.kind);
        for (p, q) in back.sample_points(9).iter().zip(g.sample_points(9)) {
            assert!((p - q).norm() < 1e-12 * g.scale);
        }
    }

    #[test]
    fn single_disk_is_one_ccw_circle() {
        let spec = RegionSpec::new(RegionKind::EA, vec![c(0.0, 0.0)], vec![c(3.0, 0.0)]);
        let g = build_region(&spec).unwrap();
        assert_eq!(g.arcs.len(), 1);
        assert!(g.arcs[0].ccw);
        assert!((g.total_length - TAU).abs() < 1e-14);
        assert!((g.signed_area() - std::f64::consts::PI).abs() < 1e-14);
        assert!(matches!(
            g.winding_number(c(1.0, 0.0)),
            Err(RegionError::OnContour(_))
        ));
    }

    #[test]
    fn tangent_circles_are_rejected_then_retried() {
        // D(0, 1) and D(2, 1) touch at z = 1
        let spec = RegionSpec::new(
            RegionKind::EA,
            vec![c(0.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 3.0), c(2.0, 3.0)],
        );
        assert!(matches!(
            build_region(&spec),
            Err(RegionError::DegenerateArrangement(..))
        ));
        let (g, moved) = build_region_with_retry(&spec).unwrap();
        assert_ne!(moved, spec);
        assert!(g.loop_count >= 1);
    }

    #[test]
    fn root_at_origin_rejected_for_d_regions() {
        let spec = RegionSpec::new(RegionKind::DA, vec![c(0.0, 0.0)], vec![c(1.0, 0.0)]);
        assert_eq!(build_region(&spec), Err(RegionError::RootAtOrigin));
    }
}
