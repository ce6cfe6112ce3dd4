use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Open disk `D(center, radius)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        debug_assert!(radius > 0.0, "disk radius must be positive");
        Self { center, radius }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    pub fn point_at(&self, angle: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, angle)
    }
}

/// How two circles meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleMeet {
    Disjoint,
    /// Two crossing points, given as angles on the first circle.
    Crossing(f64, f64),
    Tangent,
    Coincident,
}

/// Crossing points of the boundaries of `a` and `b`, as angles on `a`.
pub fn circle_meet(a: &Disk, b: &Disk, tol: f64) -> CircleMeet {
    let d_vec = b.center - a.center;
    let d = d_vec.norm();
    if d <= tol && (a.radius - b.radius).abs() <= tol {
        return CircleMeet::Coincident;
    }
    let outer = a.radius + b.radius;
    let inner = (a.radius - b.radius).abs();
    if (d - outer).abs() <= tol || (d > tol && (d - inner).abs() <= tol) {
        return CircleMeet::Tangent;
    }
    if d >= outer || d <= inner {
        return CircleMeet::Disjoint;
    }
    let along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    let across = (a.radius * a.radius - along * along).max(0.0).sqrt();
    let base = d_vec.arg();
    let half = across.atan2(along);
    CircleMeet::Crossing(base - half, base + half)
}

/// Wraps an angle into `[0, 2pi)`.
pub fn wrap_positive(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_signed(theta: f64) -> f64 {
    let t = wrap_positive(theta);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

/// Oriented circular arc from `start_angle` to `end_angle`; counterclockwise
/// when `end_angle > start_angle`. Angles are not wrapped, so a full circle
/// has `|end - start| = 2pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub circle: Disk,
    pub start_angle: f64,
    pub end_angle: f64,
    pub ccw: bool,
}

impl Arc {
    pub fn new(circle: Disk, start_angle: f64, end_angle: f64) -> Self {
        Self {
            circle,
            start_angle,
            end_angle,
            ccw: end_angle > start_angle,
        }
    }

    pub fn sweep(&self) -> f64 {
        self.end_angle - self.start_angle
    }

    pub fn length(&self) -> f64 {
        self.circle.radius * self.sweep().abs()
    }

    pub fn start(&self) -> Complex64 {
        self.circle.point_at(self.start_angle)
    }

    pub fn end(&self) -> Complex64 {
        self.circle.point_at(self.end_angle)
    }

    /// Point at parameter `t` in `[0, 1]`.
    pub fn point(&self, t: f64) -> Complex64 {
        self.circle.point_at(self.start_angle + t * self.sweep())
    }

    /// Unit tangent in the direction of travel at parameter `t`.
    pub fn tangent(&self, t: f64) -> Complex64 {
        let theta = self.start_angle + t * self.sweep();
        let dir = Complex64::new(-theta.sin(), theta.cos());
        if self.ccw {
            dir
        } else {
            -dir
        }
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.circle, self.end_angle, self.start_angle)
    }

    /// Splits into pieces whose sweep does not exceed `max_sweep`.
    pub fn split(&self, max_sweep: f64) -> Vec<Arc> {
        let pieces = (self.sweep().abs() / max_sweep).ceil().max(1.0) as usize;
        let step = self.sweep() / pieces as f64;
        (0..pieces)
            .map(|k| {
                Arc::new(
                    self.circle,
                    self.start_angle + step * k as f64,
                    if k + 1 == pieces {
                        self.end_angle
                    } else {
                        self.start_angle + step * (k + 1) as f64
                    },
                )
            })
            .collect()
    }

    /// Euclidean distance from `z` to the arc.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        let rel = z - self.circle.center;
        let (lo, hi) = if self.ccw {
            (self.start_angle, self.end_angle)
        } else {
            (self.end_angle, self.start_angle)
        };
        let offset = wrap_positive(rel.arg() - lo);
        if rel.norm() > 0.0 && offset <= hi - lo {
            (rel.norm() - self.circle.radius).abs()
        } else {
            (z - self.start()).norm().min((z - self.end()).norm())
        }
    }

    /// Change of `arg(zeta - z)` as `zeta` runs along the arc. The arc plus
    /// the chord back to its start is a simple closed curve, so the change
    /// is the chord's principal angle plus `2pi` when `z` lies in the
    /// circular segment between the arc and the chord.
    pub fn angle_change(&self, z: Complex64) -> f64 {
        if !self.ccw {
            return -self.reversed().angle_change(z);
        }
        let sweep = self.sweep();
        if sweep >= TAU - 1e-15 {
            // full circle (possibly more)
            let turns = (sweep / TAU).round();
            let inside = (z - self.circle.center).norm() < self.circle.radius;
            return if inside { TAU * turns } else { 0.0 };
        }
        let s = self.start();
        let e = self.end();
        let chord = ((e - z) / (s - z)).arg();
        let inside_circle = (z - self.circle.center).norm() < self.circle.radius;
        // a CCW arc bulges to the right of its directed chord s -> e
        let u = e - s;
        let v = z - s;
        let right_of_chord = u.re * v.im - u.im * v.re < 0.0;
        if inside_circle && right_of_chord {
            chord + TAU
        } else {
            chord
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Reference: accumulate wrapped angle increments over a fine sampling.
    fn sampled_change(arc: &Arc, z: Complex64) -> f64 {
        let n = 20_000;
        let mut total = 0.0;
        let mut prev = (arc.point(0.0) - z).arg();
        for k in 1..=n {
            let cur = (arc.point(k as f64 / n as f64) - z).arg();
            total += wrap_signed(cur - prev);
            prev = cur;
        }
        total
    }

    #[test]
    fn angle_change_matches_sampling() {
        let disk = Disk::new(c(0.3, -0.2), 1.3);
        let probes = [
            c(0.3, -0.2),
            c(1.2, 0.4),
            c(-0.8, -0.5),
            c(3.0, 1.0),
            c(0.3, 1.0),
            c(0.2, -1.45),
        ];
        for (s, e) in [(0.2, 1.4), (0.2, 4.0), (-1.0, 5.0), (3.0, 0.5), (5.5, 0.1)] {
            let arc = Arc::new(disk, s, e);
            for &z in &probes {
                let exact = arc.angle_change(z);
                let reference = sampled_change(&arc, z);
                assert!(
                    (exact - reference).abs() < 1e-6,
                    "arc ({s},{e}) z={z}: {exact} vs {reference}"
                );
            }
        }
    }

    #[test]
    fn crossing_angles_lie_on_both_circles() {
        let a = Disk::new(c(0.0, 0.0), 1.0);
        let b = Disk::new(c(1.2, 0.5), 0.8);
        match circle_meet(&a, &b, 1e-12) {
            CircleMeet::Crossing(t1, t2) => {
                for t in [t1, t2] {
                    let p = a.point_at(t);
                    assert!(((p - b.center).norm() - b.radius).abs() < 1e-14);
                }
            }
            other => panic!("expected crossing, got {other:?}"),
        }
        assert_eq!(
            circle_meet(&a, &Disk::new(c(2.0, 0.0), 1.0), 1e-12),
            CircleMeet::Tangent
        );
        assert_eq!(
            circle_meet(&a, &Disk::new(c(0.0, 0.0), 0.5), 1e-12),
            CircleMeet::Disjoint
        );
        assert_eq!(circle_meet(&a, &a, 1e-12), CircleMeet::Coincident);
    }

    #[test]
    fn distance_and_split() {
        let arc = Arc::new(Disk::new(c(0.0, 0.0), 1.0), 0.0, std::f64::consts::PI);
        assert!((arc.distance_to(c(0.0, 2.0)) - 1.0).abs() < 1e-15);
        assert!((arc.distance_to(c(0.0, -1.0)) - 2f64.sqrt()).abs() < 1e-15);
        let parts = arc.split(PI / 4.0);
        assert_eq!(parts.len(), 4);
        assert!((parts.iter().map(Arc::length).sum::<f64>() - PI).abs() < 1e-14);
        assert!((parts[3].end() - arc.end()).norm() < 1e-15);
    }
}
