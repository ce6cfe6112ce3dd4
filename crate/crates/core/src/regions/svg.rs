use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use num_complex::Complex64;

use super::contour::ContourSystem;
use super::geometry::Arc;

const PALETTE: [&str; 6] = [
    "#1f4e9c", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#212f3d",
];

struct Layer {
    loops: Vec<Vec<Arc>>,
    stroke: String,
    fill: Option<String>,
}

struct Markers {
    points: Vec<Complex64>,
    color: String,
    label: Option<String>,
}

/// Accumulates contours and point markers and renders them as a
/// deterministic SVG document (y axis pointing up).
pub struct SvgScene {
    size: f64,
    layers: Vec<Layer>,
    markers: Vec<Markers>,
    arrows: Vec<(Complex64, Complex64, String)>,
}

impl Default for SvgScene {
    fn default() -> Self {
        Self::new(800.0)
    }
}

impl SvgScene {
    pub fn new(size: f64) -> Self {
        Self {
            size,
            layers: Vec::new(),
            markers: Vec::new(),
            arrows: Vec::new(),
        }
    }

    /// Direction arrowheads at the midpoint of every arc.
    pub fn arrows(&mut self, contour: &ContourSystem, color: &str) -> &mut Self {
        for arc in &contour.arcs {
            self.arrows
                .push((arc.point(0.5), arc.tangent(0.5), color.into()));
        }
        self
    }

    pub fn contour(
        &mut self,
        contour: &ContourSystem,
        stroke: &str,
        fill: Option<&str>,
    ) -> &mut Self {
        self.layers.push(Layer {
            loops: contour.loops().iter().map(|l| l.to_vec()).collect(),
            stroke: stroke.into(),
            fill: fill.map(Into::into),
        });
        self
    }

    pub fn markers(&mut self, points: &[Complex64], color: &str, label: Option<&str>) -> &mut Self {
        self.markers.push(Markers {
            points: points.to_vec(),
            color: color.into(),
            label: label.map(Into::into),
        });
        self
    }

    fn bounds(&self) -> (f64, f64, f64) {
        let mut pts: Vec<Complex64> = self
            .layers
            .iter()
            .flat_map(|l| l.loops.iter().flatten())
            .flat_map(|a| (0..=16).map(move |k| a.point(k as f64 / 16.0)))
            .collect();
        pts.extend(self.markers.iter().flat_map(|m| m.points.iter().copied()));
        if pts.is_empty() {
            return (-1.0, 1.0, 2.0);
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in &pts {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9) * 1.1;
        let cx = 0.5 * (x0 + x1);
        let cy = 0.5 * (y0 + y1);
        (cx - span / 2.0, cy + span / 2.0, span)
    }

    pub fn render(&self) -> String {
        let (left, top, span) = self.bounds();
        let s = self.size;
        let px = |z: Complex64| ((z.re - left) / span * s, (top - z.im) / span * s);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s:.0}" height="{s:.0}" viewBox="0 0 {s:.0} {s:.0}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for layer in &self.layers {
            let mut d = String::new();
            for l in &layer.loops {
                let Some(first) = l.first() else { continue };
                let (x, y) = px(first.start());
                let _ = write!(d, "M{x:.3} {y:.3}");
                for piece in l.iter().flat_map(|a| a.split(FRAC_PI_2)) {
                    let r = piece.circle.radius / span * s;
                    let (x, y) = px(piece.end());
                    let sweep = if piece.ccw { 0 } else { 1 };
                    let _ = write!(d, " A{r:.3} {r:.3} 0 0 {sweep} {x:.3} {y:.3}");
                }
                d.push_str(" Z ");
            }
            let fill = layer.fill.as_deref().unwrap_or("none");
            let _ = writeln!(
                out,
                r#"<path d="{}" stroke="{}" stroke-width="2" fill="{}" fill-opacity="0.2" fill-rule="nonzero"/>"#,
                d.trim_end(),
                layer.stroke,
                fill
            );
        }
        for (at, dir, color) in &self.arrows {
            let (x, y) = px(*at);
            // screen y points down
            let u = Complex64::new(dir.re, -dir.im) / dir.norm().max(f64::MIN_POSITIVE);
            let tip = Complex64::new(x, y) + u * 7.0;
            let back = Complex64::new(x, y) - u * 5.0;
            let n = u * Complex64::i() * 5.0;
            let (l, r) = (back + n, back - n);
            let _ = writeln!(
                out,
                r#"<polygon points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="{color}"/>"#,
                tip.re, tip.im, l.re, l.im, r.re, r.im
            );
        }
        for m in &self.markers {
            for (i, &p) in m.points.iter().enumerate() {
                let (x, y) = px(p);
                let _ = writeln!(
                    out,
                    r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{}"/>"#,
                    m.color
                );
                if let Some(label) = &m.label {
                    let _ = writeln!(
                        out,
                        r#"<text x="{:.3}" y="{:.3}" font-size="14" fill="{}">{label}{}</text>"#,
                        x + 6.0,
                        y - 6.0,
                        m.color,
                        i + 1
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Writes the contours (one palette colour each) and markers to `path`.
pub fn emit_svg(contours: &[ContourSystem], markers: &[Complex64], path: &Path) -> io::Result<()> {
    let mut scene = SvgScene::default();
    for (i, c) in contours.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        scene.contour(c, color, Some(color));
    }
    scene.markers(markers, "black", None);
    std::fs::write(path, scene.render())
}
