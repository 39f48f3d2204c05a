use std::fmt::Write as _;
use std::path::Path;

use num_traits::{Signed, ToPrimitive};

use super::FanApproximation;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::{Int, IntVec};

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Projection center on the unit sphere (normalized on use).
    pub pole: [f64; 3],
    /// Projected points farther than this from the origin are clipped.
    pub clip_radius: f64,
    /// Pixels per unit of the projection plane.
    pub scale: f64,
    /// Extra points drawn as dots, e.g. g-vectors.
    pub points: Vec<IntVec>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { pole: [-1.0, -1.0, -1.0], clip_radius: 3.0, scale: 120.0, points: Vec::new() }
    }
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / len, v[1] / len, v[2] / len]
}

fn to_f64(v: &[Int]) -> [f64; 3] {
    let f = |x: &Int| x.to_f64().unwrap_or(f64::NAN);
    [f(&v[0]), f(&v[1]), f(&v[2])]
}

struct Projection {
    w: [f64; 3],
    u1: [f64; 3],
    u2: [f64; 3],
}

impl Projection {
    fn new(pole: [f64; 3]) -> Self {
        let p = normalize(pole);
        let w = [-p[0], -p[1], -p[2]];
        let helper = if w[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let d = helper[0] * w[0] + helper[1] * w[1] + helper[2] * w[2];
        let u1 = normalize([helper[0] - d * w[0], helper[1] - d * w[1], helper[2] - d * w[2]]);
        let u2 = [
            w[1] * u1[2] - w[2] * u1[1],
            w[2] * u1[0] - w[0] * u1[2],
            w[0] * u1[1] - w[1] * u1[0],
        ];
        Self { w, u1, u2 }
    }

    /// Projects a direction; the antipode of the pole maps to the origin.
    fn project(&self, v: [f64; 3]) -> Option<(f64, f64)> {
        let s = normalize(v);
        let dot = |a: [f64; 3]| a[0] * s[0] + a[1] * s[1] + a[2] * s[2];
        let denom = 1.0 + dot(self.w);
        (denom > 1e-9).then(|| (dot(self.u1) / denom, dot(self.u2) / denom))
    }
}

/// SVG drawing of a rank-3 fan approximation: each wall piece becomes a
/// projected great-circle arc.
pub fn render_stereographic(fan: &FanApproximation, opts: &RenderOptions) -> Result<String> {
    let n = fan.walls.first().map_or(3, |w| w.pieces.first().map_or(3, |p| p.normal.len()));
    if n != 3 {
        return Err(Error::Invalid("stereographic rendering needs rank 3".into()));
    }
    let proj = Projection::new(opts.pole);
    let half = opts.clip_radius * opts.scale;
    let size = 2.0 * half + 40.0;
    let c = size / 2.0;
    let to_px = |(x, y): (f64, f64)| (c + x * opts.scale, c - y * opts.scale);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{size:.0}" viewBox="0 0 {size:.0} {size:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<circle cx="{c:.2}" cy="{c:.2}" r="{:.2}" fill="none" stroke="silver" stroke-dasharray="4 4"/>"#,
        opts.scale
    );
    const SAMPLES: usize = 48;
    for piece in fan.distinct_pieces() {
        let (a, b) = (to_f64(&piece.cell[0]), to_f64(&piece.cell[piece.cell.len() - 1]));
        let (a, b) = (normalize(a), normalize(b));
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for i in 0..=SAMPLES {
            let t = i as f64 / SAMPLES as f64;
            let v = [(1.0 - t) * a[0] + t * b[0], (1.0 - t) * a[1] + t * b[1], (1.0 - t) * a[2] + t * b[2]];
            match proj.project(v).filter(|(x, y)| x.hypot(*y) <= opts.clip_radius) {
                Some(p) => runs.last_mut().expect("nonempty").push(to_px(p)),
                None => runs.push(Vec::new()),
            }
        }
        for run in runs.iter().filter(|r| r.len() > 1) {
            let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="black" stroke-width="0.8"/>"#, pts.join(" "));
        }
    }
    for p in &opts.points {
        if let Some(q) = proj.project(to_f64(p)).filter(|(x, y)| x.hypot(*y) <= opts.clip_radius) {
            let (x, y) = to_px(q);
            let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="crimson"/>"#);
        }
    }
    for (i, e) in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]].iter().enumerate() {
        if let Some(q) = proj.project(*e) {
            let (x, y) = to_px(q);
            let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="14" fill="blue">e{}</text>"#, x + 4.0, y - 4.0, i + 1);
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_svg(fan: &FanApproximation, opts: &RenderOptions, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_stereographic(fan, opts)?)?;
    Ok(())
}

/// Number of wall pieces whose arc crosses the great circle `t . x = 0`
/// transversally. With `t` the antipode of the projection pole this circle
/// projects to the unit circle.
pub fn reference_circle_crossings(fan: &FanApproximation, t: &[Int]) -> usize {
    fan.distinct_pieces()
        .into_iter()
        .filter(|p| {
            let signs: Vec<Int> = p.cell.iter().map(|g| dot(t, g)).collect();
            signs.iter().any(Signed::is_positive) && signs.iter().any(Signed::is_negative)
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fanviz::approximate_fan;
    use crate::{ivec, ExchangeMatrix};

    #[test]
    fn depth_zero_rendering() {
        let b = ExchangeMatrix::from_i64(&[[0, 2, 0], [-1, 0, 1], [0, -2, 0]]).unwrap();
        let fan = approximate_fan(&b, 0).unwrap();
        assert_eq!(reference_circle_crossings(&fan, &ivec(&[1, 1, 1])), 6);
        let wide = RenderOptions { clip_radius: 100.0, ..RenderOptions::default() };
        let svg = render_stereographic(&fan, &wide).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 12);
        assert!(svg.contains(">e2</text>"));
        let p = Projection::new([-1.0, -1.0, -1.0]);
        let (x, y) = p.project([1.0, 1.0, 1.0]).unwrap();
        assert!(x.abs() < 1e-12 && y.abs() < 1e-12);
        let (x, y) = p.project([1.0, -1.0, 0.0]).unwrap();
        assert!((x.hypot(y) - 1.0).abs() < 1e-12);
    }
}
