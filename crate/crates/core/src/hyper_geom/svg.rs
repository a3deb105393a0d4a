use std::collections::BTreeSet;
use std::fmt::Write;

use num_complex::Complex64;

use super::DiskLayout;

const SCALE: f64 = 500.0;

fn xy(z: Complex64) -> (f64, f64) {
    (z.re * SCALE, -z.im * SCALE)
}

/// Path commands for the geodesic from `a` to `b` (without the initial move).
fn geodesic(a: Complex64, b: Complex64) -> String {
    let cross = a.re * b.im - a.im * b.re;
    let (bx, by) = xy(b);
    if cross.abs() < 1e-12 {
        return format!("L {bx:.6} {by:.6}");
    }
    // the circle through a and b orthogonal to the unit circle:
    // 2 Re(c ā) = 1 + |a|², 2 Re(c b̄) = 1 + |b|²
    let (ra, rb) = ((1.0 + a.norm_sqr()) / 2.0, (1.0 + b.norm_sqr()) / 2.0);
    let det = a.re * b.im - a.im * b.re;
    let c = Complex64::new((ra * b.im - rb * a.im) / det, (a.re * rb - b.re * ra) / det);
    let radius = (c.norm_sqr() - 1.0).sqrt() * SCALE;
    let turn = (a - c).re * (b - c).im - (a - c).im * (b - c).re;
    let sweep = u8::from(turn > 0.0);
    format!("A {radius:.6} {radius:.6} 0 0 {sweep} {bx:.6} {by:.6}")
}

/// The layout as an SVG 1.1 document: the boundary circle, each copy of
/// the polygon, every distinct side as a geodesic arc and the signed label
/// of each side just inside its polygon.
pub fn render_svg(layout: &DiskLayout) -> String {
    let n = layout.geometry.n;
    let polys = layout.complex.polygons();
    let mut out = String::new();
    let m = SCALE * 1.05;
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{w}" viewBox="{o:.0} {o:.0} {w:.0} {w:.0}">"#,
        w = 2.0 * m,
        o = -m
    )
    .unwrap();
    if let Some(name) = layout.complex.name() {
        writeln!(out, "<title>{}</title>", escape(name)).unwrap();
    }
    writeln!(out, r#"<circle class="boundary" cx="0" cy="0" r="{SCALE:.0}" fill="none" stroke="black" stroke-width="2"/>"#)
        .unwrap();

    for (p, pl) in layout.placements.iter().enumerate() {
        let v = &pl.vertices;
        let (x0, y0) = xy(v[0]);
        let mut d = format!("M {x0:.6} {y0:.6}");
        for k in 0..n {
            write!(d, " {}", geodesic(v[k], v[(k + 1) % n])).unwrap();
        }
        writeln!(out, r##"<path class="cell" data-polygon="{p}" d="{d} Z" fill="#dde8f4" stroke="none"/>"##).unwrap();
    }

    let mut drawn: BTreeSet<u32> = BTreeSet::new();
    for (p, pl) in layout.placements.iter().enumerate() {
        let v = &pl.vertices;
        for s in 0..n {
            let label = polys[p][s].unsigned_abs();
            if layout.pairings[label as usize - 1].tree && !drawn.insert(label) {
                continue;
            }
            let (x0, y0) = xy(v[s]);
            let d = format!("M {x0:.6} {y0:.6} {}", geodesic(v[s], v[(s + 1) % n]));
            writeln!(out, r#"<path class="edge" data-label="{label}" d="{d}" fill="none" stroke="black" stroke-width="1.5"/>"#)
                .unwrap();
        }
    }

    for (p, pl) in layout.placements.iter().enumerate() {
        for s in 0..n {
            let z = pl.transform.apply(layout.geometry.toward_side(s, 0.8));
            let size = 28.0 * (1.0 - z.norm_sqr());
            let (x, y) = xy(z);
            writeln!(
                out,
                r#"<text class="label" x="{x:.6}" y="{y:.6}" font-size="{size:.3}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                polys[p][s]
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
