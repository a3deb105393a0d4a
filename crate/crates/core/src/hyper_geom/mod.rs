//! Numeric realization in the Poincaré disk.
//!
//! Every cell of an extremal packing is a regular `N`-gon with interior
//! angle `2π/3`. Placing one copy at the origin and transporting it across
//! a spanning tree of shared sides lays out a fundamental domain; the
//! remaining side pairings generate the surface group.
//!
//! Everything is double precision. Residuals are compared against
//! [`GEOMETRIC_TOL`]; layouts stay within a few tiles of the origin, where
//! the matrices have entries of size `e^{depth·r}` and the rounding error
//! grows by roughly that factor.

mod isometry;
mod layout;
mod svg;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub use isometry::{disk_distance, normalizes, rotation_pi_about, Isometry, Normalization};
pub use layout::{holonomy_check, realize, DiskLayout, HolonomyReport, Pairing, Placement};
pub use svg::render_svg;

/// Tolerance for geometric residuals.
pub const GEOMETRIC_TOL: f64 = 1e-9;
/// Tolerance for closed-form identities.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("no regular {0}-gon with angle 2π/3 in the hyperbolic plane (need N ≥ 7)")]
    Domain(usize),
    #[error("complex cannot be realized: {0}")]
    NotExtremal(String),
    #[error("numeric degeneracy: residual {residual:e} on label {label}")]
    Degenerate { label: u32, residual: f64 },
    #[error("polygons {a} and {b} overlap (center distance {distance})")]
    Overlap { a: usize, b: usize, distance: f64 },
}

/// The regular `N`-gon with angles `2π/3`, centred at the origin with
/// vertex 0 on the positive real axis. Side `s` runs from vertex `s` to
/// vertex `s + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NgonGeometry {
    #[serde(rename = "N")]
    pub n: usize,
    pub angle: f64,
    pub inradius: f64,
    pub circumradius: f64,
    pub side_length: f64,
    pub area: f64,
    #[serde(skip)]
    pub vertices: Vec<Complex64>,
}

impl NgonGeometry {
    /// Direction of the perpendicular from the center to side `s`.
    pub fn side_angle(&self, s: usize) -> f64 {
        PI * (2 * s + 1) as f64 / self.n as f64
    }

    /// Euclidean center of the circle carrying side `s`.
    pub fn side_circle_center(&self, s: usize) -> Complex64 {
        let t = self.vertices[0].re;
        let d = (1.0 + t * t) / (2.0 * t * (PI / self.n as f64).cos());
        Complex64::from_polar(d, self.side_angle(s))
    }

    /// Reflection in the geodesic through side `s`.
    pub fn side_reflection(&self, s: usize) -> Isometry {
        Isometry::circle_reflection(self.side_circle_center(s))
    }

    /// Point at hyperbolic distance `fraction · inradius` from the center
    /// towards side `s`.
    pub fn toward_side(&self, s: usize, fraction: f64) -> Complex64 {
        Complex64::from_polar((fraction * self.inradius / 2.0).tanh(), self.side_angle(s))
    }

    /// The isometry carrying side `t` onto side `s` and the polygon across
    /// side `s`, with `t`'s start going to `s`'s start when `aligned` and to
    /// `s`'s end otherwise.
    pub fn gluing_map(&self, s: usize, t: usize, aligned: bool) -> Isometry {
        let n = self.n as f64;
        let turn = Isometry::rotation(2.0 * PI * (s as f64 - t as f64) / n);
        let sigma = self.side_reflection(s);
        if aligned {
            sigma.compose(&turn)
        } else {
            sigma.compose(&Isometry::diameter_reflection(self.side_angle(s))).compose(&turn)
        }
    }
}

pub fn regular_ngon(n: usize) -> Result<NgonGeometry, GeomError> {
    if n < 7 {
        return Err(GeomError::Domain(n));
    }
    let nf = n as f64;
    let inradius = (1.0 / (2.0 * (PI / nf).sin())).acosh();
    let circumradius = (1.0 / (PI / nf).tan() / (PI / 3.0).tan()).acosh();
    let side_length = 2.0 * ((PI / nf).cos() / (PI / 3.0).sin()).acosh();
    let t = (circumradius / 2.0).tanh();
    let vertices = (0..n).map(|k| Complex64::from_polar(t, 2.0 * PI * k as f64 / nf)).collect();
    Ok(NgonGeometry {
        n,
        angle: 2.0 * PI / 3.0,
        inradius,
        circumradius,
        side_length,
        area: PI * (nf - 6.0) / 3.0,
        vertices,
    })
}

/// The interior angle at `v` between the geodesics to `a` and `b`.
pub fn angle_at(v: Complex64, a: Complex64, b: Complex64) -> f64 {
    let phi = Isometry::to_origin(v);
    (phi.apply(a) / phi.apply(b)).arg().abs()
}

/// Area of a geodesic triangle by angle defect.
pub fn triangle_area(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    PI - angle_at(a, b, c) - angle_at(b, c, a) - angle_at(c, a, b)
}

/// Area of a convex geodesic polygon, triangulated from an interior point.
pub fn polygon_area(center: Complex64, vertices: &[Complex64]) -> f64 {
    let n = vertices.len();
    (0..n).map(|k| triangle_area(center, vertices[k], vertices[(k + 1) % n])).sum()
}

/// The angle `α ∈ (0, π/3]` with `cosh r = 1 / (2 sin(α/2))`, by bisection.
pub fn equilateral_angle(r: f64) -> f64 {
    let target = r.max(0.0).cosh();
    let f = |a: f64| 1.0 / (2.0 * (a / 2.0).sin());
    // f decreases on (0, π/3]; f(π/3) = 1
    let (mut lo, mut hi) = (0.0f64, PI / 3.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Both sides of the density bound `2π(cosh r − 1)/A ≤ 3α(cosh r − 1)/(π − 3α)`
/// at the extremal configuration, and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn boroczky_equality_check(n: usize) -> Result<DensityCheck, GeomError> {
    let g = regular_ngon(n)?;
    let alpha = 2.0 * PI / n as f64;
    let cosh_r = g.inradius.cosh();
    let lhs = 2.0 * PI * (cosh_r - 1.0) / g.area;
    let rhs = 3.0 * alpha * (cosh_r - 1.0) / (PI - 3.0 * alpha);
    Ok(DensityCheck { lhs, rhs, residual: (lhs - rhs).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::{packing_radius_bound, PackingSpec};

    #[test]
    fn ngon_invariants() {
        for n in 7..=40 {
            let g = regular_ngon(n).unwrap();
            let nf = n as f64;
            assert!((g.inradius.cosh() * 2.0 * (PI / nf).sin() - 1.0).abs() < IDENTITY_TOL);
            for k in 0..n {
                let a = angle_at(g.vertices[k], g.vertices[(k + 1) % n], g.vertices[(k + n - 1) % n]);
                assert!((a - g.angle).abs() < 1e-10, "N={n} corner {k}: {a}");
            }
            let d = disk_distance(g.vertices[0], g.vertices[1]);
            assert!((d - g.side_length).abs() < 1e-10);
            let m = Complex64::from_polar((g.inradius / 2.0).tanh(), g.side_angle(0));
            let c = g.side_circle_center(0);
            assert!(((c - m).norm_sqr() - (c.norm_sqr() - 1.0)).abs() < 1e-10);
            assert!((polygon_area(Complex64::new(0.0, 0.0), &g.vertices) - g.area).abs() < GEOMETRIC_TOL);
        }
        assert_eq!(regular_ngon(6), Err(GeomError::Domain(6)));
    }

    #[test]
    fn inradius_examples() {
        // cosh r = 1/(2 sin(π/N)) evaluated independently
        let seven = 1.0 / (2.0 * (std::f64::consts::PI / 7.0).sin());
        assert!((seven - 1.1523824354).abs() < 1e-10);
        assert!((regular_ngon(7).unwrap().inradius.cosh() - seven).abs() < IDENTITY_TOL);
        let twelve = regular_ngon(12).unwrap().inradius.cosh();
        assert!((twelve - 1.9318516526).abs() < 1e-10);
        let bound = packing_radius_bound(PackingSpec::new(1, 3).unwrap()).unwrap();
        assert!((bound.cosh_r - twelve).abs() < IDENTITY_TOL);
    }

    #[test]
    fn equilateral_angles() {
        assert!((equilateral_angle(0.0) - PI / 3.0).abs() < 1e-14);
        for n in [7usize, 9, 12, 30, 100] {
            let r = regular_ngon(n).unwrap().inradius;
            assert!((equilateral_angle(r) - 2.0 * PI / n as f64).abs() < 1e-13, "N={n}");
        }
        let a = equilateral_angle(1.1523824354f64.acosh());
        assert!((a - 2.0 * PI / 7.0).abs() < 1e-9);
        let mut last = PI;
        for k in 0..50 {
            let a = equilateral_angle(k as f64 * 0.1);
            assert!(a < last);
            last = a;
        }
    }

    #[test]
    fn density_equality() {
        for n in [7, 12, 30] {
            let c = boroczky_equality_check(n).unwrap();
            assert!(c.residual < IDENTITY_TOL, "N={n}: {c:?}");
        }
        for n in 7..200 {
            assert!(boroczky_equality_check(n).unwrap().residual < IDENTITY_TOL);
        }
    }

    #[test]
    fn gluing_maps_carry_sides() {
        let g = regular_ngon(9).unwrap();
        let n = g.n;
        for (s, t) in [(0, 0), (2, 5), (8, 1)] {
            for aligned in [true, false] {
                let m = g.gluing_map(s, t, aligned);
                assert_eq!(m.reversing, aligned);
                let (a, b) = (m.apply(g.vertices[t]), m.apply(g.vertices[(t + 1) % n]));
                let (x, y) = (g.vertices[s], g.vertices[(s + 1) % n]);
                let (x, y) = if aligned { (x, y) } else { (y, x) };
                assert!((a - x).norm() < 1e-12 && (b - y).norm() < 1e-12);
                let across = m.apply(Complex64::new(0.0, 0.0));
                assert!((disk_distance(across, Complex64::new(0.0, 0.0)) - 2.0 * g.inradius).abs() < 1e-10);
            }
        }
    }
}
