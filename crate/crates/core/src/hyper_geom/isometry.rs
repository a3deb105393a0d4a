use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// An isometry of the unit disk: `z ↦ (a w + b) / (c w + d)` with
/// `w = z̄` when `reversing` is set and `w = z` otherwise. The matrix is
/// scaled to determinant 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub m: [[Complex64; 2]; 2],
    pub reversing: bool,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { m: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]], reversing: false }
    }

    /// Scales the matrix to determinant 1.
    pub fn new(m: [[Complex64; 2]; 2], reversing: bool) -> Self {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let s = det.sqrt();
        Isometry { m: [[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]], reversing }
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let w = if self.reversing { z.conj() } else { z };
        (self.m[0][0] * w + self.m[0][1]) / (self.m[1][0] * w + self.m[1][1])
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let b = if self.reversing { conj_matrix(&other.m) } else { other.m };
        let a = &self.m;
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        Isometry::new(m, self.reversing ^ other.reversing)
    }

    pub fn inverse(&self) -> Isometry {
        let a = &self.m;
        let inv = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]];
        let m = if self.reversing { conj_matrix(&inv) } else { inv };
        Isometry::new(m, self.reversing)
    }

    /// Distance between the matrices, up to the sign ambiguity of the
    /// normalization; infinite when the orientation types differ.
    pub fn distance(&self, other: &Isometry) -> f64 {
        if self.reversing != other.reversing {
            return f64::INFINITY;
        }
        let diff = |sign: f64| {
            let mut s = 0.0f64;
            for i in 0..2 {
                for j in 0..2 {
                    s = s.max((self.m[i][j] - other.m[i][j] * sign).norm());
                }
            }
            s
        };
        diff(1.0).min(diff(-1.0))
    }

    /// Moves `a` to the origin: `z ↦ (z - a) / (1 - ā z)`.
    pub fn to_origin(a: Complex64) -> Isometry {
        Isometry::new([[c(1.0, 0.0), -a], [-a.conj(), c(1.0, 0.0)]], false)
    }

    /// Rotation about the origin by `angle`.
    pub fn rotation(angle: f64) -> Isometry {
        let h = Complex64::from_polar(1.0, angle / 2.0);
        Isometry { m: [[h, c(0.0, 0.0)], [c(0.0, 0.0), h.conj()]], reversing: false }
    }

    /// Reflection in the diameter at angle `theta`: `z ↦ e^{2iθ} z̄`.
    pub fn diameter_reflection(theta: f64) -> Isometry {
        let h = Complex64::from_polar(1.0, theta);
        Isometry { m: [[h, c(0.0, 0.0)], [c(0.0, 0.0), h.conj()]], reversing: true }
    }

    /// Inversion in the circle centred at `center` orthogonal to the unit
    /// circle: `z ↦ (c z̄ - 1) / (z̄ - c̄)`.
    pub fn circle_reflection(center: Complex64) -> Isometry {
        Isometry::new([[center, c(-1.0, 0.0)], [c(1.0, 0.0), -center.conj()]], true)
    }

    /// Matrix entries as `[re, im]` pairs in row order.
    pub fn entries(&self) -> [[f64; 2]; 4] {
        let e = |z: Complex64| [z.re, z.im];
        [e(self.m[0][0]), e(self.m[0][1]), e(self.m[1][0]), e(self.m[1][1])]
    }
}

fn conj_matrix(m: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]]
}

#[derive(Serialize, Deserialize)]
pub(crate) struct IsometryJson {
    pub matrix: [[f64; 2]; 4],
    pub reversing: bool,
}

impl From<&Isometry> for IsometryJson {
    fn from(g: &Isometry) -> Self {
        IsometryJson { matrix: g.entries(), reversing: g.reversing }
    }
}

/// Hyperbolic distance in the disk.
pub fn disk_distance(z: Complex64, w: Complex64) -> f64 {
    let t = ((z - w) / (c(1.0, 0.0) - z.conj() * w)).norm();
    2.0 * t.atanh()
}

/// The half-turn fixing `p`.
pub fn rotation_pi_about(p: Complex64) -> Isometry {
    let phi = Isometry::to_origin(p);
    phi.inverse().compose(&Isometry::rotation(std::f64::consts::PI)).compose(&phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    Normalizes,
    /// Some conjugate was not found among short words.
    Inconclusive,
}

/// Bounded numeric test that `t gᵢ t⁻¹` lies in `⟨gens⟩`: each conjugate is
/// searched among words of length at most `max_len` in the generators and
/// their inverses.
pub fn normalizes(gens: &[Isometry], t: &Isometry, tol: f64, max_len: usize) -> Normalization {
    let mut letters: Vec<Isometry> = gens.to_vec();
    letters.extend(gens.iter().map(Isometry::inverse));
    let mut words = vec![Isometry::identity()];
    let mut frontier = words.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let x = w.compose(l);
                if !words.iter().any(|y| y.distance(&x) < tol) {
                    next.push(x);
                    words.push(x);
                }
            }
        }
        frontier = next;
        if words.len() > 200_000 {
            break;
        }
    }
    let tinv = t.inverse();
    let all_found = gens.iter().all(|g| {
        let h = t.compose(g).compose(&tinv);
        words.iter().any(|w| w.distance(&h) < tol)
    });
    if all_found {
        Normalization::Normalizes
    } else {
        Normalization::Inconclusive
    }
}
