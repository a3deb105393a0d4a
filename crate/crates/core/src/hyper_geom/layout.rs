use std::collections::VecDeque;

use num_complex::Complex64;
use serde::Serialize;

use super::isometry::{disk_distance, IsometryJson};
use super::{angle_at, regular_ngon, GeomError, Isometry, NgonGeometry, GEOMETRIC_TOL};
use crate::complex::PolygonComplex;

/// Where one polygon of the complex sits in the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    /// Carries the model polygon at the origin onto this copy.
    pub transform: Isometry,
    pub vertices: Vec<Complex64>,
}

impl Placement {
    pub fn center(&self) -> Complex64 {
        self.transform.apply(Complex64::new(0.0, 0.0))
    }
}

/// The side pairing of one label: maps the side at `second` onto the side
/// at `first`, carrying the second polygon across the first one's side.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pub label: u32,
    /// `(polygon, side)` of the first occurrence.
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub preserving: bool,
    /// Tree labels join adjacent copies and pair by the identity.
    pub tree: bool,
    pub isometry: Isometry,
}

#[derive(Debug, Clone)]
pub struct DiskLayout {
    pub complex: PolygonComplex,
    pub geometry: NgonGeometry,
    pub placements: Vec<Placement>,
    /// Indexed by `label - 1`.
    pub pairings: Vec<Pairing>,
}

impl DiskLayout {
    pub fn generators(&self) -> Vec<Isometry> {
        self.pairings.iter().filter(|p| !p.tree).map(|p| p.isometry).collect()
    }

    /// Largest mismatch between a side and the image of its partner.
    pub fn edge_residual(&self) -> (u32, f64) {
        let n = self.geometry.n;
        let mut worst = (0, 0.0f64);
        for p in &self.pairings {
            let (fp, fs) = p.first;
            let (sp, ss) = p.second;
            let a = &self.placements[fp].vertices;
            let b = &self.placements[sp].vertices;
            let (x, y) = (a[fs], a[(fs + 1) % n]);
            let (x, y) = if p.preserving { (y, x) } else { (x, y) };
            let r = (p.isometry.apply(b[ss]) - x).norm().max((p.isometry.apply(b[(ss + 1) % n]) - y).norm());
            if r > worst.1 || r.is_nan() {
                worst = (p.label, r);
            }
        }
        worst
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct PolygonJson {
            index: usize,
            placement: IsometryJson,
            vertices: Vec<[f64; 2]>,
        }
        #[derive(Serialize)]
        struct PairingJson {
            label: u32,
            first: [usize; 2],
            second: [usize; 2],
            preserving: bool,
            tree: bool,
            isometry: IsometryJson,
        }
        #[derive(Serialize)]
        struct LayoutJson<'a> {
            name: Option<&'a str>,
            geometry: &'a NgonGeometry,
            polygons: Vec<PolygonJson>,
            pairings: Vec<PairingJson>,
        }
        let doc = LayoutJson {
            name: self.complex.name(),
            geometry: &self.geometry,
            polygons: self
                .placements
                .iter()
                .enumerate()
                .map(|(index, p)| PolygonJson {
                    index,
                    placement: (&p.transform).into(),
                    vertices: p.vertices.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
            pairings: self
                .pairings
                .iter()
                .map(|p| PairingJson {
                    label: p.label,
                    first: [p.first.0, p.first.1],
                    second: [p.second.0, p.second.1],
                    preserving: p.preserving,
                    tree: p.tree,
                    isometry: (&p.isometry).into(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("layout serializes")
    }
}

/// Lays out a uniform trivalent complex of `N`-gons, `N ≥ 7`.
pub fn realize(c: &PolygonComplex) -> Result<DiskLayout, GeomError> {
    let n = c
        .uniform_size()
        .ok_or_else(|| GeomError::NotExtremal("polygons of different sizes".into()))?;
    let geometry = regular_ngon(n)?;
    if !c.is_trivalent() {
        return Err(GeomError::NotExtremal("some vertex is not trivalent".into()));
    }
    let polys = c.polygons();
    let occ = c.occurrences();
    let preserving = c.preserving_table();

    // breadth-first spanning tree, lowest label first at each polygon
    let f = polys.len();
    let mut transform: Vec<Option<Isometry>> = vec![None; f];
    let mut tree = vec![false; occ.len()];
    transform[0] = Some(Isometry::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        let mut sides: Vec<usize> = (0..n).collect();
        sides.sort_by_key(|&s| polys[p][s].unsigned_abs());
        for s in sides {
            let i = polys[p][s].unsigned_abs() as usize - 1;
            let [a, b] = occ[i];
            let other = if (a.polygon, a.side) == (p, s) { b } else { a };
            if transform[other.polygon].is_some() {
                continue;
            }
            let m = geometry.gluing_map(s, other.side, !preserving[i]);
            transform[other.polygon] = Some(transform[p].unwrap().compose(&m));
            tree[i] = true;
            queue.push_back(other.polygon);
        }
    }
    let transforms: Vec<Isometry> = transform
        .into_iter()
        .map(|t| t.ok_or_else(|| GeomError::NotExtremal("complex is disconnected".into())))
        .collect::<Result<_, _>>()?;

    let placements: Vec<Placement> = transforms
        .iter()
        .map(|t| Placement { transform: *t, vertices: geometry.vertices.iter().map(|&v| t.apply(v)).collect() })
        .collect();

    let pairings = occ
        .iter()
        .enumerate()
        .map(|(i, [a, b])| {
            let m = geometry.gluing_map(a.side, b.side, !preserving[i]);
            let isometry = if tree[i] {
                Isometry::identity()
            } else {
                transforms[a.polygon].compose(&m).compose(&transforms[b.polygon].inverse())
            };
            Pairing {
                label: i as u32 + 1,
                first: (a.polygon, a.side),
                second: (b.polygon, b.side),
                preserving: preserving[i],
                tree: tree[i],
                isometry,
            }
        })
        .collect();

    let layout = DiskLayout { complex: c.clone(), geometry, placements, pairings };
    let (label, residual) = layout.edge_residual();
    if !(residual <= GEOMETRIC_TOL) {
        return Err(GeomError::Degenerate { label, residual });
    }
    let two_r = 2.0 * layout.geometry.inradius;
    for a in 0..f {
        for b in a + 1..f {
            let distance = disk_distance(layout.placements[a].center(), layout.placements[b].center());
            if distance < two_r - GEOMETRIC_TOL {
                return Err(GeomError::Overlap { a, b, distance });
            }
        }
    }
    Ok(layout)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolonomyReport {
    /// Largest displacement of a corner point by the composed map of its
    /// vertex cycle.
    pub holonomy: f64,
    /// Largest entrywise deviation of a composed map from the identity
    /// matrix. Grows with the size of the pairing matrices.
    pub matrix: f64,
    /// Largest deviation of a corner angle from `2π/3`.
    pub angle: f64,
}

impl HolonomyReport {
    /// The point and angle residuals; the matrix deviation is reported
    /// separately since it scales with the layout's extent.
    pub fn max(&self) -> f64 {
        self.holonomy.max(self.angle)
    }
}

/// Composes the side pairings around every vertex cycle. Each step crosses
/// the side named by the cycle, using the pairing when leaving through the
/// first occurrence of the label and its inverse otherwise.
pub fn holonomy_check(layout: &DiskLayout) -> HolonomyReport {
    let c = &layout.complex;
    let polys = c.polygons();
    let n = layout.geometry.n;
    let mut holonomy = 0.0f64;
    let mut matrix = 0.0f64;
    for cycle in c.vertex_cycles() {
        let mut h = Isometry::identity();
        for (j, corner) in cycle.corners.iter().enumerate() {
            let label = cycle.crossings[j];
            let pairing = &layout.pairings[label as usize - 1];
            // forward walks leave through the side starting at the corner
            let p = corner.polygon;
            let side = if cycle.forward[j] { corner.position } else { (corner.position + n - 1) % n };
            debug_assert_eq!(polys[p][side].unsigned_abs(), label);
            let step = if pairing.first == (p, side) { pairing.isometry } else { pairing.isometry.inverse() };
            h = h.compose(&step);
        }
        let first = cycle.corners[0];
        let z = layout.placements[first.polygon].vertices[first.position];
        holonomy = nan_max(holonomy, (h.apply(z) - z).norm());
        matrix = nan_max(matrix, h.distance(&Isometry::identity()));
    }
    let mut angle = 0.0f64;
    for pl in &layout.placements {
        let v = &pl.vertices;
        for k in 0..n {
            let a = angle_at(v[k], v[(k + 1) % n], v[(k + n - 1) % n]);
            angle = angle.max((a - layout.geometry.angle).abs());
        }
    }
    HolonomyReport { holonomy, matrix, angle }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if b.is_nan() {
        f64::INFINITY
    } else {
        a.max(b)
    }
}
