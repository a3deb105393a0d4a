//! Orientation double covers and cyclic voltage covers of complexes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Label, PolygonComplex, UnionFind};
use crate::feasibility::{self, FeasibilityError, PackingSpec};
use crate::grafting::{self, GraftError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("the complex is already orientable")]
    AlreadyOrientable,
    #[error("cover degree must be at least 1")]
    ZeroModulus,
    #[error("expected {expected} voltages (one per edge label), got {got}")]
    VoltageCount { expected: usize, got: usize },
    #[error("net voltage {net} around vertex cycle {cycle} is not 0 mod {n}")]
    VoltageCondition { cycle: usize, net: i64, n: u64 },
    #[error("cover splits into {components} components")]
    Disconnected { components: usize },
    #[error("no voltage assignment gives a connected non-orientable {n}-fold cover")]
    Exhausted { n: u64 },
    #[error(transparent)]
    Infeasible(#[from] FeasibilityError),
    #[error(transparent)]
    Graft(#[from] GraftError),
}

/// Voltages in `Z/n` on the edge labels, indexed by `label - 1`.
///
/// Copy `i` of the first occurrence of a label is glued to copy `i + v`
/// of its second occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoltageAssignment {
    pub n: u64,
    pub voltages: Vec<u64>,
}

impl VoltageAssignment {
    pub fn new(n: u64, voltages: Vec<u64>) -> Result<Self, CoverError> {
        if n == 0 {
            return Err(CoverError::ZeroModulus);
        }
        let voltages = voltages.into_iter().map(|v| v % n).collect();
        Ok(VoltageAssignment { n, voltages })
    }

    pub fn zero(n: u64, edges: usize) -> Self {
        VoltageAssignment { n, voltages: vec![0; edges] }
    }
}

/// The 2-sheeted orientable cover. Polygons `0..F` form the positive
/// sheet; polygon `F + p` is the mirror image of polygon `p`. Swapping
/// the sheets is a free involution of the cover.
pub fn orientation_double_cover(c: &PolygonComplex) -> Result<PolygonComplex, CoverError> {
    if c.is_orientable() {
        return Err(CoverError::AlreadyOrientable);
    }
    let preserving = c.preserving_table();
    let occ = c.occurrences();
    let f = c.polygon_count();
    // label of the side (p, s) on sheet `sheet` (0 positive, 1 mirrored)
    let cover_label = |p: usize, s: usize, l: Label, sheet: usize| -> Label {
        let i = l.unsigned_abs() as usize - 1;
        let is_first = (occ[i][0].polygon, occ[i][0].side) == (p, s);
        // pair 0 joins the positive copy of the first occurrence
        let pair = if is_first || preserving[i] { sheet } else { 1 - sheet };
        (2 * i + pair + 1) as Label
    };
    let mut polygons = Vec::with_capacity(2 * f);
    for sheet in 0..2 {
        for (p, poly) in c.polygons().iter().enumerate() {
            let mut lifted: Vec<Label> =
                poly.iter().enumerate().map(|(s, &l)| cover_label(p, s, l, sheet)).collect();
            if sheet == 1 {
                lifted.reverse();
            }
            polygons.push(lifted);
        }
    }
    let out = PolygonComplex::from_polygons(polygons).expect("double cover of a connected non-orientable complex is connected");
    Ok(match c.name() {
        Some(n) => out.with_name(format!("{n}+")),
        None => out,
    })
}

/// Per vertex cycle, the coefficient of each label in its net voltage.
fn cycle_equations(c: &PolygonComplex) -> Vec<Vec<(usize, i64)>> {
    let occ = c.occurrences();
    c.vertex_cycles()
        .iter()
        .map(|cycle| {
            let mut coef: Vec<(usize, i64)> = Vec::new();
            for (j, corner) in cycle.corners.iter().enumerate() {
                let size = c.polygons()[corner.polygon].len();
                let side = if cycle.forward[j] { corner.position } else { (corner.position + size - 1) % size };
                let i = cycle.crossings[j] as usize - 1;
                let first = (occ[i][0].polygon, occ[i][0].side) == (corner.polygon, side);
                let d = if first { 1 } else { -1 };
                match coef.iter_mut().find(|(l, _)| *l == i) {
                    Some((_, x)) => *x += d,
                    None => coef.push((i, d)),
                }
            }
            coef.retain(|&(_, x)| x != 0);
            coef
        })
        .collect()
}

fn lift(c: &PolygonComplex, v: &VoltageAssignment) -> Vec<Vec<Label>> {
    let n = v.n as usize;
    let occ = c.occurrences();
    let mut polygons = Vec::with_capacity(n * c.polygon_count());
    for copy in 0..n {
        for (p, poly) in c.polygons().iter().enumerate() {
            polygons.push(
                poly.iter()
                    .enumerate()
                    .map(|(s, &l)| {
                        let i = l.unsigned_abs() as usize - 1;
                        let first = (occ[i][0].polygon, occ[i][0].side) == (p, s);
                        let base_copy = if first { copy } else { (copy + n - v.voltages[i] as usize) % n };
                        l.signum() * (i * n + base_copy + 1) as Label
                    })
                    .collect(),
            );
        }
    }
    polygons
}

fn component_count(polygons: &[Vec<Label>]) -> usize {
    let mut seen: Vec<Option<usize>> = vec![None; polygons.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0) + 1];
    let mut uf = UnionFind::new(polygons.len());
    for (p, poly) in polygons.iter().enumerate() {
        for &l in poly {
            let i = l.unsigned_abs() as usize;
            match seen[i] {
                Some(q) => {
                    uf.union(p, q);
                }
                None => seen[i] = Some(p),
            }
        }
    }
    uf.components()
}

/// The n-fold cyclic cover defined by a voltage assignment.
pub fn cyclic_cover(c: &PolygonComplex, v: &VoltageAssignment) -> Result<PolygonComplex, CoverError> {
    if v.n == 0 {
        return Err(CoverError::ZeroModulus);
    }
    if v.voltages.len() != c.edge_count() {
        return Err(CoverError::VoltageCount { expected: c.edge_count(), got: v.voltages.len() });
    }
    for (cycle, eq) in cycle_equations(c).iter().enumerate() {
        let net: i64 = eq.iter().map(|&(i, x)| x * v.voltages[i] as i64).sum();
        if net.rem_euclid(v.n as i64) != 0 {
            return Err(CoverError::VoltageCondition { cycle, net, n: v.n });
        }
    }
    let polygons = lift(c, v);
    let components = component_count(&polygons);
    if components != 1 {
        return Err(CoverError::Disconnected { components });
    }
    let out = PolygonComplex::from_polygons(polygons).expect("connected lift is a valid complex");
    Ok(match c.name() {
        Some(name) if v.n > 1 => out.with_name(format!("{name}-n{}", v.n)),
        Some(name) => out.with_name(name),
        None => out,
    })
}

/// Edge labels of the dual spanning tree built from the lowest labels.
fn dual_tree(c: &PolygonComplex) -> Vec<bool> {
    let mut uf = UnionFind::new(c.polygon_count());
    c.occurrences().iter().map(|[a, b]| uf.union(a.polygon, b.polygon)).collect()
}

struct VoltageSearch<'a> {
    c: &'a PolygonComplex,
    n: i64,
    equations: Vec<Vec<(usize, i64)>>,
    /// equations mentioning each label
    touching: Vec<Vec<usize>>,
    values: Vec<Option<i64>>,
    free: Vec<usize>,
}

impl VoltageSearch<'_> {
    fn unit_inverse(&self, a: i64) -> Option<i64> {
        let a = a.rem_euclid(self.n);
        (1..self.n).find(|&x| (a * x) % self.n == 1).or((self.n == 1).then_some(0))
    }

    /// Assigns, then forces values through equations with a single unknown
    /// whose coefficient is a unit. Returns false on a contradiction.
    fn propagate(&mut self, label: usize, value: i64, trail: &mut Vec<usize>) -> bool {
        self.values[label] = Some(value);
        trail.push(label);
        let mut queue = vec![label];
        while let Some(l) = queue.pop() {
            for e in self.touching[l].clone() {
                let mut unknown = Vec::new();
                let mut sum = 0;
                for &(i, x) in &self.equations[e] {
                    match self.values[i] {
                        Some(v) => sum += x * v,
                        None => unknown.push((i, x)),
                    }
                }
                match unknown.as_slice() {
                    [] if sum.rem_euclid(self.n) != 0 => return false,
                    [(i, x)] => {
                        if let Some(inv) = self.unit_inverse(*x) {
                            let forced = (-sum).rem_euclid(self.n) * inv % self.n;
                            self.values[*i] = Some(forced);
                            trail.push(*i);
                            queue.push(*i);
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, trail: &mut Vec<usize>, mark: usize) {
        for l in trail.drain(mark..) {
            self.values[l] = None;
        }
    }

    fn search(&mut self, pos: usize, trail: &mut Vec<usize>) -> Option<PolygonComplex> {
        let Some(&label) = self.free.get(pos) else {
            let v = VoltageAssignment {
                n: self.n as u64,
                voltages: self.values.iter().map(|v| v.unwrap() as u64).collect(),
            };
            return match cyclic_cover(self.c, &v) {
                Ok(cover) if !cover.is_orientable() => Some(cover),
                _ => None,
            };
        };
        if self.values[label].is_some() {
            return self.search(pos + 1, trail);
        }
        for value in 0..self.n {
            let mark = trail.len();
            if self.propagate(label, value, trail) {
                if let Some(found) = self.search(pos + 1, trail) {
                    return Some(found);
                }
            }
            self.undo(trail, mark);
        }
        None
    }
}

/// First voltage assignment, in lexicographic order over the labels
/// outside the dual spanning tree, whose cover is connected and
/// non-orientable. Tree labels carry voltage 0.
pub fn find_nonorientable_cyclic_cover(c: &PolygonComplex, n: u64) -> Result<PolygonComplex, CoverError> {
    if n == 0 {
        return Err(CoverError::ZeroModulus);
    }
    if n == 1 {
        return cyclic_cover(c, &VoltageAssignment::zero(1, c.edge_count()));
    }
    let equations = cycle_equations(c);
    let mut touching = vec![Vec::new(); c.edge_count()];
    for (e, eq) in equations.iter().enumerate() {
        for &(i, _) in eq {
            touching[i].push(e);
        }
    }
    let tree = dual_tree(c);
    let mut search = VoltageSearch {
        c,
        n: n as i64,
        equations,
        touching,
        values: vec![None; c.edge_count()],
        free: (0..c.edge_count()).filter(|&i| !tree[i]).collect(),
    };
    let mut trail = Vec::new();
    for i in 0..c.edge_count() {
        if tree[i] && !search.propagate(i, 0, &mut trail) {
            return Err(CoverError::Exhausted { n });
        }
    }
    search.search(0, &mut trail).ok_or(CoverError::Exhausted { n })
}

/// A certified extremal complex for a feasible `(k, g)`: the primitive
/// complex of its cell size, covered `j` times where `(k, g)` is the
/// `j`-th entry of its line.
pub fn realize_spec(spec: PackingSpec) -> Result<PolygonComplex, CoverError> {
    let (n, j) = feasibility::line_position(spec)?;
    let base = grafting::build_primitive(n)?;
    let out = find_nonorientable_cyclic_cover(&base, j)?.canonicalize();
    Ok(out.with_name(format!("k{}-g{}", spec.k(), spec.g())))
}
