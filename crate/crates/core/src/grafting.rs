//! Edge-grafting: inserting three new edge pairs at a trivalent vertex.
//!
//! A graft opens the three corners of a vertex cycle and inserts two new
//! sides at each corner. The six new sides are paired so that every vertex
//! stays trivalent; this wiring turns out to be unique at every vertex.
//! The result has three more edges, two more vertices and genus one
//! higher.
//!
//! The four variants are distinguished by the vertex they act on:
//!
//! * the *twist* of a vertex is the number of orientation-reversing
//!   pairings crossed when walking around it (always 0 or 2). EG1 and EG3
//!   act on twist-0 vertices, EG2 and EG4 on twist-2 vertices. A graft at
//!   a twist-0 vertex creates twist-2 vertices and vice versa, which is
//!   why the variants alternate;
//! * EG1 and EG2 act where the polygons stay connected after cutting all
//!   three crossed edges (the vertex sits on the boundary of the
//!   fundamental region), EG3 and EG4 where one crossed edge is an
//!   interior edge shared by two polygons.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::complex::{Corner, Label, PolygonComplex, UnionFind, VertexCycle};
use crate::feasibility;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraftVariant {
    EG1,
    EG2,
    EG3,
    EG4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionClass {
    Boundary,
    SharedEdge,
}

impl GraftVariant {
    pub const ALL: [GraftVariant; 4] =
        [GraftVariant::EG1, GraftVariant::EG2, GraftVariant::EG3, GraftVariant::EG4];

    pub fn twist(self) -> usize {
        match self {
            GraftVariant::EG1 | GraftVariant::EG3 => 0,
            GraftVariant::EG2 | GraftVariant::EG4 => 2,
        }
    }

    pub fn region(self) -> RegionClass {
        match self {
            GraftVariant::EG1 | GraftVariant::EG2 => RegionClass::Boundary,
            GraftVariant::EG3 | GraftVariant::EG4 => RegionClass::SharedEdge,
        }
    }

    /// The variant whose starting configuration this one produces.
    pub fn partner(self) -> GraftVariant {
        match self {
            GraftVariant::EG1 => GraftVariant::EG2,
            GraftVariant::EG2 => GraftVariant::EG1,
            GraftVariant::EG3 => GraftVariant::EG4,
            GraftVariant::EG4 => GraftVariant::EG3,
        }
    }
}

impl fmt::Display for GraftVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for GraftVariant {
    type Err = GraftError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "EG1" => Ok(GraftVariant::EG1),
            "EG2" => Ok(GraftVariant::EG2),
            "EG3" => Ok(GraftVariant::EG3),
            "EG4" => Ok(GraftVariant::EG4),
            _ => Err(GraftError::UnknownVariant(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraftError {
    #[error("unknown graft variant {0:?} (expected EG1..EG4)")]
    UnknownVariant(String),
    #[error("grafting needs a trivalent complex; vertex cycle {cycle} has length {length}")]
    NotTrivalent { cycle: usize, length: usize },
    #[error("grafting needs a non-orientable complex")]
    Orientable,
    #[error("site {site} is not eligible for {variant}")]
    Ineligible { variant: GraftVariant, site: usize },
    #[error("no trivalent rewiring exists at vertex cycle {0}")]
    NoRewriteFound(usize),
    #[error("cell size {0} is below 7")]
    CellSizeTooSmall(u64),
    #[error("graft schedule for N = {n} found no valid step {step}")]
    ScheduleStuck { n: u64, step: u64 },
}

/// A vertex cycle together with the variant it is eligible for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraftSite {
    pub cycle_index: usize,
    pub cycle: VertexCycle,
    pub variant: GraftVariant,
    pub twist: usize,
    pub region: RegionClass,
    /// For shared-edge sites, the interior edge flanked by two corners.
    pub shared_edge: Option<u32>,
}

/// One of the six inserted sides: `slot` 0 or 1 at corner `corner` of the
/// site, in boundary order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub corner: usize,
    pub slot: usize,
}

/// Where to insert the new sides and how to pair them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rewrite {
    pub corners: Vec<Corner>,
    /// Three pairs of slots; `true` marks an orientation-preserving pair.
    pub pairs: Vec<(Slot, Slot, bool)>,
}

impl Rewrite {
    pub fn apply(&self, c: &PolygonComplex) -> PolygonComplex {
        let e = c.edge_count() as Label;
        let mut label = [[0 as Label; 2]; 3];
        for (i, &(a, b, preserving)) in self.pairs.iter().enumerate() {
            let l = e + 1 + i as Label;
            label[a.corner][a.slot] = l;
            label[b.corner][b.slot] = if preserving { l } else { -l };
        }
        let mut polygons: Vec<Vec<Label>> = c.polygons().to_vec();
        let mut order: Vec<usize> = (0..self.corners.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse((self.corners[i].polygon, self.corners[i].position)));
        for i in order {
            let Corner { polygon, position } = self.corners[i];
            polygons[polygon].splice(position..position, label[i]);
        }
        let out = PolygonComplex::from_polygons(polygons).expect("graft keeps the complex valid");
        match c.name() {
            Some(n) => out.with_name(n),
            None => out,
        }
    }
}

fn check_graftable(c: &PolygonComplex) -> Result<Vec<VertexCycle>, GraftError> {
    let cycles = c.vertex_cycles();
    if let Some((i, v)) = cycles.iter().enumerate().find(|(_, v)| v.len() != 3) {
        return Err(GraftError::NotTrivalent { cycle: i, length: v.len() });
    }
    if c.is_orientable() {
        return Err(GraftError::Orientable);
    }
    Ok(cycles)
}

fn connected_without(c: &PolygonComplex, dropped: &[u32]) -> bool {
    let mut uf = UnionFind::new(c.polygon_count());
    for (i, [a, b]) in c.occurrences().into_iter().enumerate() {
        if !dropped.contains(&(i as u32 + 1)) {
            uf.union(a.polygon, b.polygon);
        }
    }
    uf.components() == 1
}

fn twist_of(cycle: &VertexCycle, preserving: &[bool]) -> usize {
    cycle.crossings.iter().filter(|&&l| !preserving[l as usize - 1]).count()
}

fn classify_site(
    c: &PolygonComplex,
    cycle: &VertexCycle,
    variant: GraftVariant,
) -> Option<Option<u32>> {
    match variant.region() {
        RegionClass::Boundary => connected_without(c, &cycle.crossings).then_some(None),
        RegionClass::SharedEdge => {
            let occ = c.occurrences();
            cycle.crossings.iter().find_map(|&e| {
                let [a, b] = occ[e as usize - 1];
                let rest: Vec<u32> = cycle.crossings.iter().copied().filter(|&x| x != e).collect();
                (a.polygon != b.polygon && connected_without(c, &rest)).then_some(Some(e))
            })
        }
    }
}

/// Vertex cycles where `variant` applies, in vertex-cycle order.
pub fn eligible_sites(c: &PolygonComplex, variant: GraftVariant) -> Result<Vec<GraftSite>, GraftError> {
    let cycles = check_graftable(c)?;
    let preserving = c.preserving_table();
    let mut out = Vec::new();
    for (i, cycle) in cycles.into_iter().enumerate() {
        let twist = twist_of(&cycle, &preserving);
        if twist != variant.twist() {
            continue;
        }
        if let Some(shared_edge) = classify_site(c, &cycle, variant) {
            out.push(GraftSite {
                cycle_index: i,
                cycle,
                variant,
                twist,
                region: variant.region(),
                shared_edge,
            });
        }
    }
    Ok(out)
}

/// The trivalent wiring at a vertex cycle, in closed form.
///
/// Walking around the vertex, the first inserted side met at corner `j` is
/// paired with the second one met at corner `j + 1`. A pair is orientation
/// preserving exactly when the walk passes the two corners in opposite
/// directions relative to their polygons.
pub fn rewrite_for(cycle: &VertexCycle) -> Rewrite {
    let n = cycle.len();
    let first = |j: usize| Slot { corner: j, slot: if cycle.forward[j] { 0 } else { 1 } };
    let second = |j: usize| Slot { corner: j, slot: if cycle.forward[j] { 1 } else { 0 } };
    let pairs = (0..n)
        .map(|j| {
            let k = (j + 1) % n;
            (first(j), second(k), cycle.forward[j] != cycle.forward[k])
        })
        .collect();
    Rewrite { corners: cycle.corners.clone(), pairs }
}

fn slot_matchings(items: &[Slot]) -> Vec<Vec<(Slot, Slot)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let a = items[0];
    let mut out = Vec::new();
    for i in 1..items.len() {
        let mut rest = items[1..].to_vec();
        let b = rest.remove(i - 1);
        for mut m in slot_matchings(&rest) {
            m.insert(0, (a, b));
            out.push(m);
        }
    }
    out
}

/// Brute-force search for a wiring at the site: every matching of the six
/// inserted sides and every choice of pairing types, in lexicographic
/// order. Returns the first wiring whose result is trivalent with genus
/// one higher.
pub fn discover_rewrite(c: &PolygonComplex, site: &GraftSite) -> Result<Rewrite, GraftError> {
    let before = c.invariants();
    let slots: Vec<Slot> = (0..site.cycle.len())
        .flat_map(|corner| (0..2).map(move |slot| Slot { corner, slot }))
        .collect();
    for matching in slot_matchings(&slots) {
        for signs in 0..(1u32 << matching.len()) {
            let pairs = matching
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| (a, b, signs >> (matching.len() - 1 - i) & 1 == 0))
                .collect();
            let rw = Rewrite { corners: site.cycle.corners.clone(), pairs };
            let out = rw.apply(c);
            let after = out.invariants();
            if out.is_trivalent()
                && after.orientable == before.orientable
                && after.genus == before.genus + 1
                && after.e == before.e + 3
            {
                return Ok(rw);
            }
        }
    }
    Err(GraftError::NoRewriteFound(site.cycle_index))
}

/// Grafts at an eligible site.
pub fn apply(c: &PolygonComplex, site: &GraftSite) -> Result<PolygonComplex, GraftError> {
    let eligible = eligible_sites(c, site.variant)?;
    if !eligible.iter().any(|s| s == site) {
        return Err(GraftError::Ineligible { variant: site.variant, site: site.cycle_index });
    }
    Ok(rewrite_for(&site.cycle).apply(c))
}

/// Grafts at the `index`-th eligible site of `variant`.
pub fn apply_nth(
    c: &PolygonComplex,
    variant: GraftVariant,
    index: usize,
) -> Result<PolygonComplex, GraftError> {
    let sites = eligible_sites(c, variant)?;
    let site = sites.get(index).ok_or(GraftError::Ineligible { variant, site: index })?;
    Ok(rewrite_for(&site.cycle).apply(c))
}

/// How the primitive complex of a congruence class of `N` is grown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub seed_n: u64,
    /// Growth of `N` per step.
    pub increment: u64,
    /// Variants grafted in even and odd steps.
    pub phases: [&'static [GraftVariant]; 2],
}

pub fn schedule_for(n: u64) -> Result<Schedule, GraftError> {
    use GraftVariant::*;
    if n < 7 {
        return Err(GraftError::CellSizeTooSmall(n));
    }
    Ok(match n % 6 {
        0 => Schedule { seed_n: 12, increment: 6, phases: [&[EG2], &[EG1]] },
        2 | 4 => Schedule { seed_n: 8, increment: 2, phases: [&[EG1], &[EG2]] },
        3 => Schedule { seed_n: 9, increment: 6, phases: [&[EG3, EG4], &[EG3, EG4]] },
        _ => Schedule { seed_n: 7, increment: 2, phases: [&[EG3, EG1], &[EG4, EG2]] },
    })
}

/// One graft performed while building.
#[derive(Debug, Clone)]
pub struct GraftRecord {
    pub step: u64,
    pub variant: GraftVariant,
    pub site: usize,
    pub result: PolygonComplex,
}

#[derive(Debug, Clone)]
pub struct BuildTrace {
    pub seed: PolygonComplex,
    pub grafts: Vec<GraftRecord>,
    pub result: PolygonComplex,
}

/// Grafts `variants` in order, choosing sites depth-first so that the
/// polygons end up the same size.
fn schedule_step(
    c: &PolygonComplex,
    variants: &[GraftVariant],
    step: u64,
    records: &mut Vec<GraftRecord>,
) -> Result<Option<PolygonComplex>, GraftError> {
    let Some((&variant, rest)) = variants.split_first() else {
        return Ok(c.uniform_size().map(|_| c.clone()));
    };
    for site in eligible_sites(c, variant)? {
        let next = rewrite_for(&site.cycle).apply(c);
        records.push(GraftRecord { step, variant, site: site.cycle_index, result: next.clone() });
        if let Some(done) = schedule_step(&next, rest, step, records)? {
            return Ok(Some(done));
        }
        records.pop();
    }
    Ok(None)
}

/// Builds the primitive extremal complex with cell size `n`, recording
/// every graft.
pub fn build_primitive_traced(n: u64) -> Result<BuildTrace, GraftError> {
    let schedule = schedule_for(n)?;
    let seed = catalog::seed(schedule.seed_n).expect("seed complexes are bundled");
    let (k, _) = feasibility::primitive_pair(n).map_err(|_| GraftError::CellSizeTooSmall(n))?;
    let steps = (n - schedule.seed_n) / schedule.increment;
    let mut grafts = Vec::new();
    let mut cur = seed.clone();
    for step in 0..steps {
        let phase = schedule.phases[(step % 2) as usize];
        cur = schedule_step(&cur, phase, step, &mut grafts)?
            .ok_or(GraftError::ScheduleStuck { n, step })?;
    }
    debug_assert_eq!(cur.uniform_size(), Some(n as usize));
    debug_assert!(cur.polygon_count() as u64 == k || steps == 0);
    let result = cur.canonicalize().with_name(format!("X{n}"));
    Ok(BuildTrace { seed, grafts, result })
}

/// The primitive extremal complex with cell size `n`.
pub fn build_primitive(n: u64) -> Result<PolygonComplex, GraftError> {
    Ok(build_primitive_traced(n)?.result)
}
