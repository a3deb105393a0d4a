//! Extended triangle groups, their finite-index subgroups and the bridge
//! to polygon complexes.
//!
//! A torsion-free subgroup of index `2kN` in `Δ±(2, 3, N)` acts on its
//! cosets like the three reflections act on the `2kN` flags of a complex of
//! `k` trivalent `N`-gons, so cosets and flags are used interchangeably.

pub mod enumerate;
pub mod low_index;
pub mod presentation;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Label, PolygonComplex};

pub use enumerate::{coset_enumerate, CosetTable, DEFAULT_COSET_CAP};
pub use low_index::{TorsionWord, DEFAULT_NODE_CAP};
pub use presentation::{triangle_presentation, Presentation, TriangleParams, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("triangle parameters must be at least 2, got ({p}, {q}, {r})")]
    TriangleDomain { p: u64, q: u64, r: u64 },
    #[error("relator uses unknown generator {0}")]
    UnknownGenerator(usize),
    #[error("coset enumeration exceeded {cap} cosets")]
    CapExceeded { cap: usize },
    #[error("low-index search exceeded {nodes} nodes")]
    SearchCapExceeded { nodes: u64 },
    #[error("generator images do not form permutations")]
    NotAPermutation,
    #[error("the action is not transitive")]
    NotTransitive,
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error("operation needs an extended triangle group presentation")]
    NotExtendedTriangle,
    #[error("table does not satisfy the relators of Δ±({p}, {q}, {r})")]
    RelatorsViolated { p: u64, q: u64, r: u64 },
    #[error("index {index} gives a non-integral genus for Δ±({p}, {q}, {r})")]
    GenusNotIntegral { index: usize, p: u64, q: u64, r: u64 },
    #[error("subgroup contains no orientation-reversing elements")]
    NotProper,
    #[error("subgroup has torsion")]
    NotTorsionFree,
    #[error("subgroup index {index} is not 2kN for Δ±(2, 3, N) with N = {n} >= 7")]
    NotExtremalIndex { index: usize, n: u64 },
    #[error("complex is not extremal: {0}")]
    NotExtremal(String),
}

/// Exact `μ = 1 - 1/p - 1/q - 1/r` as a reduced fraction.
pub fn mu(p: u64, q: u64, r: u64) -> (i64, i64) {
    let (p, q, r) = (p as i64, q as i64, r as i64);
    let num = p * q * r - q * r - p * r - p * q;
    let den = p * q * r;
    let g = gcd(num.abs(), den);
    (num / g, den / g)
}

/// `μ(a) / μ(b)` as a reduced fraction.
pub fn area_ratio(a: (u64, u64, u64), b: (u64, u64, u64)) -> (i64, i64) {
    let (an, ad) = mu(a.0, a.1, a.2);
    let (bn, bd) = mu(b.0, b.1, b.2);
    let (num, den) = (an * bd, ad * bn);
    let g = gcd(num.abs(), den.abs()) * den.signum();
    (num / g, den / g)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// A finite-index subgroup of an extended triangle group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RecordJson", into = "RecordJson")]
pub struct SubgroupRecord {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub table: CosetTable,
    pub torsion_free: bool,
    /// Contains orientation-reversing elements.
    pub proper: bool,
    pub quotient_orientable: bool,
    /// Non-orientable genus for proper records, orientable genus otherwise;
    /// only defined for torsion-free subgroups.
    pub genus: Option<u64>,
}

impl SubgroupRecord {
    pub fn index(&self) -> usize {
        self.table.index
    }

    pub fn presentation(&self) -> Presentation {
        triangle_presentation(self.p, self.q, self.r, true).expect("record parameters are valid")
    }
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    p: u64,
    q: u64,
    r: u64,
    index: usize,
    /// one-line notation on `1..=index`, one per reflection
    permutations: Vec<Vec<usize>>,
    torsion_free: bool,
    proper: bool,
    quotient_orientable: bool,
    genus: Option<u64>,
}

impl From<SubgroupRecord> for RecordJson {
    fn from(r: SubgroupRecord) -> Self {
        RecordJson {
            p: r.p,
            q: r.q,
            r: r.r,
            index: r.table.index,
            permutations: r.table.action.iter().map(|perm| perm.iter().map(|&c| c + 1).collect()).collect(),
            torsion_free: r.torsion_free,
            proper: r.proper,
            quotient_orientable: r.quotient_orientable,
            genus: r.genus,
        }
    }
}

impl TryFrom<RecordJson> for SubgroupRecord {
    type Error = GroupError;

    /// Re-classifies the permutations; stored flags are ignored.
    fn try_from(j: RecordJson) -> Result<Self, GroupError> {
        if j.permutations.len() != 3
            || j.permutations.iter().any(|p| p.len() != j.index || p.iter().any(|&c| c == 0 || c > j.index))
        {
            return Err(GroupError::NotAPermutation);
        }
        let action = j.permutations.iter().map(|perm| perm.iter().map(|&c| c - 1).collect()).collect();
        classify(CosetTable::from_action(action, 0)?, j.p, j.q, j.r)
    }
}

/// Orbits of a permutation have exactly length `order` everywhere.
fn cycles_all_of_length(perm: &[usize], order: u64) -> bool {
    let mut seen = vec![false; perm.len()];
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len != order {
            return false;
        }
    }
    true
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&x| b[x]).collect()
}

/// Whether cosets can be 2-coloured so that every reflection swaps
/// colours; false means the subgroup contains an odd element.
fn parity_bipartite(table: &CosetTable) -> bool {
    let mut colour = vec![None; table.index];
    colour[0] = Some(false);
    let mut stack = vec![0];
    while let Some(c) = stack.pop() {
        let col = colour[c].unwrap();
        for perm in &table.action {
            let d = perm[c];
            match colour[d] {
                None => {
                    colour[d] = Some(!col);
                    stack.push(d);
                }
                Some(x) if x == col => return false,
                _ => {}
            }
        }
    }
    true
}

/// Classifies a complete coset table of `Δ±(p, q, r)`.
pub fn classify(table: CosetTable, p: u64, q: u64, r: u64) -> Result<SubgroupRecord, GroupError> {
    let pres = triangle_presentation(p, q, r, true)?;
    if table.generators() != 3 || !table.satisfies(&pres) {
        return Err(GroupError::RelatorsViolated { p, q, r });
    }
    let a = &table.action;
    let torsion_free = a.iter().all(|perm| cycles_all_of_length(perm, 2))
        && cycles_all_of_length(&compose(&a[0], &a[1]), p)
        && cycles_all_of_length(&compose(&a[1], &a[2]), q)
        && cycles_all_of_length(&compose(&a[2], &a[0]), r);
    let proper = !parity_bipartite(&table);
    let genus = if torsion_free {
        let (num, den) = mu(p, q, r);
        let area = table.index as i64 * num;
        let genus = if proper {
            // g = 2 + index μ / 2
            (area % (2 * den) == 0).then(|| 2 + area / (2 * den))
        } else {
            // g' = 1 + index μ / 4
            (area % (4 * den) == 0).then(|| 1 + area / (4 * den))
        };
        match genus {
            Some(g) if g >= 0 => Some(g as u64),
            _ => return Err(GroupError::GenusNotIntegral { index: table.index, p, q, r }),
        }
    } else {
        None
    };
    Ok(SubgroupRecord { p, q, r, table, torsion_free, proper, quotient_orientable: !proper, genus })
}

/// Which subgroups `low_index_subgroups` keeps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupFilter {
    pub torsion_free: bool,
    pub proper: bool,
    pub nonorientable: bool,
}

/// Torsion representatives of `Δ±(p, q, r)`: the reflections and the
/// three rotations, with their orders.
#[cfg(test)]
pub(crate) fn torsion_words_for(pres: &Presentation) -> Vec<TorsionWord> {
    torsion_words(pres, pres.triangle.expect("triangle presentation"))
}

fn torsion_words(pres: &Presentation, t: TriangleParams) -> Vec<TorsionWord> {
    let alphabet = pres.alphabet();
    let w = |a: usize, b: usize, order: u64| TorsionWord {
        letters: alphabet.letters(&[(a, 1), (b, 1)]),
        order: order as usize,
    };
    let mut out: Vec<TorsionWord> =
        (0..3).map(|g| TorsionWord { letters: alphabet.letters(&[(g, 1)]), order: 2 }).collect();
    out.push(w(0, 1, t.p));
    out.push(w(1, 2, t.q));
    out.push(w(2, 0, t.r));
    out
}

/// Low-index search over any presentation; one standardized table per
/// conjugacy class of subgroups of exactly `index`, sorted.
pub fn low_index_tables(
    pres: &Presentation,
    index: usize,
    torsion: Vec<TorsionWord>,
    node_cap: u64,
) -> Result<Vec<CosetTable>, GroupError> {
    if index == 0 {
        return Err(GroupError::ZeroIndex);
    }
    let alphabet = pres.alphabet();
    let mut search = low_index::LowIndex::new(pres, &alphabet, index, torsion, node_cap);
    search.run()?;
    let mut found = search.found;
    found.sort();
    found.dedup();
    Ok(found)
}

/// Subgroups of exactly `index` in an extended triangle group, up to
/// conjugacy, classified and filtered.
pub fn low_index_subgroups(
    pres: &Presentation,
    index: usize,
    filter: SubgroupFilter,
    node_cap: u64,
) -> Result<Vec<SubgroupRecord>, GroupError> {
    let t = match pres.triangle {
        Some(t) if t.extended => t,
        _ => return Err(GroupError::NotExtendedTriangle),
    };
    let torsion = if filter.torsion_free { torsion_words(pres, t) } else { Vec::new() };
    let mut out = Vec::new();
    for table in low_index_tables(pres, index, torsion, node_cap)? {
        let rec = match classify(table, t.p, t.q, t.r) {
            Ok(rec) => rec,
            Err(GroupError::GenusNotIntegral { .. }) => continue,
            Err(e) => return Err(e),
        };
        if (filter.torsion_free && !rec.torsion_free)
            || (filter.proper && !rec.proper)
            || (filter.nonorientable && rec.quotient_orientable)
        {
            continue;
        }
        out.push(rec);
    }
    Ok(out)
}

/// The flag complex of a torsion-free proper subgroup of `Δ±(2, 3, N)`:
/// faces are `⟨r2, r0⟩`-orbits, edges `⟨r0, r1⟩`-orbits.
pub fn subgroup_to_complex(rec: &SubgroupRecord) -> Result<PolygonComplex, GroupError> {
    let n = rec.r;
    if rec.p != 2 || rec.q != 3 || n < 7 || rec.index() % (2 * n as usize) != 0 {
        return Err(GroupError::NotExtremalIndex { index: rec.index(), n });
    }
    if !rec.torsion_free {
        return Err(GroupError::NotTorsionFree);
    }
    if !rec.proper {
        return Err(GroupError::NotProper);
    }
    let [r0, r1, r2] = [&rec.table.action[0], &rec.table.action[1], &rec.table.action[2]];
    let size = rec.index();
    // (polygon, side, half) of every flag
    let mut place = vec![None; size];
    let mut polygons: Vec<Vec<Label>> = Vec::new();
    for start in 0..size {
        if place[start].is_some() {
            continue;
        }
        let p = polygons.len();
        let mut x = start;
        for s in 0..n as usize {
            place[x] = Some((p, s, 0usize));
            place[r0[x]] = Some((p, s, 1));
            x = r2[r0[x]];
        }
        debug_assert_eq!(x, start);
        polygons.push(vec![0; n as usize]);
    }
    let mut next_label = 1;
    for f in 0..size {
        let (p, s, h) = place[f].unwrap();
        if h != 0 || polygons[p][s] != 0 {
            continue;
        }
        let (p2, s2, h2) = place[r1[f]].unwrap();
        polygons[p][s] = next_label;
        // an anti-aligned partner is an orientation-preserving pairing
        polygons[p2][s2] = if h2 == 1 { next_label } else { -next_label };
        next_label += 1;
    }
    let c = PolygonComplex::from_polygons(polygons).map_err(|e| GroupError::NotExtremal(e.to_string()))?;
    Ok(c.canonicalize())
}

/// The subgroup of `Δ±(2, 3, N)` fixing flag 0 of an extremal complex.
pub fn complex_to_subgroup(c: &PolygonComplex) -> Result<SubgroupRecord, GroupError> {
    let report = c.verify_extremal();
    if !report.ok {
        return Err(GroupError::NotExtremal(format!("{:?}", report.failures)));
    }
    let flags = c.flags();
    let table = CosetTable::from_action(vec![flags.r0, flags.r1, flags.r2], 0)?;
    classify(table, 2, 3, report.n.unwrap())
}

/// A subgroup of `Δ±(3, 3, r)` viewed in `Δ±(2, 3, 2r)`, where the
/// `(3, 3, r)` triangle is two `(2, 3, 2r)` triangles glued along the
/// `r0` mirror: `s0 = r2`, `s1 = r1`, `s2 = r0 r2 r0`. The index doubles.
pub fn lift_to_233(rec: &SubgroupRecord) -> Result<SubgroupRecord, GroupError> {
    if rec.p != 3 || rec.q != 3 {
        return Err(GroupError::TriangleDomain { p: rec.p, q: rec.q, r: rec.r });
    }
    let n = rec.index();
    let s = &rec.table.action;
    let r0 = (0..2 * n).map(|c| (c + n) % (2 * n)).collect();
    let r1 = (0..2 * n).map(|c| if c < n { s[1][c] } else { s[1][c - n] + n }).collect();
    let r2 = (0..2 * n).map(|c| if c < n { s[0][c] } else { s[2][c - n] + n }).collect();
    classify(CosetTable::from_action(vec![r0, r1, r2], 0)?, 2, 3, 2 * rec.r)
}

/// `K⁺ = K ∩ Δ⁺`, acting on cosets of `K` times the two orientations.
pub fn canonical_fuchsian(rec: &SubgroupRecord) -> Result<SubgroupRecord, GroupError> {
    if !rec.proper {
        return Err(GroupError::NotProper);
    }
    let n = rec.index();
    let action = rec
        .table
        .action
        .iter()
        .map(|perm| (0..2 * n).map(|x| 2 * perm[x / 2] + (1 - x % 2)).collect())
        .collect();
    classify(CosetTable::from_action(action, 0)?, rec.p, rec.q, rec.r)
}
