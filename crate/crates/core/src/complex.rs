//! Closed surfaces presented as polygons with signed edge pairings.
//!
//! Every polygon boundary is read counterclockwise. A label occurs exactly
//! twice. Two occurrences with the same sign are glued by an
//! orientation-preserving map, which anti-aligns the two directed sides
//! (head to tail); occurrences with opposite signs are glued by an
//! orientation-reversing map, which aligns them (head to head).
//!
//! Internally the surface is encoded as an action of three involutions on
//! flags, the halves of polygon sides:
//!
//! * `r0` swaps the two halves of a side,
//! * `r1` crosses a side into the partner occurrence,
//! * `r2` turns around a polygon corner to the neighbouring side.
//!
//! These are the reflections of the `(2, 3, N)` triangle tiling of an
//! extremal surface, which is how `tri_group` bridges complexes and
//! subgroups.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Signed edge label.
pub type Label = i32;

/// Header written at the top of every serialized complex.
pub const FORMAT_HEADER: &str = "# kpack polygon complex v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: label 0 is not allowed")]
    ZeroLabel { line: usize, column: usize },
    #[error("label {0} occurs only once")]
    UnpairedLabel(u32),
    #[error("label {label} occurs {count} times")]
    OverusedLabel { label: u32, count: usize },
    #[error("complex has an empty polygon")]
    EmptyPolygon,
    #[error("complex has no polygons")]
    NoPolygons,
    #[error("complex is disconnected")]
    Disconnected,
}

/// One polygon corner: the vertex between side `position - 1` and side
/// `position` of a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub polygon: usize,
    pub position: usize,
}

/// An orbit of polygon corners under the gluing, listed in the order met
/// when walking around the vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCycle {
    pub corners: Vec<Corner>,
    /// `crossings[i]` is the (unsigned) label crossed when leaving
    /// `corners[i]` for the next corner.
    pub crossings: Vec<u32>,
    /// `forward[i]` is true when the walk enters `corners[i]` through the
    /// side ending at the corner and leaves through the side starting there.
    pub forward: Vec<bool>,
}

impl VertexCycle {
    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// Non-orientable genus `2 - χ`, or orientable genus `(2 - χ) / 2`.
    pub genus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ExtremalityFailure {
    NonUniformPolygon { sizes: Vec<usize> },
    PolygonTooSmall { n: usize },
    NotTrivalent { cycle: usize, length: usize },
    Orientable,
    Disconnected,
    UnpairedLabel { label: u32 },
}

/// Outcome of certifying a complex as an extremal k-packing surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalityReport {
    pub ok: bool,
    pub k: Option<u64>,
    pub g: Option<u64>,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub chi: Option<i64>,
    pub orientable: Option<bool>,
    pub failures: Vec<ExtremalityFailure>,
}

impl ExtremalityReport {
    /// Report for text that could not be assembled into a complex.
    pub fn from_parse_error(err: &ComplexError) -> Option<Self> {
        let failure = match err {
            ComplexError::UnpairedLabel(l) => ExtremalityFailure::UnpairedLabel { label: *l },
            ComplexError::Disconnected => ExtremalityFailure::Disconnected,
            _ => return None,
        };
        Some(ExtremalityReport {
            ok: false,
            k: None,
            g: None,
            n: None,
            chi: None,
            orientable: None,
            failures: vec![failure],
        })
    }
}

/// Where a label occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Occurrence {
    pub polygon: usize,
    pub side: usize,
}

/// A closed surface built from polygons with paired sides.
///
/// Labels always run over `1..=E` and the first occurrence of each label
/// is positive. [`PolygonComplex::canonicalize`] additionally fixes the
/// numbering, polygon rotations and polygon order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolygonComplex {
    name: Option<String>,
    polygons: Vec<Vec<Label>>,
}

impl PolygonComplex {
    /// Validates and normalizes a list of polygons. Labels keep their
    /// relative order but are compacted to `1..=E`; each pair is flipped
    /// if needed so its first occurrence is positive.
    pub fn from_polygons(polygons: Vec<Vec<Label>>) -> Result<Self, ComplexError> {
        if polygons.is_empty() {
            return Err(ComplexError::NoPolygons);
        }
        if polygons.iter().any(|p| p.is_empty()) {
            return Err(ComplexError::EmptyPolygon);
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &l in polygons.iter().flatten() {
            if l == 0 {
                return Err(ComplexError::ZeroLabel { line: 0, column: 0 });
            }
            *counts.entry(l.unsigned_abs()).or_default() += 1;
        }
        for (&label, &count) in &counts {
            match count {
                2 => {}
                1 => return Err(ComplexError::UnpairedLabel(label)),
                _ => return Err(ComplexError::OverusedLabel { label, count }),
            }
        }
        let compact: BTreeMap<u32, i32> =
            counts.keys().enumerate().map(|(i, &l)| (l, i as i32 + 1)).collect();
        let mut flip = vec![false; compact.len() + 1];
        let mut seen = vec![false; compact.len() + 1];
        for &l in polygons.iter().flatten() {
            let c = compact[&l.unsigned_abs()] as usize;
            if !seen[c] {
                seen[c] = true;
                flip[c] = l < 0;
            }
        }
        let polygons = polygons
            .into_iter()
            .map(|p| {
                p.into_iter()
                    .map(|l| {
                        let c = compact[&l.unsigned_abs()];
                        let s = if flip[c as usize] { -l.signum() } else { l.signum() };
                        s * c
                    })
                    .collect()
            })
            .collect();
        let c = PolygonComplex { name: None, polygons };
        if !c.is_connected() {
            return Err(ComplexError::Disconnected);
        }
        Ok(c)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn polygons(&self) -> &[Vec<Label>] {
        &self.polygons
    }

    pub fn polygon_count(&self) -> usize {
        self.polygons.len()
    }

    pub fn edge_count(&self) -> usize {
        self.side_count() / 2
    }

    pub fn side_count(&self) -> usize {
        self.polygons.iter().map(Vec::len).sum()
    }

    /// Polygon sizes, if they are all equal.
    pub fn uniform_size(&self) -> Option<usize> {
        let n = self.polygons[0].len();
        self.polygons.iter().all(|p| p.len() == n).then_some(n)
    }

    /// Both occurrences of every label, indexed by `label - 1`.
    pub(crate) fn occurrences(&self) -> Vec<[Occurrence; 2]> {
        let mut occ: Vec<Vec<Occurrence>> = vec![Vec::with_capacity(2); self.edge_count()];
        for (p, poly) in self.polygons.iter().enumerate() {
            for (s, &l) in poly.iter().enumerate() {
                occ[l.unsigned_abs() as usize - 1].push(Occurrence { polygon: p, side: s });
            }
        }
        occ.into_iter().map(|v| [v[0], v[1]]).collect()
    }

    /// Whether the pairing of `label` is orientation preserving.
    pub fn is_preserving(&self, label: u32) -> bool {
        let [a, b] = self.occurrences()[label as usize - 1];
        let sa = self.polygons[a.polygon][a.side] > 0;
        let sb = self.polygons[b.polygon][b.side] > 0;
        sa == sb
    }

    pub(crate) fn preserving_table(&self) -> Vec<bool> {
        let mut first_sign: Vec<Option<bool>> = vec![None; self.edge_count()];
        let mut out = vec![false; self.edge_count()];
        for &l in self.polygons.iter().flatten() {
            let i = l.unsigned_abs() as usize - 1;
            match first_sign[i] {
                None => first_sign[i] = Some(l > 0),
                Some(s) => out[i] = s == (l > 0),
            }
        }
        out
    }

    pub(crate) fn flags(&self) -> FlagAction {
        FlagAction::new(self)
    }

    fn union_find_components(&self, sheets: bool) -> usize {
        let f = self.polygons.len();
        let n = if sheets { 2 * f } else { f };
        let mut uf = UnionFind::new(n);
        let preserving = self.preserving_table();
        for (i, [a, b]) in self.occurrences().into_iter().enumerate() {
            if sheets {
                let (pa, pb) = (2 * a.polygon, 2 * b.polygon);
                if preserving[i] {
                    uf.union(pa, pb);
                    uf.union(pa + 1, pb + 1);
                } else {
                    uf.union(pa, pb + 1);
                    uf.union(pa + 1, pb);
                }
            } else {
                uf.union(a.polygon, b.polygon);
            }
        }
        uf.components()
    }

    pub fn is_connected(&self) -> bool {
        self.union_find_components(false) == 1
    }

    /// Two-sheet test: orientable iff the polygon sheets split in two.
    pub fn is_orientable(&self) -> bool {
        self.union_find_components(true) == 2 * self.union_find_components(false)
    }

    pub fn vertex_cycles(&self) -> Vec<VertexCycle> {
        self.flags().vertex_cycles(self)
    }

    pub fn invariants(&self) -> SurfaceInvariants {
        let v = self.vertex_cycles().len();
        let e = self.edge_count();
        let f = self.polygon_count();
        let chi = v as i64 - e as i64 + f as i64;
        let orientable = self.is_orientable();
        let genus = if orientable { (2 - chi) / 2 } else { 2 - chi };
        SurfaceInvariants { v, e, f, euler_characteristic: chi, orientable, genus }
    }

    /// Certifies that the complex is a union of `k` regular `N`-gons with
    /// angle `2π/3` forming a non-orientable surface, i.e. a k-extremal
    /// surface of genus `g`.
    pub fn verify_extremal(&self) -> ExtremalityReport {
        let mut failures = Vec::new();
        let uniform = self.uniform_size();
        match uniform {
            None => {
                let mut sizes: Vec<usize> = self.polygons.iter().map(Vec::len).collect();
                sizes.sort_unstable();
                sizes.dedup();
                failures.push(ExtremalityFailure::NonUniformPolygon { sizes });
            }
            Some(n) if n < 7 => failures.push(ExtremalityFailure::PolygonTooSmall { n }),
            _ => {}
        }
        let cycles = self.vertex_cycles();
        for (i, c) in cycles.iter().enumerate() {
            if c.len() != 3 {
                failures.push(ExtremalityFailure::NotTrivalent { cycle: i, length: c.len() });
            }
        }
        let inv = self.invariants();
        if inv.orientable {
            failures.push(ExtremalityFailure::Orientable);
        }
        let ok = failures.is_empty();
        let (k, g, n) = if ok {
            let k = self.polygon_count() as u64;
            let n = uniform.unwrap() as u64;
            let g = inv.genus as u64;
            debug_assert_eq!(k * n, 6 * g + 6 * k - 12);
            (Some(k), Some(g), Some(n))
        } else {
            (None, None, None)
        };
        ExtremalityReport {
            ok,
            k,
            g,
            n,
            chi: Some(inv.euler_characteristic),
            orientable: Some(inv.orientable),
            failures,
        }
    }

    /// Whether every vertex cycle has exactly three corners.
    pub fn is_trivalent(&self) -> bool {
        self.vertex_cycles().iter().all(|c| c.len() == 3)
    }

    /// Construction-stable normal form.
    ///
    /// Each polygon is rotated to the rotation whose self-contained
    /// relabelling is lexicographically least, polygons are sorted by that
    /// key, and labels are renumbered in order of first occurrence. Equal
    /// inputs up to rotation, polygon order and renaming usually agree, but
    /// this is not an isomorphism test.
    pub fn canonicalize(&self) -> PolygonComplex {
        let mut keyed: Vec<(Vec<i32>, Vec<Label>)> = self
            .polygons
            .iter()
            .map(|poly| {
                let n = poly.len();
                let mut best: Option<(Vec<i32>, Vec<Label>)> = None;
                for r in 0..n {
                    let rotated: Vec<Label> = poly[r..].iter().chain(&poly[..r]).copied().collect();
                    let key = first_occurrence_relabel(std::slice::from_ref(&rotated)).remove(0);
                    if best.as_ref().map_or(true, |(b, _)| key < *b) {
                        best = Some((key, rotated));
                    }
                }
                best.unwrap()
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let polygons: Vec<Vec<Label>> = keyed.into_iter().map(|(_, p)| p).collect();
        PolygonComplex { name: self.name.clone(), polygons: first_occurrence_relabel(&polygons) }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().polygons == self.polygons
    }

    /// Writes the canonical form in the text format.
    pub fn serialize(&self) -> String {
        let c = self.canonicalize();
        let mut out = String::new();
        out.push_str(FORMAT_HEADER);
        out.push('\n');
        if let Some(name) = &c.name {
            out.push_str("name ");
            out.push_str(name);
            out.push('\n');
        }
        for poly in &c.polygons {
            out.push_str("polygon");
            for l in poly {
                out.push(' ');
                out.push_str(&l.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format and returns the canonical form.
    pub fn parse(text: &str) -> Result<PolygonComplex, ComplexError> {
        let mut name = None;
        let mut polygons = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let indent = raw.len() - raw.trim_start().len();
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match keyword {
                "name" => name = Some(rest.trim().to_string()),
                "polygon" => {
                    let mut poly = Vec::new();
                    for (offset, token) in tokens_with_offsets(rest) {
                        let column = indent + keyword.len() + 1 + offset + 1;
                        let value: i32 = token.parse().map_err(|_| ComplexError::Syntax {
                            line: line_no,
                            column,
                            message: format!("expected a signed integer label, found {token:?}"),
                        })?;
                        if value == 0 {
                            return Err(ComplexError::ZeroLabel { line: line_no, column });
                        }
                        poly.push(value);
                    }
                    if poly.is_empty() {
                        return Err(ComplexError::Syntax {
                            line: line_no,
                            column: indent + keyword.len() + 1,
                            message: "polygon needs at least one label".into(),
                        });
                    }
                    polygons.push(poly);
                }
                other => {
                    return Err(ComplexError::Syntax {
                        line: line_no,
                        column: indent + 1,
                        message: format!("unknown keyword {other:?}"),
                    })
                }
            }
        }
        let mut c = PolygonComplex::from_polygons(polygons)?.canonicalize();
        c.name = name;
        Ok(c)
    }
}

impl fmt::Display for PolygonComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn tokens_with_offsets(s: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(st)) => {
                out.push((st, &s[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out.into_iter()
}

/// Renumbers labels by first occurrence, making each first occurrence
/// positive. Pairing types are preserved.
fn first_occurrence_relabel(polygons: &[Vec<Label>]) -> Vec<Vec<Label>> {
    let mut map: BTreeMap<u32, (i32, bool)> = BTreeMap::new();
    polygons
        .iter()
        .map(|poly| {
            poly.iter()
                .map(|&l| {
                    let next = map.len() as i32 + 1;
                    match map.get(&l.unsigned_abs()) {
                        None => {
                            map.insert(l.unsigned_abs(), (next, l > 0));
                            next
                        }
                        Some(&(n, positive)) => {
                            if (l > 0) == positive {
                                n
                            } else {
                                -n
                            }
                        }
                    }
                })
                .collect()
        })
        .collect()
}

/// The three involutions `r0`, `r1`, `r2` on the flags of a complex.
#[derive(Debug, Clone)]
pub(crate) struct FlagAction {
    pub offsets: Vec<usize>,
    pub sizes: Vec<usize>,
    pub r0: Vec<usize>,
    pub r1: Vec<usize>,
    pub r2: Vec<usize>,
}

impl FlagAction {
    fn new(c: &PolygonComplex) -> Self {
        let sizes: Vec<usize> = c.polygons.iter().map(Vec::len).collect();
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &n in &sizes {
            offsets.push(acc);
            acc += n;
        }
        let total = 2 * acc;
        let mut r0 = vec![0; total];
        let mut r1 = vec![0; total];
        let mut r2 = vec![0; total];
        let flag = |p: usize, s: usize, h: usize| 2 * (offsets[p] + s) + h;
        let occ = c.occurrences();
        let preserving = c.preserving_table();
        for (p, poly) in c.polygons.iter().enumerate() {
            let n = poly.len();
            for (s, &l) in poly.iter().enumerate() {
                for h in 0..2 {
                    let f = flag(p, s, h);
                    r0[f] = flag(p, s, 1 - h);
                    r2[f] = if h == 1 { flag(p, (s + 1) % n, 0) } else { flag(p, (s + n - 1) % n, 1) };
                    let i = l.unsigned_abs() as usize - 1;
                    let [a, b] = occ[i];
                    let other = if (a.polygon, a.side) == (p, s) { b } else { a };
                    let h2 = if preserving[i] { 1 - h } else { h };
                    r1[f] = flag(other.polygon, other.side, h2);
                }
            }
        }
        FlagAction { offsets, sizes, r0, r1, r2 }
    }

    pub fn len(&self) -> usize {
        self.r0.len()
    }

    /// `(polygon, side, half)` of a flag.
    pub fn decode(&self, f: usize) -> (usize, usize, usize) {
        let side_index = f / 2;
        let p = match self.offsets.binary_search(&side_index) {
            Ok(mut i) => {
                // skip empty polygons sharing the offset (never happens for valid complexes)
                while i + 1 < self.offsets.len() && self.offsets[i + 1] == side_index {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        (p, side_index - self.offsets[p], f % 2)
    }

    fn corner_of(&self, f: usize) -> (Corner, bool) {
        let (p, s, h) = self.decode(f);
        let position = if h == 0 { s } else { (s + 1) % self.sizes[p] };
        (Corner { polygon: p, position }, h == 0)
    }

    fn vertex_cycles(&self, c: &PolygonComplex) -> Vec<VertexCycle> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut corners = Vec::new();
            let mut crossings = Vec::new();
            let mut forward = Vec::new();
            let mut x = start;
            loop {
                seen[x] = true;
                seen[self.r2[x]] = true;
                let (corner, fwd) = self.corner_of(x);
                if !corners.contains(&corner) {
                    let (p, s, _) = self.decode(x);
                    corners.push(corner);
                    crossings.push(c.polygons[p][s].unsigned_abs());
                    forward.push(fwd);
                }
                x = self.r2[self.r1[x]];
                if x == start {
                    break;
                }
            }
            out.push(VertexCycle { corners, crossings, forward });
        }
        out
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    pub fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
