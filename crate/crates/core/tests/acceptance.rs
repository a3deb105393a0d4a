//! Acceptance criteria. Prints one PASS/FAIL line per criterion.
//!
//! Each criterion collects named sub-check failures. A sub-check listed in
//! `KNOWN_UNATTAINABLE` is reported as FAIL but does not fail the run; any
//! other failure (or exceeding a runtime budget) exits non-zero.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;

use kpack_core::catalog;
use kpack_core::covers::{self, CoverError};
use kpack_core::feasibility::{self, PackingSpec, Uniqueness};
use kpack_core::grafting;
use kpack_core::hyper_geom;
use kpack_core::tri_group::{self, SubgroupFilter, DEFAULT_NODE_CAP};
use kpack_core::PolygonComplex;

/// Sub-checks that cannot hold as stated; see the notes printed with them.
const KNOWN_UNATTAINABLE: &[&str] = &["area-ratio r=7"];

const IDENTITY_TOL: f64 = 1e-12;
const GEOMETRIC_TOL: f64 = 1e-9;

#[derive(Default)]
struct Report {
    failures: Vec<(String, String)>,
    notes: Vec<String>,
}

impl Report {
    fn check(&mut self, key: impl Into<String>, ok: bool, detail: impl Into<String>) {
        if !ok {
            self.failures.push((key.into(), detail.into()));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// Complexes built by earlier criteria, with their expected `(k, g)`.
#[derive(Default)]
struct Context {
    built: Vec<(PolygonComplex, u64, u64)>,
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn(&mut Context, &mut Report),
}

// ---------------------------------------------------------------- oracles

/// Fixed-point decimal arithmetic with `DIGITS` fractional digits.
struct Fixed {
    scale: BigInt,
}

impl Fixed {
    const DIGITS: u32 = 70;

    fn new() -> Self {
        Fixed { scale: BigInt::from(10).pow(Self::DIGITS) }
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b / &self.scale
    }

    fn atan_inv(&self, x: u32) -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = &self.scale / &x;
        let mut sum = BigInt::from(0);
        let mut n = 0u32;
        while power != BigInt::from(0) {
            let term = &power / BigInt::from(2 * n + 1);
            if n % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            n += 1;
        }
        sum
    }

    fn pi(&self) -> BigInt {
        BigInt::from(16) * self.atan_inv(5) - BigInt::from(4) * self.atan_inv(239)
    }

    fn sin(&self, theta: &BigInt) -> BigInt {
        let t2 = self.mul(theta, theta);
        let mut term = theta.clone();
        let mut sum = BigInt::from(0);
        let mut n = 0u32;
        while term != BigInt::from(0) {
            sum += &term;
            term = -self.mul(&term, &t2) / BigInt::from((2 * n + 2) * (2 * n + 3));
            n += 1;
        }
        sum
    }

    /// `1 / (2 sin(π/N))` as a decimal string with 50 fractional digits.
    fn inradius_cosh(&self, n: u32) -> String {
        let theta = self.pi() / BigInt::from(n);
        let value = &self.scale * &self.scale / (BigInt::from(2) * self.sin(&theta));
        let digits = value.to_string();
        let split = digits.len() - Self::DIGITS as usize;
        format!("{}.{}", &digits[..split], &digits[split..split + 50])
    }
}

/// Vertices (as class sizes), edges and faces of a side-pairing, from the
/// corner identifications alone, plus orientability by 2-colouring.
struct Topology {
    vertex_sizes: Vec<usize>,
    edges: usize,
    faces: usize,
    orientable: bool,
}

impl Topology {
    fn chi(&self) -> i64 {
        self.vertex_sizes.len() as i64 - self.edges as i64 + self.faces as i64
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn topology(polys: &[Vec<i32>]) -> Topology {
    let mut offset = vec![0];
    for p in polys {
        offset.push(offset.last().unwrap() + p.len());
    }
    let corner = |p: usize, i: usize| offset[p] + i % polys[p].len();
    let mut parent: Vec<usize> = (0..*offset.last().unwrap()).collect();
    let mut seen: std::collections::HashMap<u32, (usize, usize, bool)> = Default::default();
    // orientation constraints: (a, b, same)
    let mut constraints = Vec::new();
    for (p, poly) in polys.iter().enumerate() {
        for (s, &l) in poly.iter().enumerate() {
            let key = l.unsigned_abs();
            match seen.remove(&key) {
                None => {
                    seen.insert(key, (p, s, l > 0));
                }
                Some((q, t, positive)) => {
                    let same = positive == (l > 0);
                    let pairs = if same {
                        [(corner(q, t), corner(p, s + 1)), (corner(q, t + 1), corner(p, s))]
                    } else {
                        [(corner(q, t), corner(p, s)), (corner(q, t + 1), corner(p, s + 1))]
                    };
                    for (a, b) in pairs {
                        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                        parent[ra] = rb;
                    }
                    constraints.push((p, q, same));
                }
            }
        }
    }
    assert!(seen.is_empty(), "unpaired label");
    let mut sizes = std::collections::BTreeMap::new();
    for c in 0..parent.len() {
        *sizes.entry(find(&mut parent, c)).or_insert(0usize) += 1;
    }
    // 2-colour the polygons: equal signs keep orientation, opposite flip it
    let mut colour: Vec<Option<bool>> = vec![None; polys.len()];
    let mut orientable = true;
    colour[0] = Some(true);
    let mut changed = true;
    while changed {
        changed = false;
        for &(p, q, same) in &constraints {
            match (colour[p], colour[q]) {
                (Some(a), None) => {
                    colour[q] = Some(if same { a } else { !a });
                    changed = true;
                }
                (None, Some(b)) => {
                    colour[p] = Some(if same { b } else { !b });
                    changed = true;
                }
                (Some(a), Some(b)) => orientable &= (a == b) == same,
                _ => {}
            }
        }
    }
    Topology {
        vertex_sizes: sizes.into_values().collect(),
        edges: polys.iter().map(Vec::len).sum::<usize>() / 2,
        faces: polys.len(),
        orientable,
    }
}

/// Checks a complex against the extremality conditions using only the
/// oracle topology; returns the certified `(k, g, N)`.
fn oracle_extremal(polys: &[Vec<i32>]) -> Option<(u64, u64, u64)> {
    let n = polys[0].len();
    if n < 7 || polys.iter().any(|p| p.len() != n) {
        return None;
    }
    let t = topology(polys);
    if t.orientable || t.vertex_sizes.iter().any(|&s| s != 3) {
        return None;
    }
    Some((polys.len() as u64, (2 - t.chi()) as u64, n as u64))
}

fn certified(c: &PolygonComplex) -> Option<(u64, u64, u64)> {
    let r = c.verify_extremal();
    r.ok.then(|| (r.k.unwrap(), r.g.unwrap(), r.n.unwrap()))
}

// ------------------------------------------------------------- criteria

fn radius_table(_: &mut Context, rep: &mut Report) {
    let fixed = Fixed::new();
    for (k, g, n) in [(6, 3, 7), (3, 3, 8), (2, 3, 9), (1, 3, 12)] {
        let oracle = fixed.inradius_cosh(n);
        let bound = feasibility::packing_radius_bound(PackingSpec::new(k, g).unwrap()).unwrap();
        let expected: f64 = oracle[..25].parse().unwrap();
        let delta = (bound.cosh_r - expected).abs();
        rep.check(format!("({k},{g},{n})"), delta < IDENTITY_TOL && bound.n == Some(n as u64), format!("Δ = {delta:e}"));
        rep.note(format!("N={n}: cosh R = {oracle}"));
    }
}

fn primitive_certification(ctx: &mut Context, rep: &mut Report) {
    for (name, k, g) in [("X7", 6, 3), ("X8", 3, 3), ("X9", 2, 3), ("X12", 1, 3)] {
        let c = catalog::get(name).unwrap().complex();
        let got = certified(&c);
        let n = c.uniform_size().unwrap_or(0) as u64;
        rep.check(name, got == Some((k, g, n)), format!("{got:?}"));
        rep.check(format!("{name} kN"), k * n == 6 * g + 6 * k - 12, format!("kN = {}", k * n));
        rep.check(format!("{name} oracle"), oracle_extremal(c.polygons()) == got, "oracle disagrees");
        ctx.built.push((c, k, g));
    }
}

fn grafting_schedules(ctx: &mut Context, rep: &mut Report) {
    for n in 7..=31u64 {
        let trace = match grafting::build_primitive_traced(n) {
            Ok(t) => t,
            Err(e) => {
                rep.check(format!("N={n}"), false, e.to_string());
                continue;
            }
        };
        let (k, g) = feasibility::primitive_pair(n).unwrap();
        let got = certified(&trace.result);
        rep.check(format!("N={n}"), got == Some((k, g, n)), format!("{got:?} vs ({k},{g},{n})"));
        let mut chi = topology(trace.seed.polygons()).chi();
        for step in &trace.grafts {
            let t = topology(step.result.polygons());
            rep.check(
                format!("N={n} step {}", step.step),
                t.chi() == chi - 1 && !t.orientable,
                format!("χ {chi} -> {}", t.chi()),
            );
            chi = t.chi();
        }
        ctx.built.push((trace.result, k, g));
    }
}

fn existence_grid(ctx: &mut Context, rep: &mut Report) {
    let mut made = 0;
    for g in 3..=12u64 {
        let m = 6 * (g - 2);
        for k in 1..=m + 6 {
            let spec = PackingSpec::new(k as i64, g as i64).unwrap();
            let result = covers::realize_spec(spec);
            if m % k == 0 {
                let n = (6 * g + 6 * k - 12) / k;
                match result {
                    Ok(c) => {
                        let got = certified(&c);
                        rep.check(format!("({k},{g})"), got == Some((k, g, n)), format!("{got:?}"));
                        rep.check(format!("({k},{g}) oracle"), oracle_extremal(c.polygons()) == Some((k, g, n)), "oracle");
                        ctx.built.push((c, k, g));
                        made += 1;
                    }
                    Err(e) => rep.check(format!("({k},{g})"), false, e.to_string()),
                }
            } else {
                rep.check(
                    format!("({k},{g}) infeasible"),
                    matches!(result, Err(CoverError::Infeasible(_))),
                    format!("{result:?}"),
                );
            }
        }
    }
    rep.note(format!("{made} complexes certified"));
}

fn double_covers(ctx: &mut Context, rep: &mut Report) {
    for (c, k, g) in &ctx.built {
        let (k, g) = (*k, *g);
        let tag = format!("({k},{g}) {}", c.name().unwrap_or(""));
        let n = c.uniform_size().unwrap() as u64;
        let d = match covers::orientation_double_cover(c) {
            Ok(d) => d,
            Err(e) => {
                rep.check(tag, false, e.to_string());
                continue;
            }
        };
        let t = topology(d.polygons());
        let genus = (2 - t.chi()) / 2;
        let (k2, g2) = (2 * k, g - 1);
        rep.check(
            format!("{tag} cover"),
            t.orientable
                && genus as u64 == g2
                && d.polygon_count() as u64 == k2
                && t.vertex_sizes.iter().all(|&s| s == 3)
                && n * k2 == 12 * g2 + 6 * k2 - 12,
            format!("orientable {} genus {genus} faces {}", t.orientable, d.polygon_count()),
        );
        let plus = tri_group::complex_to_subgroup(c).and_then(|r| tri_group::canonical_fuchsian(&r));
        match plus {
            Ok(p) => rep.check(
                format!("{tag} K+"),
                p.quotient_orientable && p.genus == Some(g2) && p.index() as u64 == 2 * k2 * n,
                format!("orientable {} genus {:?} index {}", p.quotient_orientable, p.genus, p.index()),
            ),
            Err(e) => rep.check(format!("{tag} K+"), false, e.to_string()),
        }
    }
    rep.note(format!("{} complexes covered", ctx.built.len()));
}

fn group_route(_: &mut Context, rep: &mut Report) {
    let filter = SubgroupFilter { torsion_free: true, proper: true, nonorientable: true };
    for (n, index, k) in [(12u64, 24usize, 1u64), (7, 84, 6)] {
        let pres = tri_group::triangle_presentation(2, 3, n, true).unwrap();
        let recs = match tri_group::low_index_subgroups(&pres, index, filter, DEFAULT_NODE_CAP) {
            Ok(r) => r,
            Err(e) => {
                rep.check(format!("N={n}"), false, e.to_string());
                continue;
            }
        };
        let genus3 = recs.iter().filter(|r| r.genus == Some(3)).count();
        rep.check(format!("N={n} records"), genus3 >= 1, format!("{} records", recs.len()));
        for (i, r) in recs.iter().enumerate() {
            let got = tri_group::subgroup_to_complex(r).ok().and_then(|c| certified(&c));
            rep.check(format!("N={n} record {i}"), got == Some((k, 3, n)), format!("{got:?}"));
        }
        rep.note(format!("Δ±(2,3,{n}) index {index}: {} records", recs.len()));
        if n == 7 {
            let x7 = tri_group::complex_to_subgroup(&catalog::get("X7").unwrap().complex()).unwrap();
            rep.check("X7 index", x7.index() == 84, format!("{}", x7.index()));
            let found: BTreeSet<_> = recs.iter().map(|r| r.table.conjugacy_canonical()).collect();
            rep.check("X7 among records", found.contains(&x7.table.conjugacy_canonical()), "missing");
        }
    }
}

/// `1 - 1/p - 1/q - 1/r` as a reduced fraction.
fn mu(p: i64, q: i64, r: i64) -> (i64, i64) {
    let (num, den) = (p * q * r - q * r - p * r - p * q, p * q * r);
    let g = gcd(num, den);
    (num / g, den / g)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn dual_extremality(_: &mut Context, rep: &mut Report) {
    let filter = SubgroupFilter { torsion_free: true, proper: true, nonorientable: false };
    for (r, index, genus, lifted) in [(9u64, 18usize, 4u64, (1, 4, 18)), (7, 42, 6, (3, 6, 14))] {
        let pres = tri_group::triangle_presentation(3, 3, r, true).unwrap();
        match tri_group::low_index_subgroups(&pres, index, filter, DEFAULT_NODE_CAP) {
            Ok(recs) => {
                let hits: Vec<_> = recs.iter().filter(|x| x.genus == Some(genus)).collect();
                rep.check(format!("Δ±(3,3,{r}) index {index}"), !hits.is_empty(), format!("{} records", recs.len()));
                rep.note(format!("Δ±(3,3,{r}) index {index}: {} torsion-free proper records", recs.len()));
                if let Some(h) = hits.first() {
                    let got = tri_group::lift_to_233(h)
                        .and_then(|up| tri_group::subgroup_to_complex(&up))
                        .ok()
                        .and_then(|c| certified(&c));
                    rep.check(format!("lift r={r}"), got == Some(lifted), format!("{got:?}"));
                }
            }
            Err(e) => rep.check(format!("Δ±(3,3,{r}) index {index}"), false, e.to_string()),
        }
        let (a, b) = (mu(3, 3, r as i64), mu(2, 3, r as i64));
        let ratio = (a.0 * b.1, a.1 * b.0);
        let g = gcd(ratio.0, ratio.1);
        let ratio = (ratio.0 / g, ratio.1 / g);
        rep.check(
            format!("area-ratio r={r}"),
            ratio == (4, 1) && tri_group::area_ratio((3, 3, r), (2, 3, r)) == (4, 1),
            format!("μ(3,3,{r})/μ(2,3,{r}) = {}/{} (library {:?})", ratio.0, ratio.1, tri_group::area_ratio((3, 3, r), (2, 3, r))),
        );
    }
}

fn uniqueness(_: &mut Context, rep: &mut Report) {
    let arithmetic: BTreeSet<u64> = [7, 8, 9, 10, 11, 12, 14, 16, 18, 24, 30].into();
    let mut count = 0;
    for g in 3..=40u64 {
        let m = 6 * (g - 2);
        for k in (1..=m).filter(|k| m % k == 0) {
            let n = (6 * g + 6 * k - 12) / k;
            let u = feasibility::uniqueness_class(PackingSpec::new(k as i64, g as i64).unwrap()).unwrap();
            let expected = if arithmetic.contains(&n) { Uniqueness::PossiblyMultiple } else { Uniqueness::Unique };
            rep.check(format!("({k},{g})"), u == expected, format!("{u:?} for N={n}"));
            if k == 1 {
                rep.check(format!("k=1 g={g}"), (u == Uniqueness::Unique) == (g > 6), format!("{u:?}"));
            }
            count += 1;
        }
    }
    rep.note(format!("{count} feasible pairs"));
}

fn numeric_layer(_: &mut Context, rep: &mut Report) {
    for name in ["X7", "X12"] {
        let c = catalog::get(name).unwrap().complex();
        let layout = match hyper_geom::realize(&c) {
            Ok(l) => l,
            Err(e) => {
                rep.check(name, false, e.to_string());
                continue;
            }
        };
        let n = layout.geometry.n;
        // every pairing maps its partner's endpoints onto its own
        let mut edge: f64 = 0.0;
        for p in &layout.pairings {
            let a = &layout.placements[p.first.0].vertices;
            let b = &layout.placements[p.second.0].vertices;
            let (x, y) = (a[p.first.1], a[(p.first.1 + 1) % n]);
            let (x, y) = if p.preserving { (y, x) } else { (x, y) };
            let (u, v) = (p.isometry.apply(b[p.second.1]), p.isometry.apply(b[(p.second.1 + 1) % n]));
            edge = edge.max((u - x).norm()).max((v - y).norm());
            rep.check(format!("{name} det {}", p.label), (p.isometry.det().norm() - 1.0).abs() < IDENTITY_TOL, "det");
        }
        rep.check(format!("{name} edges"), edge < GEOMETRIC_TOL, format!("{edge:e}"));
        let h = hyper_geom::holonomy_check(&layout);
        rep.check(format!("{name} holonomy"), h.holonomy < GEOMETRIC_TOL, format!("{:e}", h.holonomy));
        rep.check(format!("{name} angles"), h.angle < 1e-10, format!("{:e}", h.angle));
        let area = PI * (n as f64 - 6.0) / 3.0;
        for (p, pl) in layout.placements.iter().enumerate() {
            let got = hyper_geom::polygon_area(pl.center(), &pl.vertices);
            rep.check(format!("{name} area {p}"), (got - area).abs() < GEOMETRIC_TOL, format!("{got}"));
        }
        rep.note(format!("{name}: edge {edge:.1e}, holonomy {:.1e}", h.holonomy));
    }
    let mut worst: f64 = 0.0;
    for n in 7..=30 {
        let d = hyper_geom::boroczky_equality_check(n).unwrap();
        // both sides reduce to 6(cosh r - 1)/(N - 6)
        let cosh_r = 1.0 / (2.0 * (PI / n as f64).sin());
        let closed = 6.0 * (cosh_r - 1.0) / (n as f64 - 6.0);
        rep.check(format!("density N={n}"), d.residual < IDENTITY_TOL && (d.lhs - closed).abs() < IDENTITY_TOL, format!("{d:?}"));
        worst = worst.max(d.residual);
        let g = hyper_geom::regular_ngon(n).unwrap();
        let area = hyper_geom::polygon_area(Complex64::new(0.0, 0.0), &g.vertices);
        rep.check(format!("Gauss-Bonnet N={n}"), (area - PI * (n as f64 - 6.0) / 3.0).abs() < GEOMETRIC_TOL, format!("{area}"));
    }
    rep.note(format!("density residual ≤ {worst:.1e}"));
}

fn matchings(free: &mut Vec<usize>, pairs: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if free.is_empty() {
        out.push(pairs.clone());
        return;
    }
    let a = free.remove(0);
    for i in 0..free.len() {
        let b = free.remove(i);
        pairs.push((a, b));
        matchings(free, pairs, out);
        pairs.pop();
        free.insert(i, b);
    }
    free.insert(0, a);
}

fn exhaustive_twelve_gon(_: &mut Context, rep: &mut Report) {
    let mut all = Vec::new();
    matchings(&mut (0..12).collect(), &mut Vec::new(), &mut all);
    rep.check("matchings", all.len() == 10395, format!("{}", all.len()));
    let (mut cases, mut hits, mut disagreements) = (0u64, 0u64, 0u64);
    for m in &all {
        for signs in 0..64u32 {
            let mut poly = vec![0i32; 12];
            for (i, &(a, b)) in m.iter().enumerate() {
                let l = i as i32 + 1;
                poly[a] = l;
                poly[b] = if signs >> i & 1 == 1 { -l } else { l };
            }
            cases += 1;
            let polys = vec![poly];
            let c = PolygonComplex::from_polygons(polys.clone()).unwrap();
            let got = certified(&c);
            if got != oracle_extremal(&polys) {
                disagreements += 1;
            }
            if let Some(kgn) = got {
                hits += 1;
                let t = topology(&polys);
                let ok = kgn == (1, 3, 12) && t.vertex_sizes.len() == 4 && t.edges == 6 && t.faces == 1 && t.chi() == -1;
                rep.check(format!("hit {:?}", polys[0]), ok, format!("{kgn:?}"));
            }
        }
    }
    rep.check("cases", cases == 665_280, format!("{cases}"));
    rep.check("hits", hits >= 1, "no certified 12-gon");
    rep.check("oracle agreement", disagreements == 0, format!("{disagreements} disagreements"));
    rep.note(format!("{cases} pairings, {hits} certified"));
}

fn classical(_: &mut Context, rep: &mut Report) {
    for (name, word, chi, orientable) in [
        ("sphere", vec![1, 1], 2, true),
        ("projective plane", vec![1, -1], 1, false),
        ("torus", vec![1, 2, 1, 2], 0, true),
        ("Klein bottle", vec![1, 2, -1, 2], 0, false),
    ] {
        let c = PolygonComplex::from_polygons(vec![word.clone()]).unwrap();
        let inv = c.invariants();
        let t = topology(&[word]);
        rep.check(
            name,
            inv.euler_characteristic == chi && inv.orientable == orientable && t.chi() == chi && t.orientable == orientable,
            format!("χ {} orientable {}", inv.euler_characteristic, inv.orientable),
        );
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "radius-bound table", budget: secs(1), run: radius_table },
        Criterion { id: 2, name: "primitive surface certification", budget: secs(1), run: primitive_certification },
        Criterion { id: 3, name: "grafting schedules N=7..31", budget: secs(10), run: grafting_schedules },
        Criterion { id: 4, name: "existence grid g=3..12", budget: secs(120), run: existence_grid },
        Criterion { id: 5, name: "orientation double covers", budget: secs(60), run: double_covers },
        Criterion { id: 6, name: "group-theoretic route", budget: secs(300), run: group_route },
        Criterion { id: 7, name: "dual extremality (long-running)", budget: secs(600), run: dual_extremality },
        Criterion { id: 8, name: "uniqueness predicate", budget: secs(1), run: uniqueness },
        Criterion { id: 9, name: "numeric layer", budget: secs(5), run: numeric_layer },
        Criterion { id: 10, name: "exhaustive 12-gon search", budget: secs(120), run: exhaustive_twelve_gon },
        Criterion { id: 11, name: "classical fixtures", budget: secs(1), run: classical },
    ];
    let mut ctx = Context::default();
    let mut unexpected = 0;
    for c in &criteria {
        let mut rep = Report::default();
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| (c.run)(&mut ctx, &mut rep)));
        let elapsed = start.elapsed();
        if let Err(e) = outcome {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            rep.check("panic", false, msg.unwrap_or_default());
        }
        rep.check("runtime", elapsed <= c.budget, format!("{elapsed:.2?} > {:.0?}", c.budget));
        let status = if rep.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} [{:>2}] {} ({elapsed:.2?})", c.id, c.name);
        for n in &rep.notes {
            println!("          {n}");
        }
        for (key, detail) in rep.failures.iter().take(10) {
            let known = KNOWN_UNATTAINABLE.contains(&key.as_str());
            println!("          {} {key}: {detail}", if known { "known:" } else { "failed:" });
        }
        unexpected += rep.failures.iter().filter(|(k, _)| !KNOWN_UNATTAINABLE.contains(&k.as_str())).count();
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failures");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
