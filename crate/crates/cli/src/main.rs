//! `kpack`: command-line front end for extremal packing surfaces.
//!
//! Complex files may be read from and written to `-` (stdin/stdout), so
//! commands compose in pipelines.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kpack_core::covers::{self, CoverError, VoltageAssignment};
use kpack_core::feasibility::{self, FeasibilityError, Uniqueness};
use kpack_core::grafting::{self, GraftError, GraftVariant};
use kpack_core::hyper_geom::{self, GeomError};
use kpack_core::tri_group::{self, GroupError, SubgroupFilter, SubgroupRecord};
use kpack_core::{catalog, ExtremalityReport, PackingSpec, PolygonComplex};
use serde_json::json;

#[derive(Parser)]
#[command(name = "kpack", version, about = "Extremal disc packings on non-orientable hyperbolic surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct KG {
    /// Number of discs
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    /// Non-orientable genus
    #[arg(long, allow_negative_numbers = true)]
    g: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Output {
    /// Output file, `-` for stdout
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Upper bound on the packing radius
    Bound(KG),
    /// Whether extremal k-packings exist in genus g
    Feasible(KG),
    /// Smallest (k, g) with cell size N
    Primitive {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Parameters (k, g) sharing cell size N
    Line {
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 10)]
        jmax: u64,
        #[arg(long)]
        json: bool,
    },
    /// Pairs {k1, k2} for which a genus-g surface can be extremal for both
    Dual {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        json: bool,
    },
    /// Whether the extremal surface of (k, g) is known to carry one packing
    Unique(KG),
    /// Primitive extremal complex with cell size N, by grafting
    Build {
        #[arg(long = "N")]
        n: u64,
        /// Print the graft steps to stderr
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Extremal complex for (k, g), by grafting and cyclic covers
    Realize {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, allow_negative_numbers = true)]
        g: i64,
        #[command(flatten)]
        out: Output,
    },
    /// Certify a complex file; exits 0 iff it is extremal
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Apply an edge-graft at an eligible vertex cycle
    Graft {
        file: PathBuf,
        #[arg(long)]
        variant: String,
        /// Position among the eligible sites
        #[arg(long, default_value_t = 0)]
        site: usize,
        /// List the eligible sites instead of grafting
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Orientable two-sheeted cover
    DoubleCover {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// n-sheeted cyclic cover; without voltages, the first connected
    /// non-orientable one is searched for
    CyclicCover {
        file: PathBuf,
        #[arg(long)]
        n: u64,
        /// One voltage per edge label, comma separated
        #[arg(long, value_delimiter = ',')]
        voltages: Option<Vec<u64>>,
        #[command(flatten)]
        out: Output,
    },
    /// Low-index subgroups of the extended triangle group Δ±(p, q, r)
    Enumerate {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        torsion_free: bool,
        #[arg(long)]
        proper: bool,
        #[arg(long)]
        nonorientable: bool,
        #[arg(long, default_value_t = tri_group::DEFAULT_NODE_CAP)]
        node_cap: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Subgroup of Δ±(2, 3, N) attached to an extremal complex
    ToGroup {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Complex of a torsion-free proper subgroup record
    FromGroup {
        file: PathBuf,
        /// Entry to use when the file holds a list of records
        #[arg(long, default_value_t = 0)]
        entry: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Disk picture of a complex
    Render {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
        /// Also write the layout (coordinates and pairing matrices) as JSON
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// List the bundled complexes, or print one
    Catalog { name: Option<String> },
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn rejected(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn cap(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<FeasibilityError> for Failure {
    fn from(e: FeasibilityError) -> Self {
        match e {
            FeasibilityError::Infeasible { k, six_g_minus_2, .. } => {
                Failure::rejected(format!("infeasible: {k} ∤ {six_g_minus_2}"))
            }
            FeasibilityError::CellSizeTooSmall(_) => Failure::rejected(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<GraftError> for Failure {
    fn from(e: GraftError) -> Self {
        match e {
            GraftError::UnknownVariant(_) => Failure::usage(e.to_string()),
            _ => Failure::rejected(e.to_string()),
        }
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::Infeasible(f) => f.into(),
            CoverError::Graft(g) => g.into(),
            CoverError::ZeroModulus | CoverError::VoltageCount { .. } => Failure::usage(e.to_string()),
            _ => Failure::rejected(e.to_string()),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded { .. } | GroupError::SearchCapExceeded { .. } => Failure::cap(e.to_string()),
            GroupError::TriangleDomain { .. } | GroupError::ZeroIndex => Failure::usage(e.to_string()),
            _ => Failure::rejected(e.to_string()),
        }
    }
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure::rejected(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    if path == Path::new("-") {
        io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::usage(format!("stdout: {e}")))
    } else {
        fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }
}

fn parse_complex(path: &Path, text: &str) -> Result<PolygonComplex, Failure> {
    PolygonComplex::parse(text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_complex(path: &Path) -> Result<PolygonComplex, Failure> {
    parse_complex(path, &read_input(path)?)
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn spec(k: i64, g: i64) -> Result<PackingSpec, Failure> {
    Ok(PackingSpec::new(k, g)?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Bound(a) => {
            let p = feasibility::packing_radius_bound(spec(a.k, a.g)?)?;
            if a.json {
                let v = json!({
                    "k": a.k, "g": a.g, "coshR": p.cosh_r, "R": p.r,
                    "cellSize": [p.cell_size.numerator, p.cell_size.denominator],
                    "N": p.n, "index": p.index,
                });
                print!("{}", pretty(&v));
            } else {
                println!("cosh R = {:.17}", p.cosh_r);
                println!("R = {:.17}", p.r);
                match p.n {
                    Some(n) => println!("N = {n}"),
                    None => println!("N = {}/{} (not integral)", p.cell_size.numerator, p.cell_size.denominator),
                }
            }
            Ok(0)
        }
        Command::Feasible(a) => {
            let s = spec(a.k, a.g)?;
            let feasible = feasibility::is_feasible(s)?;
            if a.json {
                let n = feasible.then(|| feasibility::cell_size(s)).transpose()?;
                print!("{}", pretty(&json!({"k": a.k, "g": a.g, "feasible": feasible, "N": n})));
                return Ok(if feasible { 0 } else { 2 });
            }
            if feasible {
                println!("feasible: N = {}", feasibility::cell_size(s)?);
                Ok(0)
            } else {
                Err(Failure::rejected(format!("infeasible: {} ∤ {}", s.k(), s.six_g_minus_2()?)))
            }
        }
        Command::Primitive { n, json } => {
            let (k, g) = feasibility::primitive_pair(n)?;
            if json {
                print!("{}", pretty(&json!({"N": n, "k": k, "g": g})));
            } else {
                println!("k = {k}, g = {g}");
            }
            Ok(0)
        }
        Command::Line { n, jmax, json } => {
            let line = feasibility::line_ln(n, jmax)?;
            if json {
                print!("{}", pretty(&line));
            } else {
                for (k, g) in &line.entries {
                    println!("{k} {g}");
                }
            }
            Ok(0)
        }
        Command::Dual { g, json } => {
            let mut rows = Vec::new();
            for (k1, k2) in feasibility::dual_extremal_pairs(g) {
                let n = |k: u64| feasibility::cell_size(spec(k as i64, g as i64)?).map_err(Failure::from);
                rows.push(json!([{"k": k1, "N": n(k1)?}, {"k": k2, "N": n(k2)?}]));
            }
            if json {
                print!("{}", pretty(&rows));
            } else {
                for r in &rows {
                    println!("k = {} (N = {}), k = {} (N = {})", r[0]["k"], r[0]["N"], r[1]["k"], r[1]["N"]);
                }
            }
            Ok(0)
        }
        Command::Unique(a) => {
            let u = feasibility::uniqueness_class(spec(a.k, a.g)?)?;
            if a.json {
                print!("{}", pretty(&json!({"k": a.k, "g": a.g, "uniqueness": u})));
            } else {
                println!("{}", if u == Uniqueness::Unique { "unique" } else { "possibly multiple" });
            }
            Ok(0)
        }
        Command::Build { n, trace, out } => {
            let t = grafting::build_primitive_traced(n)?;
            if trace {
                for r in &t.grafts {
                    eprintln!("step {}: {} at site {} -> {} polygons", r.step, r.variant, r.site, r.result.polygon_count());
                }
            }
            write_output(&out.output, &t.result.serialize())?;
            Ok(0)
        }
        Command::Realize { k, g, out } => {
            let c = covers::realize_spec(spec(k, g)?)?;
            write_output(&out.output, &c.serialize())?;
            Ok(0)
        }
        Command::Verify { file, json } => {
            let text = read_input(&file)?;
            let report = match PolygonComplex::parse(&text) {
                Ok(c) => c.verify_extremal(),
                Err(e) => match ExtremalityReport::from_parse_error(&e) {
                    Some(r) => r,
                    None => return Err(Failure::usage(format!("{}: {e}", file.display()))),
                },
            };
            if json {
                print!("{}", pretty(&report));
            } else if report.ok {
                println!("ok: k = {}, g = {}, N = {}", report.k.unwrap(), report.g.unwrap(), report.n.unwrap());
            } else {
                println!("not extremal");
                for f in &report.failures {
                    println!("  {}", serde_json::to_string(f).expect("serializable"));
                }
            }
            Ok(if report.ok { 0 } else { 2 })
        }
        Command::Graft { file, variant, site, list, out } => {
            let variant: GraftVariant = variant.parse()?;
            let c = read_complex(&file)?;
            if list {
                let sites = grafting::eligible_sites(&c, variant)?;
                let v: Vec<_> = sites
                    .iter()
                    .enumerate()
                    .map(|(i, s)| json!({"site": i, "cycle": s.cycle_index, "labels": s.cycle.crossings, "shared_edge": s.shared_edge}))
                    .collect();
                write_output(&out.output, &pretty(&v))?;
                return Ok(0);
            }
            let g = grafting::apply_nth(&c, variant, site)?;
            write_output(&out.output, &g.serialize())?;
            Ok(0)
        }
        Command::DoubleCover { file, out } => {
            let c = covers::orientation_double_cover(&read_complex(&file)?)?;
            write_output(&out.output, &c.serialize())?;
            Ok(0)
        }
        Command::CyclicCover { file, n, voltages, out } => {
            let c = read_complex(&file)?;
            let cover = match voltages {
                Some(v) => covers::cyclic_cover(&c, &VoltageAssignment::new(n, v)?)?,
                None => covers::find_nonorientable_cyclic_cover(&c, n)?,
            };
            write_output(&out.output, &cover.serialize())?;
            Ok(0)
        }
        Command::Enumerate { p, q, r, index, torsion_free, proper, nonorientable, node_cap, out } => {
            let pres = tri_group::triangle_presentation(p, q, r, true)?;
            let filter = SubgroupFilter { torsion_free, proper, nonorientable };
            let recs = tri_group::low_index_subgroups(&pres, index, filter, node_cap)?;
            eprintln!("{} subgroups", recs.len());
            write_output(&out.output, &pretty(&recs))?;
            Ok(0)
        }
        Command::ToGroup { file, out } => {
            let rec = tri_group::complex_to_subgroup(&read_complex(&file)?)?;
            write_output(&out.output, &pretty(&rec))?;
            Ok(0)
        }
        Command::FromGroup { file, entry, out } => {
            let text = read_input(&file)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            let value = match value {
                serde_json::Value::Array(mut items) => {
                    if entry >= items.len() {
                        return Err(Failure::usage(format!("{} holds {} records", file.display(), items.len())));
                    }
                    items.swap_remove(entry)
                }
                v => v,
            };
            let rec: SubgroupRecord =
                serde_json::from_value(value).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            let c = tri_group::subgroup_to_complex(&rec)?;
            write_output(&out.output, &c.serialize())?;
            Ok(0)
        }
        Command::Render { file, out, layout } => {
            let c = read_complex(&file)?;
            let l = hyper_geom::realize(&c)?;
            let h = hyper_geom::holonomy_check(&l);
            eprintln!("holonomy residual {:e}, angle residual {:e}", h.holonomy, h.angle);
            write_output(&out.output, &hyper_geom::render_svg(&l))?;
            if let Some(path) = layout {
                write_output(&path, &pretty(&l.to_json()))?;
            }
            Ok(0)
        }
        Command::Catalog { name } => match name {
            None => {
                for e in catalog::entries() {
                    let (k, g, n) = e.expected;
                    println!("{:<5} k={k} g={g} N={n} {:?}", e.name, e.provenance);
                }
                Ok(0)
            }
            Some(name) => {
                let e = catalog::get(&name).ok_or_else(|| Failure::usage(format!("no catalog entry {name}")))?;
                print!("{}", e.source);
                Ok(0)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("kpack: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
