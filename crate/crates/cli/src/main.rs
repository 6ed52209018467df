use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use geoq::constructions::{affine_geometry, blowup, catalogue, ssg, CATALOGUE};
use geoq::coset::{coseteg_family, FiniteGroup};
use geoq::diagram::basic_diagram;
use geoq::format::{
    parse_geometry, parse_graph, parse_group, parse_partition, serialize_geometry, serialize_group, serialize_partition,
};
use geoq::graph::SimpleGraph;
use geoq::iso::isomorphism;
use geoq::perm::DEFAULT_GROUP_CAP;
use geoq::report::Report;
use geoq::reproduce::{self, default_golden_dir, golden_files, Config};
use geoq::shadow::shadowable_lift;
use geoq::suites::DEFAULT_INSTANCES;
use geoq::tits::{AxiomSummary, OrbitQuotient};
use geoq::{GeoError, Partition, PermGroup, Pregeometry, Projection};

const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;
const DEFAULT_MAX_FLAGS: usize = 2_000_000;

#[derive(Parser)]
#[command(name = "geoq", version, about = "Quotients of finite incidence geometries")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Opts {
    /// Print sorted key=value lines instead of a table
    #[arg(long, global = true)]
    machine: bool,
    /// Largest permutation group that may be enumerated
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP)]
    max_group_order: usize,
    /// Largest number of flags a geometry may have
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_FLAGS)]
    max_flags: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a geometry file and decide its basic properties
    Check { geometry: PathBuf },
    /// Quotient by a partition or by the orbits of a group
    Quotient {
        geometry: PathBuf,
        #[arg(long, conflicts_with = "orbits", required_unless_present = "orbits")]
        partition: Option<PathBuf>,
        #[arg(long)]
        orbits: Option<PathBuf>,
        /// Replace the group by its normal closure in this overgroup
        #[arg(long, requires = "orbits")]
        normal_closure: Option<PathBuf>,
        /// Write the quotient here instead of printing it
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate the lifting axioms for an orbit-quotient
    Axioms { geometry: PathBuf, group: PathBuf },
    /// Print the basic diagram with a witness flag per edge
    Diagram { geometry: PathBuf },
    /// Generate example geometries
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
    /// Re-run the worked examples and lemma suites
    Reproduce {
        /// Scenario names; all when omitted
        names: Vec<String>,
        #[arg(long)]
        golden_dir: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_INSTANCES)]
        instances: usize,
        /// List the scenarios and exit
        #[arg(long)]
        list: bool,
    },
    /// Decide whether two geometries are isomorphic
    Iso { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand)]
enum Gen {
    /// Subsets of sizes 1..=k of a v-set under inclusion
    Ssg { v: usize, k: usize },
    /// Flats of AG(d,q); --out-dir also writes the translation group
    Affine {
        d: usize,
        q: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Blow-up of a geometry by a graph file or one of k2, k3, p3, 2k2, c5
    Blowup { geometry: PathBuf, graph: String },
    /// Lift of a shadowable geometry with parts of size n and j-subsets
    Lift { geometry: PathBuf, n: usize, j: usize },
    /// Coset geometry of Z_n^3 with its group and normal subgroup
    Coseteg {
        n: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Named example files, or all of them
    Catalogue {
        name: Option<String>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Cap(String),
    Other(String),
}

impl From<GeoError> for Failure {
    fn from(e: GeoError) -> Self {
        if e.is_cap_exceeded() {
            Failure::Cap(e.to_string())
        } else if matches!(e, GeoError::Parse { .. }) {
            Failure::Usage(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: geoq::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_geometry(path: &Path, opts: &Opts) -> Result<Pregeometry, Failure> {
    let g = in_file(path, parse_geometry(&read(path)?))?;
    g.require_flags_at_most(opts.max_flags)?;
    Ok(g)
}

fn load_group(path: &Path, geom: &Pregeometry, opts: &Opts) -> Result<PermGroup, Failure> {
    let group = in_file(path, parse_group(geom, &read(path)?, opts.max_group_order))?;
    group.order()?;
    Ok(group)
}

fn emit(report: &Report, opts: &Opts) -> Outcome {
    print!("{}", if opts.machine { report.machine() } else { report.human() });
    Ok(report.all_ok())
}

fn cmd_check(path: &Path, opts: &Opts) -> Outcome {
    let g = load_geometry(path, opts)?;
    let mut r = Report::new();
    r.value("rank", g.rank());
    r.value("elements", g.num_elements());
    match g.validate() {
        Ok(()) => {
            r.flag("valid", true);
        }
        Err(v) => {
            r.flag("valid", false).witness = Some(v.to_string());
            return emit(&r, opts);
        }
    }
    let geometry = r.timed(
        "geometry",
        || g.is_geometry(),
        |r, v| {
            r.verdict("geometry", v, |f| format!("maximal flag {}", g.describe_flag(f)));
        },
    );
    if geometry.holds() {
        r.timed(
            "firm",
            || g.is_firm(),
            |r, v| {
                if let Ok(v) = v {
                    r.verdict("firm", v, |w| {
                        format!(
                            "{} lies only in {}",
                            g.describe_flag(&w.flag),
                            g.describe_flag(&w.chamber)
                        )
                    });
                }
            },
        )?;
        let d = basic_diagram(&g)?;
        r.value("diagram", &d);
    }
    r.flag("connected", g.is_connected()).witness =
        (!g.is_connected()).then(|| format!("{} components", g.components().len()));
    r.timed(
        "residually_connected",
        || g.is_residually_connected(),
        |r, v| {
            r.verdict("residually_connected", v, |f| {
                format!("residue of {}", g.describe_flag(f))
            });
        },
    );
    emit(&r, opts)
}

fn cmd_quotient(
    path: &Path,
    partition: Option<&Path>,
    orbits: Option<&Path>,
    normal_closure: Option<&Path>,
    output: Option<&Path>,
    opts: &Opts,
) -> Outcome {
    let g = load_geometry(path, opts)?;
    let mut r = Report::new();
    let (projection, group) = match (partition, orbits) {
        (Some(pp), _) => {
            let part: Partition = in_file(pp, parse_partition(&g, &read(pp)?))?;
            (Projection::new(&g, part)?, None)
        }
        (None, Some(gp)) => {
            let mut group = load_group(gp, &g, opts)?;
            if let Some(op) = normal_closure {
                let over = load_group(op, &g, opts)?;
                group = over.normal_closure(&group)?;
                r.value("normal_closure_order", group.order()?);
            }
            (Projection::orbit_quotient(&g, &group)?, Some(group))
        }
        (None, None) => return Err(Failure::Usage("give --partition or --orbits".into())),
    };
    let q = projection.quotient();
    q.require_flags_at_most(opts.max_flags)?;
    r.value("blocks", q.num_elements());
    r.value("identity", projection.partition().is_singletons());
    let qgeom = q.is_geometry();
    r.verdict("quotient_geometry", &qgeom, |f| {
        format!("maximal flag {} is not a chamber", q.describe_flag(f))
    });
    r.verdict("flagslift", &projection.check_flagslift(), |f| {
        format!("{} has no lift", q.describe_flag(f))
    });
    r.verdict("cover", &projection.is_cover(), |w| w.describe(&projection));
    r.verdict("pq1", &projection.check_pq1(), |(f, b)| {
        format!("flag {} block {}", g.describe_flag(f), q.name(*b))
    });
    r.verdict("pq2", &projection.check_pq2(), |f| g.describe_flag(f));
    r.value("min_block_distance", projection.min_block_distance());
    if let Some(group) = group {
        let oq = OrbitQuotient::new(&g, group)?;
        let summary = AxiomSummary::evaluate(&oq)?;
        for name in ["tq1", "tq2prime", "tq2doubleprime", "tq3"] {
            if let Some(v) = summary.get(name) {
                r.verdict(name, v, Clone::clone);
            }
        }
    }
    let text = serialize_geometry(q);
    match output {
        Some(out) => write(out, &text)?,
        None if !opts.machine => println!("{text}"),
        None => {}
    }
    emit(&r, opts)
}

fn cmd_axioms(path: &Path, group: &Path, opts: &Opts) -> Outcome {
    let g = load_geometry(path, opts)?;
    let a = load_group(group, &g, opts)?;
    let oq = OrbitQuotient::new(&g, a)?;
    let summary = AxiomSummary::evaluate(&oq)?;
    let mut r = Report::new();
    for (name, v) in &summary.rows {
        r.verdict(*name, v, Clone::clone);
    }
    emit(&r, opts)
}

fn cmd_diagram(path: &Path, opts: &Opts) -> Outcome {
    let g = load_geometry(path, opts)?;
    let d = basic_diagram(&g)?;
    let mut r = Report::new();
    let name = |t: geoq::TypeId| g.type_name(t).to_string();
    let edges: Vec<String> = d
        .edges()
        .iter()
        .map(|&(i, j)| format!("{}-{}", name(i), name(j)))
        .collect();
    r.value("edges", edges.join(" "));
    for (i, j) in d.edges() {
        let witness = d
            .evidence(i, j)
            .non_digon
            .as_ref()
            .map(|f| g.describe_flag(f))
            .unwrap_or_default();
        r.value(format!("edge.{}-{}", name(i), name(j)), witness);
    }
    let empty: Vec<String> = d
        .pairs_without_flags()
        .iter()
        .map(|&(i, j)| format!("{}-{}", name(i), name(j)))
        .collect();
    r.value("pairs_without_flags", empty.join(" "));
    r.value("forest", d.is_forest());
    r.value("connected", d.is_connected());
    emit(&r, opts)
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Other(format!("{}: {e}", dir.display())))?;
    for (name, text) in files {
        let path = dir.join(name);
        write(&path, text)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_gen(what: &Gen, opts: &Opts) -> Outcome {
    match what {
        Gen::Ssg { v, k } => print!("{}", serialize_geometry(&ssg(*v, *k)?)),
        Gen::Affine { d, q, out_dir } => {
            let af = affine_geometry(*d, *q)?;
            match out_dir {
                Some(dir) => write_files(
                    dir,
                    &[
                        (format!("ag{d}-{q}.geom"), serialize_geometry(&af.geometry)),
                        (
                            format!("ag{d}-{q}.group"),
                            serialize_group(&af.geometry, &af.translations),
                        ),
                    ],
                )?,
                None => print!("{}", serialize_geometry(&af.geometry)),
            }
        }
        Gen::Blowup { geometry, graph } => {
            let g = load_geometry(geometry, opts)?;
            let delta = match SimpleGraph::named(graph) {
                Some(d) => d,
                None => in_file(Path::new(graph), parse_graph(&read(Path::new(graph))?))?,
            };
            let b = blowup(&g, &delta)?;
            b.geometry.require_flags_at_most(opts.max_flags)?;
            print!("{}", serialize_geometry(&b.geometry));
        }
        Gen::Lift { geometry, n, j } => {
            let g = load_geometry(geometry, opts)?;
            let lift = shadowable_lift(&g, *n, *j)?;
            lift.geometry.require_flags_at_most(opts.max_flags)?;
            print!("{}", serialize_geometry(&lift.geometry));
        }
        Gen::Coseteg { n, out_dir } => {
            let ex = coseteg_family(&FiniteGroup::cyclic(*n)?, opts.max_group_order)?;
            let g = &ex.coset.geometry;
            write_files(
                out_dir,
                &[
                    (format!("coseteg{n}.geom"), serialize_geometry(g)),
                    (format!("coseteg{n}.group"), serialize_group(g, &ex.coset.action)),
                    (format!("coseteg{n}.normal.group"), serialize_group(g, &ex.normal)),
                ],
            )?;
        }
        Gen::Catalogue { name, out_dir } => {
            let files: Vec<(String, String)> = match name {
                None => golden_files()?,
                Some(name) => {
                    let e = catalogue(name).map_err(|_| {
                        Failure::Usage(format!("unknown example `{name}`; known: {}", CATALOGUE.join(", ")))
                    })?;
                    let mut files = vec![(format!("{name}.geom"), serialize_geometry(&e.geometry))];
                    if let Some(group) = &e.group {
                        files.push((format!("{name}.group"), serialize_group(&e.geometry, group)));
                    }
                    if let Some(part) = &e.partition {
                        files.push((format!("{name}.part"), serialize_partition(&e.geometry, part)));
                    }
                    files
                }
            };
            write_files(out_dir, &files)?;
        }
    }
    Ok(true)
}

fn cmd_reproduce(names: &[String], golden_dir: Option<&Path>, instances: usize, list: bool, opts: &Opts) -> Outcome {
    if list {
        for s in reproduce::SCENARIOS {
            println!("{:<15} {}", s.name, s.title);
        }
        return Ok(true);
    }
    let cfg = Config {
        golden_dir: golden_dir.map(Path::to_path_buf).unwrap_or_else(default_golden_dir),
        instances,
        cap: opts.max_group_order,
    };
    let outcomes = reproduce::run(names, &cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    if opts.machine {
        let mut all = Report::new();
        for o in &outcomes {
            all.flag(o.name, o.passed());
            all.absorb(o.name, o.report.clone());
        }
        print!("{}", all.machine());
    } else {
        print!("{}", reproduce::summary(&outcomes));
    }
    Ok(outcomes.iter().all(|o| o.passed()))
}

fn cmd_iso(first: &Path, second: &Path, opts: &Opts) -> Outcome {
    let a = load_geometry(first, opts)?;
    let b = load_geometry(second, opts)?;
    let mut r = Report::new();
    let found = isomorphism(&a, &b);
    r.flag("isomorphic", found.is_some());
    if let Some(map) = found {
        let pairs: Vec<String> = a
            .elements()
            .map(|e| format!("{}->{}", a.name(e), b.name(map[e.0])))
            .collect();
        r.value("map", pairs.join(" "));
    }
    emit(&r, opts)
}

fn run(cli: &Cli) -> Outcome {
    let opts = &cli.opts;
    match &cli.command {
        Command::Check { geometry } => cmd_check(geometry, opts),
        Command::Quotient {
            geometry,
            partition,
            orbits,
            normal_closure,
            output,
        } => cmd_quotient(
            geometry,
            partition.as_deref(),
            orbits.as_deref(),
            normal_closure.as_deref(),
            output.as_deref(),
            opts,
        ),
        Command::Axioms { geometry, group } => cmd_axioms(geometry, group, opts),
        Command::Diagram { geometry } => cmd_diagram(geometry, opts),
        Command::Gen { what } => cmd_gen(what, opts),
        Command::Reproduce {
            names,
            golden_dir,
            instances,
            list,
        } => cmd_reproduce(names, golden_dir.as_deref(), *instances, *list, opts),
        Command::Iso { first, second } => cmd_iso(first, second, opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FALSE),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("cap exceeded: {m}");
            ExitCode::from(EXIT_CAP)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FALSE)
        }
    }
}
