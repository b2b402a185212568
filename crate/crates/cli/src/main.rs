mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ptmc::constructions::{build_by_template, build_thm2, named_census, template_thm3, template_thm4, TemplateOutcome, TemplateSpec};
use ptmc::cover::{enumerate, eds_instance, grid_eds_survey, solve, tiling_instance, OutcomeKind, SearchConfig};
use ptmc::gamma2::{
    build_hive, build_region, corner_partition, enumerate_hive_2ptmc, exact_hive_2ptmc, export_graph, extend_2ptmc,
    no_isolated_pds, thm6c_pds, ExportFormat, TersquareAddress,
};
use ptmc::io::CodeFile;
use ptmc::lattice::{
    box_hull_check, components_of, inflate_to, min_component_l1_distance, verify_kappa_ptmc, verify_non_isolated_pds,
    verify_pds, CodeSet, KappaAssignment, Shape,
};
use ptmc::{Ambient, Graph};

use report::{Digest256, RunReport, Status, Timings};

#[derive(Parser)]
#[command(name = "ptmc", version, about = "Perfect truncated-metric codes: verify, construct, search, export")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    /// Also write the JSON run report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Wall-clock limit for searches, in seconds.
    #[arg(long, global = true, value_name = "SECONDS")]
    budget: Option<f64>,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a code file.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Build a known code.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Run an exact-cover search.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Ternary square compound computations.
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// Write a compound graph as JSON or DOT.
    Export {
        #[arg(value_enum)]
        target: ExportTarget,
        /// Region depth (`region` only).
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: ExportFormat,
        /// Output file; the graph goes to stdout when omitted.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Exhaustive censuses.
    #[command(subcommand)]
    Survey(SurveyCmd),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check that the code's truncated spheres tile its torus.
    Ptmc {
        #[arg(long)]
        code: PathBuf,
        /// Uniform radius, overriding the file's kappa.
        #[arg(long)]
        t: Option<usize>,
    },
    /// Lift a code to a larger torus and check it there.
    Inflation {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        torus: Vec<i64>,
        #[arg(long)]
        t: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Boxes of extent c_i - 1 repeated with period 1 + c_i, radius n.
    Thm2 {
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<i64>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Unit squares and singletons of radius 1 on C6 x C6 x C3.
    Thm3 {
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// (n-1)-cubes of radius 1 and singletons of radius n-2.
    Thm4 {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Tile a torus by truncated balls of unit cubes.
    Tiling {
        #[arg(long, value_delimiter = ',', required = true)]
        torus: Vec<i64>,
        /// `NAME:RADIUS`, NAME one of singleton, unit-edge, unit-square, unit-R-cube. Repeatable.
        #[arg(long = "shape", required = true)]
        shapes: Vec<String>,
        /// Enumerate up to this many tilings instead of stopping at the first.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Efficient dominating sets of the grid P_m x P_n.
    GridEds {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GammaCmd {
    /// Tersquare and vertex counts of the hive, and its corner partition.
    Hive,
    /// Verify every one-per-corner choice of external vertices.
    #[command(name = "count-2ptmc")]
    Count2ptmc {
        /// Also enumerate all isolated 2-codes by exact cover.
        #[arg(long)]
        exact: bool,
    },
    /// The 18-vertex non-isolated perfect dominating set.
    Thm6c,
    /// Exhaustive search for an isolated perfect dominating set of the hive.
    NoIsolatedPds,
    /// Grow an isolated 2-code over a region and check its interior.
    Extend {
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SurveyCmd {
    /// Efficient domination in P_m x P_n for 3 <= m, n <= max-side.
    GridEds {
        #[arg(long, default_value_t = 7)]
        max_side: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportTarget {
    Hive,
    Region,
}

fn parse_format(s: &str) -> Result<ExportFormat, String> {
    s.parse().map_err(|e: ptmc::gamma2::GammaError| e.to_string())
}

struct Outcome {
    status: Status,
    counts: BTreeMap<String, u64>,
    details: Value,
    artifacts: Vec<PathBuf>,
    nodes: Option<u64>,
    /// Printed instead of the report when set.
    stdout: Option<String>,
}

impl Outcome {
    fn new(status: Status, details: Value) -> Self {
        Outcome {
            status,
            counts: BTreeMap::new(),
            details,
            artifacts: Vec::new(),
            nodes: None,
            stdout: None,
        }
    }

    fn count(mut self, key: &str, v: impl TryInto<u64>) -> Self {
        self.counts.insert(key.to_string(), v.try_into().unwrap_or(u64::MAX));
        self
    }

    fn emit(mut self, path: &Option<PathBuf>, text: &str) -> Result<Self> {
        if let Some(p) = path {
            write_file(p, text)?;
            self.artifacts.push(p.clone());
        }
        Ok(self)
    }
}

fn write_file(p: &Path, text: &str) -> Result<()> {
    fs::write(p, text).with_context(|| format!("writing {}", p.display()))
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn config(cli: &Cli) -> SearchConfig {
    SearchConfig {
        budget: cli.budget.map(Duration::from_secs_f64),
        threads: cli.threads,
    }
}

fn load_code(path: &Path, digest: &mut Digest256) -> Result<CodeFile> {
    let text = digest.read(path)?;
    CodeFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn verify_code(code: &CodeSet, kappa: &KappaAssignment) -> Result<Outcome> {
    let r = verify_kappa_ptmc(code, kappa)?;
    let comps = components_of(code);
    Ok(Outcome::new(pass_if(r.is_pass()), json!({ "verdict": r }))
        .count("vertices", code.len())
        .count("components", comps.len()))
}

fn kappa_of(file: &CodeFile, t: Option<usize>) -> KappaAssignment {
    t.map(KappaAssignment::uniform).unwrap_or_else(|| file.kappa())
}

fn run_verify(cmd: &VerifyCmd, digest: &mut Digest256) -> Result<Outcome> {
    match cmd {
        VerifyCmd::Ptmc { code, t } => {
            let f = load_code(code, digest)?;
            verify_code(&f.code()?, &kappa_of(&f, *t))
        }
        VerifyCmd::Inflation { code, torus, t } => {
            let f = load_code(code, digest)?;
            let lifted = inflate_to(&f.code()?, &Ambient::torus(torus.clone())?)?;
            verify_code(&lifted, &kappa_of(&f, *t))
        }
    }
}

fn template_outcome(t: &TemplateSpec, cfg: SearchConfig, emit: &Option<PathBuf>) -> Result<Outcome> {
    let frs = t.fr_count()?;
    let summary = json!({
        "template": t.name,
        "torus": t.torus,
        "fr_volume": t.fr_volume,
        "fr_count": frs,
        "ball_volumes": (0..t.components.len()).map(|i| t.ball_volume(i)).collect::<Vec<_>>(),
    });
    Ok(match build_by_template(t, cfg)? {
        TemplateOutcome::Built {
            code,
            kappa,
            census_matches,
            nodes,
        } => {
            let r = verify_kappa_ptmc(&code, &kappa)?;
            let file = CodeFile::new(&code, &kappa).with_template(t.clone());
            let mut o = Outcome::new(
                pass_if(r.is_pass() && census_matches),
                json!({ "summary": summary, "census": named_census(t, &code), "verdict": r }),
            )
            .count("vertices", code.len())
            .count("components", components_of(&code).len())
            .emit(emit, &(file.to_json() + "\n"))?;
            o.nodes = Some(nodes);
            o
        }
        TemplateOutcome::Infeasible { nodes } => {
            let mut o = Outcome::new(Status::Infeasible, json!({ "summary": summary }));
            o.nodes = Some(nodes);
            o
        }
        TemplateOutcome::Timeout { nodes } => {
            let mut o = Outcome::new(Status::Timeout, json!({ "summary": summary }));
            o.nodes = Some(nodes);
            o
        }
    })
}

fn run_construct(cmd: &ConstructCmd, cfg: SearchConfig) -> Result<Outcome> {
    match cmd {
        ConstructCmd::Thm2 { c, k, emit } => {
            let (code, kappa) = build_thm2(c, k)?;
            let r = verify_kappa_ptmc(&code, &kappa)?;
            let comps = components_of(&code);
            let boxes = comps.iter().filter(|h| box_hull_check(h).is_ok()).count();
            let dist = min_component_l1_distance(&code)?;
            let file = CodeFile::new(&code, &kappa);
            Outcome::new(
                pass_if(r.is_pass() && boxes == comps.len()),
                json!({ "torus": code.ambient, "verdict": r, "min_component_l1_distance": dist }),
            )
            .count("vertices", code.len())
            .count("components", comps.len())
            .count("box_components", boxes)
            .emit(emit, &(file.to_json() + "\n"))
        }
        ConstructCmd::Thm3 { emit } => template_outcome(&template_thm3(), cfg, emit),
        ConstructCmd::Thm4 { n, emit } => template_outcome(&template_thm4(*n)?, cfg, emit),
    }
}

fn parse_shape(spec: &str, n: usize) -> Result<(Shape, usize)> {
    let Some((name, t)) = spec.split_once(':') else {
        bail!("--shape {spec:?}: expected NAME:RADIUS");
    };
    let r = match name {
        "singleton" => 0,
        "unit-edge" => 1,
        "unit-square" => 2,
        _ => match name.strip_prefix("unit-").and_then(|s| s.strip_suffix("-cube")) {
            Some(d) => d.parse().with_context(|| format!("--shape {spec:?}"))?,
            None => bail!("--shape {spec:?}: unknown shape {name:?}"),
        },
    };
    if r > n {
        bail!("--shape {spec:?}: cube dimension exceeds torus dimension {n}");
    }
    let t = t.parse().with_context(|| format!("--shape {spec:?}: bad radius"))?;
    Ok((Shape::unit_cube(n, r), t))
}

fn cover_status(kind: OutcomeKind) -> Status {
    match kind {
        OutcomeKind::Solution => Status::Pass,
        OutcomeKind::Infeasible => Status::Infeasible,
        OutcomeKind::Timeout => Status::Timeout,
    }
}

fn enumeration_status(found: usize, exhaustive: bool, timed_out: bool) -> Status {
    if timed_out && found == 0 {
        Status::Timeout
    } else if found == 0 && exhaustive {
        Status::Infeasible
    } else {
        Status::Pass
    }
}

fn run_search(cmd: &SearchCmd, cfg: SearchConfig) -> Result<Outcome> {
    match cmd {
        SearchCmd::Tiling {
            torus,
            shapes,
            limit,
            emit,
        } => {
            let a = Ambient::torus(torus.clone())?;
            let shapes = shapes
                .iter()
                .map(|s| parse_shape(s, a.dim()))
                .collect::<Result<Vec<_>>>()?;
            let tiling = tiling_instance(&a, &shapes)?;
            let tiles = tiling.instance.tiles().len();
            if let Some(limit) = limit {
                let e = enumerate(&tiling.instance, Some(*limit), cfg);
                let mut o = Outcome::new(
                    enumeration_status(e.solutions.len(), e.exhaustive, e.timed_out),
                    json!({ "exhaustive": e.exhaustive, "timed_out": e.timed_out }),
                )
                .count("tiles", tiles)
                .count("solutions", e.solutions.len());
                o.nodes = Some(e.nodes);
                return Ok(o);
            }
            let out = solve(&tiling.instance, cfg);
            let mut o = Outcome::new(cover_status(out.kind), json!({ "outcome": out.kind })).count("tiles", tiles);
            o.nodes = Some(out.nodes);
            if let Some(sol) = out.solution() {
                let ids: Vec<&str> = sol.iter().map(|&i| tiling.instance.tiles()[i].id.as_str()).collect();
                let vertices = sol.iter().flat_map(|&i| tiling.placements[i].cells(&shapes, &a));
                let code = CodeSet::new(a.clone(), vertices)?;
                let mut kappa = KappaAssignment::default();
                for (s, t) in &shapes {
                    for key in s.class_keys() {
                        kappa = kappa.with_class(key, *t);
                    }
                }
                let r = verify_kappa_ptmc(&code, &kappa)?;
                o.details = json!({ "outcome": out.kind, "tiles": ids, "verdict": r });
                o.status = pass_if(r.is_pass());
                o = o.emit(emit, &(CodeFile::new(&code, &kappa).to_json() + "\n"))?;
            }
            Ok(o)
        }
        SearchCmd::GridEds { m, n, limit } => {
            let g = Graph::grid(*m, *n);
            let e = enumerate(&eds_instance(&g), *limit, cfg);
            let sets: Vec<Vec<&str>> = e
                .solutions
                .iter()
                .map(|s| s.iter().map(|&v| g.label(v)).collect())
                .collect();
            let mut o = Outcome::new(
                enumeration_status(e.solutions.len(), e.exhaustive, e.timed_out),
                json!({ "exhaustive": e.exhaustive, "timed_out": e.timed_out, "solutions": sets }),
            )
            .count("solutions", e.solutions.len());
            o.nodes = Some(e.nodes);
            Ok(o)
        }
    }
}

fn run_gamma(cmd: &GammaCmd, cli: &Cli) -> Result<Outcome> {
    let root = TersquareAddress::root();
    let hive = build_hive(&root);
    match cmd {
        GammaCmd::Hive => {
            let part = corner_partition(&hive);
            Ok(Outcome::new(
                pass_if(part.is_ok() && hive.compound.len() == 81),
                json!({ "partition": part.as_ref().map(|_| "ok").map_err(|e| e.to_string()) }),
            )
            .count("tersquares", hive.members.len())
            .count("vertices", hive.compound.len())
            .count("edges", hive.compound.graph.edges().len()))
        }
        GammaCmd::Count2ptmc { exact } => {
            let c = enumerate_hive_2ptmc(&hive, cli.threads)?;
            let mut o = Outcome::new(pass_if(c.passing == c.selections), json!({ "first_failure": c.first_failure }))
                .count("count", c.passing)
                .count("selections", c.selections);
            if *exact {
                let (n, exhaustive) = exact_hive_2ptmc(&hive, config(cli));
                o = o.count("exact_count", n);
                o.details["exact_exhaustive"] = json!(exhaustive);
                if !exhaustive {
                    o.status = Status::Timeout;
                }
            }
            Ok(o)
        }
        GammaCmd::Thm6c => {
            let s = thm6c_pds();
            let idx: Vec<usize> = s.iter().filter_map(|v| hive.compound.index_of(v)).collect();
            let g = &hive.compound.graph;
            let non_isolated = verify_non_isolated_pds(&idx, g);
            let isolated = verify_pds(&idx, g, true);
            let label = |w: usize| g.label(w).to_string();
            Ok(Outcome::new(
                pass_if(idx.len() == s.len() && non_isolated.is_pass() && !isolated.is_pass()),
                json!({
                    "vertices": s.iter().map(|v| v.id()).collect::<Vec<_>>(),
                    "non_isolated": non_isolated.map_witness(label),
                    "isolated": isolated.map_witness(label),
                }),
            )
            .count("size", s.len()))
        }
        GammaCmd::NoIsolatedPds => {
            let out = match cli.budget {
                Some(_) => solve(&eds_instance(&hive.compound.graph), config(cli)),
                None => no_isolated_pds(&hive, cli.threads),
            };
            let status = match out.kind {
                OutcomeKind::Infeasible => Status::Pass,
                OutcomeKind::Solution => Status::Fail,
                OutcomeKind::Timeout => Status::Timeout,
            };
            let mut o = Outcome::new(status, json!({ "outcome": out.kind }));
            o.nodes = Some(out.nodes);
            Ok(o)
        }
        GammaCmd::Extend { depth, emit } => {
            if *depth < 2 {
                bail!("--depth must be at least 2");
            }
            let (_, code) = extend_2ptmc(*depth, cli.seed);
            let ids: Vec<String> = code.centers.iter().map(|v| v.id()).collect();
            Outcome::new(pass_if(code.report.is_pass()), json!({ "verdict": code.report }))
                .count("centers", code.centers.len())
                .count("hives", code.hives)
                .count("interior", code.interior)
                .count("unverified_boundary", code.boundary)
                .emit(emit, &(serde_json::to_string_pretty(&json!({ "depth": depth, "seed": cli.seed, "centers": ids }))? + "\n"))
        }
    }
}

fn run_export(target: ExportTarget, depth: usize, format: ExportFormat, emit: &Option<PathBuf>) -> Result<Outcome> {
    let root = TersquareAddress::root();
    let compound = match target {
        ExportTarget::Hive => build_hive(&root).compound,
        ExportTarget::Region => build_region(depth).compound,
    };
    let text = export_graph(&compound, &root, format);
    let mut o = Outcome::new(Status::Pass, json!({ "format": format }))
        .count("vertices", compound.len())
        .count("edges", compound.graph.edges().len())
        .emit(emit, &text)?;
    if emit.is_none() {
        o.stdout = Some(text);
    }
    Ok(o)
}

fn run_survey(cmd: &SurveyCmd, cfg: SearchConfig) -> Result<Outcome> {
    match cmd {
        SurveyCmd::GridEds { max_side } => {
            if *max_side < 3 {
                bail!("--max-side must be at least 3");
            }
            let rows = grid_eds_survey(*max_side, cfg);
            let complete = rows.iter().all(|r| r.exhaustive);
            let with: Vec<(usize, usize)> = rows.iter().filter(|r| r.exists).map(|r| (r.m, r.n)).collect();
            Ok(Outcome::new(
                if complete { Status::Pass } else { Status::Timeout },
                json!({ "grids_with_eds": with, "rows": rows }),
            )
            .count("grids", rows.len())
            .count("grids_with_eds", with.len()))
        }
    }
}

fn run(cli: &Cli, args: &[String]) -> Result<i32> {
    let started = Instant::now();
    let mut digest = Digest256::default();
    digest.args(args);
    let cfg = config(cli);
    let o = match &cli.cmd {
        Command::Verify(c) => run_verify(c, &mut digest)?,
        Command::Construct(c) => run_construct(c, cfg)?,
        Command::Search(c) => run_search(c, cfg)?,
        Command::Gamma(c) => run_gamma(c, cli)?,
        Command::Export {
            target,
            depth,
            format,
            emit,
        } => run_export(*target, *depth, *format, emit)?,
        Command::Survey(c) => run_survey(c, cfg)?,
    };
    let report = RunReport {
        command: args.to_vec(),
        inputs_digest: digest.hex(),
        status: o.status,
        counts: o.counts,
        details: o.details,
        artifacts: o.artifacts,
        timings: Timings {
            elapsed_ms: started.elapsed().as_millis(),
            nodes: o.nodes,
        },
    };
    let text = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(p) = &cli.out {
        write_file(p, &text)?;
    }
    match o.stdout {
        Some(s) => print!("{s}"),
        None => print!("{text}"),
    }
    Ok(report.status.exit_code())
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(&cli, &args) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
