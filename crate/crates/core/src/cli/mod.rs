//! Command-line front end.
//!
//! Every command builds a window from `--preset`/`--radius` or from an
//! edge list, runs one library routine and prints a JSON or CSV document.
//! Exit codes: 0 success, 1 other errors, 2 parse errors and unknown
//! names, 3 margin violations.

mod cache;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::generators::{
    cayley_window, folner_family, load_edge_list, max_pair_scale, qi_preset, CayleyWindow, GroupPreset,
    DEFAULT_VERTEX_BUDGET,
};
use crate::graph::{AmbientWindow, Lp, Subgraph, VertexId};
use crate::isoperimetry::{cheeger_estimate, folner_function, growth_curves, WitnessBudget};
use crate::profiles::{dirichlet_profile_with, sup_profile, EvalLimits, ProfileCurve, Schedule, SearchStrategy};
use crate::solvers::{dh_infinity, dh_one_exact, dh_p_descent_with, DescentOptions};
use crate::verify::{run_suite, suite_names};

use cache::Cache;
use output::{Format, WindowInfo};

const DEFAULT_RADIUS: u32 = 10;

#[derive(Debug, Parser)]
#[command(name = "pdlab", version, about = "Dirichlet-Poincaré constants and profiles of graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    /// Group preset: zd:1, zd:2, zd:3, zd:2+diag, free:2, lamplighter, heisenberg.
    #[arg(long, global = true, conflicts_with = "input")]
    pub preset: Option<String>,
    /// Edge-list file; the graph is its own window.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Window radius (presets only).
    #[arg(long, global = true)]
    pub radius: Option<u32>,
    /// Norm indices, comma separated; `inf` for p = ∞.
    #[arg(long = "p", global = true, value_delimiter = ',', default_value = "1")]
    pub p: Vec<String>,
    #[arg(long, global = true, default_value_t = 100)]
    pub nmax: usize,
    #[arg(long, global = true, value_enum, default_value_t = Strategy::Balls)]
    pub strategy: Strategy,
    /// Vertex cap of the exhaustive enumeration.
    #[arg(long, global = true, default_value_t = 10)]
    pub max_vertices: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for descent multi-starts and verification sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on the number of generated window vertices.
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub budget_vertices: usize,
    /// Degree bound enforced on edge lists.
    #[arg(long, global = true)]
    pub degree_bound: Option<usize>,
    /// Cache directory; caching is off when neither this nor PDLAB_CACHE is set.
    #[arg(long, global = true, env = "PDLAB_CACHE")]
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Balls,
    Folner,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
pub enum Command {
    /// Dh^p of one subgraph.
    Constant {
        /// `ball:k` around the basepoint or `box:AxB[xC]` (lattices).
        #[arg(long, conflicts_with = "vertices")]
        shape: Option<String>,
        /// File with one vertex per line (normal forms for presets, ids for edge lists).
        #[arg(long)]
        vertices: Option<PathBuf>,
    },
    /// DΛ^p curve, or the sup-profile with --sup.
    Profile {
        #[arg(long)]
        sup: bool,
    },
    /// Følner function F(n) for n ≤ nmax.
    Folner {
        /// Directory for witness files, one vertex per line.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Upper estimate of the Cheeger constant.
    Cheeger,
    /// Ball counts and inverse growth functions.
    Growth {
        #[arg(long, value_enum, default_value_t = GrowthKind::Kappa)]
        kind: GrowthKind,
    },
    /// Checks a named quasi-isometry preset (Z2-gens, Z-double).
    Qicheck {
        #[arg(long = "map")]
        map: String,
    },
    /// Runs an acceptance suite, or `all`.
    Verify { suite: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthKind {
    Balls,
    Kappa,
    KappaLower,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::UnknownPreset(_) => 2,
            Error::MarginViolation { .. } => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Output of a successful command and whether it counts as passing.
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

/// Everything that determines an output; hashed for the cache key.
#[derive(Serialize)]
struct RunConfig<'a> {
    global: &'a Global,
    command: &'a Command,
    input_sha256: Option<String>,
}

enum Source {
    Preset(CayleyWindow),
    Input(AmbientWindow),
}

impl Source {
    fn ambient(&self) -> &AmbientWindow {
        match self {
            Source::Preset(c) => c,
            Source::Input(w) => w,
        }
    }

    fn info(&self) -> WindowInfo {
        match self {
            Source::Preset(c) => WindowInfo { preset: c.preset().name(), radius: c.radius() },
            Source::Input(w) => WindowInfo { preset: w.label().to_string(), radius: w.radius() },
        }
    }

    fn cayley(&self) -> Result<&CayleyWindow> {
        match self {
            Source::Preset(c) => Ok(c),
            Source::Input(_) => Err(Error::Unsupported("this command needs a group preset".into())),
        }
    }

    fn vertex_name(&self, v: VertexId) -> String {
        match self {
            Source::Preset(c) => c.preset().encode(c.element(v)),
            Source::Input(w) => w.external_id(v).to_string(),
        }
    }

    fn parse_vertex(&self, token: &str, line: usize) -> Result<VertexId> {
        let bad = |message: String| Error::Parse { line, message };
        match self {
            Source::Preset(c) => {
                let g = c.preset().decode(token).map_err(|e| bad(e.to_string()))?;
                c.vertex_of(&g).ok_or_else(|| bad(format!("`{token}` lies outside the window")))
            }
            Source::Input(w) => {
                let id: u64 = token.parse().map_err(|_| bad(format!("`{token}` is not a vertex id")))?;
                w.vertex_of_external(id).ok_or_else(|| bad(format!("unknown vertex id {id}")))
            }
        }
    }
}

fn parse_ps(raw: &[String]) -> std::result::Result<Vec<Lp>, Failure> {
    raw.iter()
        .map(|s| match s.parse::<Lp>() {
            Ok(Lp::Finite(p)) if !(p >= 1.0 && p.is_finite()) => Err(usage(format!("p = {s} is outside [1, ∞]"))),
            Ok(p) => Ok(p),
            Err(e) => Err(usage(format!("bad --p value `{s}`: {e}"))),
        })
        .collect()
}

enum Shape {
    Ball(u32),
    Box(Vec<u32>),
}

fn parse_shape(s: &str) -> std::result::Result<Shape, Failure> {
    let bad = || usage(format!("bad shape `{s}`; expected ball:k or box:AxB"));
    match s.split_once(':') {
        Some(("ball", k)) => k.parse().map(Shape::Ball).map_err(|_| bad()),
        Some(("box", dims)) => {
            let dims: Vec<u32> =
                dims.split(['x', '×']).map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
            Ok(Shape::Box(dims))
        }
        _ => Err(bad()),
    }
}

impl Shape {
    /// Window radius that leaves a margin of at least 2 around the shape.
    fn radius(&self) -> u32 {
        match self {
            Shape::Ball(k) => k + 2,
            Shape::Box(dims) => dims.iter().map(|a| a / 2).sum::<u32>() + 2,
        }
    }
}

fn build_source(global: &Global, default_radius: u32) -> Result<Source> {
    match (&global.preset, &global.input) {
        (Some(name), None) => {
            let preset: GroupPreset = name.parse()?;
            let radius = global.radius.unwrap_or(default_radius);
            Ok(Source::Preset(cayley_window(preset, radius, global.budget_vertices)?))
        }
        (None, Some(path)) => Ok(Source::Input(load_edge_list(path, global.degree_bound)?)),
        (None, None) => Err(Error::Parse { line: 0, message: "either --preset or --input is required".into() }),
        (Some(_), Some(_)) => Err(Error::Parse { line: 0, message: "--preset and --input are exclusive".into() }),
    }
}

fn load_set(source: &Source, path: &Path) -> Result<Vec<VertexId>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(source.parse_vertex(line, i + 1)?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn constant_for(g: &Subgraph<'_>, p: Lp, seed: u64) -> Result<crate::solvers::ConstantResult> {
    g.require_trusted()?;
    if g.free_count() == 0 {
        return crate::solvers::dirichlet_constant(g, p);
    }
    match p {
        Lp::Infinity => dh_infinity(g),
        _ if p.is_one() => dh_one_exact(g),
        _ => dh_p_descent_with(g, p, &DescentOptions { seed, ..DescentOptions::default() }),
    }
}

fn cmd_constant(global: &Global, shape: Option<&str>, vertices: Option<&Path>) -> std::result::Result<String, Failure> {
    let ps = parse_ps(&global.p)?;
    let shape = shape.map(parse_shape).transpose()?;
    let default_radius = shape.as_ref().map_or(DEFAULT_RADIUS, Shape::radius);
    let source = build_source(global, default_radius)?;
    let w = source.ambient();
    let set = match (&shape, vertices) {
        (Some(Shape::Ball(k)), None) => {
            if w.frontier_distance(w.origin()) <= *k {
                return Err(Error::MarginViolation {
                    margin: w.frontier_distance(w.origin()).saturating_sub(*k),
                    required: 1,
                }
                .into());
            }
            w.ball(w.origin(), *k)
        }
        (Some(Shape::Box(dims)), None) => source.cayley()?.lattice_box(dims)?,
        (None, Some(path)) => load_set(&source, path)?,
        _ => return Err(usage("constant needs exactly one of --shape or --vertices")),
    };
    let g = Subgraph::induced(w, set)?;
    let info = source.info();
    let mut out = String::new();
    for p in ps {
        let r = constant_for(&g, p, global.seed)?;
        out.push_str(&output::constant(global.format, &info, g.len(), g.free_count(), &r));
    }
    Ok(out)
}

/// Radii tried when a command sizes its own window.
const AUTO_RADII: [u32; 9] = [6, 10, 16, 24, 32, 48, 64, 96, 128];

fn folner_source(global: &Global) -> Result<Source> {
    if global.radius.is_some() || global.input.is_some() {
        return build_source(global, DEFAULT_RADIUS);
    }
    let mut best = None;
    for r in AUTO_RADII {
        let source = match build_source(global, r) {
            Ok(s) => s,
            Err(Error::ResourceLimit { .. }) if best.is_some() => break,
            Err(e) => return Err(e),
        };
        let cw = source.cayley()?;
        let top = match max_pair_scale(cw)? {
            0 => 0,
            m => folner_family(cw, m..=m)?.last().map_or(0, |q| q.outer.len()),
        };
        best = Some(source);
        if top >= global.nmax {
            break;
        }
    }
    Ok(best.expect("at least one radius fits"))
}

fn profile_curve(source: &Source, global: &Global, p: Lp, sup: bool) -> Result<ProfileCurve> {
    let w = source.ambient();
    let limits = EvalLimits { seed: global.seed, ..EvalLimits::default() };
    if sup {
        return sup_profile(w, p, global.nmax);
    }
    match global.strategy {
        Strategy::Exhaustive => dirichlet_profile_with(
            w,
            p,
            &SearchStrategy::Exhaustive {
                max_vertices: global.max_vertices,
                max_subgraphs: 200_000,
                transitive: matches!(source, Source::Preset(_)),
            },
            global.nmax,
            &limits,
        ),
        Strategy::Balls => dirichlet_profile_with(
            w,
            p,
            &SearchStrategy::BallFamily { schedule: Schedule::All, max_witness: global.nmax },
            global.nmax,
            &limits,
        ),
        Strategy::Folner => {
            let cw = source.cayley()?;
            let scale = max_pair_scale(cw)?;
            if scale == 0 {
                return Err(Error::SizeCap("the window holds no Følner pair; raise --radius".into()));
            }
            let pairs = folner_family(cw, 1..=scale)?;
            let top = pairs.iter().map(|q| q.outer.len()).max().unwrap_or(0);
            dirichlet_profile_with(w, p, &SearchStrategy::Folner(pairs), top.min(global.nmax), &limits)
        }
    }
}

fn cmd_profile(global: &Global, sup: bool) -> std::result::Result<String, Failure> {
    let ps = parse_ps(&global.p)?;
    if global.format == Format::Csv && ps.len() > 1 {
        return Err(usage("CSV output takes a single --p"));
    }
    let mut source = if global.strategy == Strategy::Folner && !sup {
        folner_source(global)?
    } else {
        build_source(global, DEFAULT_RADIUS)?
    };
    let mut curves = Vec::with_capacity(ps.len());
    for &p in &ps {
        if global.nmax == 0 {
            curves.push(None);
            continue;
        }
        let mut attempt = profile_curve(&source, global, p, sup);
        // Sup witnesses spread out; without --radius, grow the window until they fit.
        if sup && global.radius.is_none() && global.input.is_none() {
            let start = source.ambient().radius();
            for r in AUTO_RADII.into_iter().filter(|&r| r > start) {
                if !matches!(attempt, Err(Error::MarginViolation { .. })) {
                    break;
                }
                source = build_source(global, r)?;
                attempt = profile_curve(&source, global, p, sup);
            }
        }
        curves.push(Some(attempt?));
    }
    if sup && curves.len() > 1 && global.radius.is_none() {
        // Keep every document on the final window.
        for (c, &p) in curves.iter_mut().zip(&ps).filter(|(c, _)| c.is_some()) {
            *c = Some(profile_curve(&source, global, p, sup)?);
        }
    }
    let info = source.info();
    let mut out = String::new();
    for (p, curve) in ps.into_iter().zip(curves) {
        let rows = curve.as_ref().map(output::profile_rows).unwrap_or_default();
        let strategy = if sup { "sup" } else { global.strategy.name() };
        out.push_str(&output::curve(global.format, &info, Some(p), json!({"strategy": strategy}), &rows));
    }
    Ok(out)
}

impl Strategy {
    fn name(self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Balls => "ball_family",
            Strategy::Folner => "folner_family",
        }
    }
}

fn witness_budget(global: &Global) -> WitnessBudget {
    WitnessBudget { exhaustive_vertices: global.max_vertices, ..WitnessBudget::default() }
}

fn cmd_folner(global: &Global, export: Option<&Path>) -> std::result::Result<String, Failure> {
    let source = build_source(global, DEFAULT_RADIUS)?;
    let w = source.ambient();
    let budget = witness_budget(global);
    let values: Vec<_> = (1..=global.nmax).map(|n| folner_function(w, n, &budget)).collect();
    if let Some(dir) = export {
        fs::create_dir_all(dir).map_err(Error::from)?;
        for f in &values {
            if let Some(set) = &f.witness {
                let body: String = set.iter().map(|&v| source.vertex_name(v) + "\n").collect();
                fs::write(dir.join(format!("folner_{}.txt", f.n)), body).map_err(Error::from)?;
            }
        }
    }
    Ok(output::curve(global.format, &source.info(), None, json!({"kind": "folner"}), &output::folner_rows(&values)))
}

fn cmd_cheeger(global: &Global) -> std::result::Result<String, Failure> {
    let source = build_source(global, DEFAULT_RADIUS)?;
    let best = cheeger_estimate(source.ambient(), &witness_budget(global));
    let fields = match best {
        Some(r) => vec![
            ("value", json!(r.ratio.value())),
            ("ratio", json!(r.ratio.to_string())),
            ("boundary", json!(r.ratio.boundary)),
            ("size", json!(r.ratio.size)),
            ("mode", json!("upper_bound")),
        ],
        None => vec![("value", json!("inf")), ("mode", json!("unattained"))],
    };
    Ok(output::record(global.format, &source.info(), &fields))
}

fn cmd_growth(global: &Global, kind: GrowthKind) -> std::result::Result<String, Failure> {
    let source = build_source(global, DEFAULT_RADIUS)?;
    let curves = growth_curves(source.ambient(), matches!(source, Source::Preset(_)));
    let curve = match kind {
        GrowthKind::Balls => curves.balls,
        GrowthKind::Kappa => curves.kappa,
        GrowthKind::KappaLower => curves.kappa_lower,
    };
    let extra = json!({"kind": curve.kind.name()});
    Ok(output::curve(global.format, &source.info(), None, extra, &output::iso_rows(&curve)))
}

fn cmd_qicheck(global: &Global, map: &str) -> std::result::Result<String, Failure> {
    let q = qi_preset(map, global.radius.unwrap_or(DEFAULT_RADIUS))?;
    let check = q.verify()?;
    let info = WindowInfo { preset: q.source.preset().name(), radius: q.source.radius() };
    let fields = [
        ("map", json!(q.name)),
        ("target", json!(q.target.preset().name())),
        ("k", json!(q.k)),
        ("c", json!(q.c)),
        ("pairs_checked", json!(check.pairs_checked)),
        ("density_checked", json!(check.density_checked)),
        ("tightest_k", json!(check.tightest_k)),
    ];
    Ok(output::record(global.format, &info, &fields))
}

fn cmd_verify(global: &Global, suite: &str) -> std::result::Result<Outcome, Failure> {
    let Some(reports) = run_suite(suite, global.seed) else {
        let known: Vec<&str> = suite_names().collect();
        return Err(usage(format!("unknown suite `{suite}`; expected one of {}", known.join(", "))));
    };
    let success = reports.iter().all(|r| r.passed);
    let text = match global.format {
        Format::Json => format!("{}\n", serde_json::to_string(&reports).expect("reports serialize")),
        Format::Csv => {
            let mut s = String::from("criterion,suite,passed,checks,failures,seconds\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{:.3}\n",
                    r.criterion, r.suite, r.passed, r.checks, r.failures, r.seconds
                ));
            }
            s
        }
    };
    let text = if global.format == Format::Json {
        let lines: String = reports.iter().map(|r| r.line() + "\n").collect();
        eprint!("{lines}");
        text
    } else {
        text
    };
    Ok(Outcome { text, success })
}

fn input_digest(global: &Global) -> Option<String> {
    use sha2::{Digest, Sha256};
    let bytes = fs::read(global.input.as_ref()?).ok()?;
    Some(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> std::result::Result<Outcome, Failure> {
    let g = &cli.global;
    let cacheable = !matches!(cli.command, Command::Verify { .. } | Command::Folner { export: Some(_) });
    let cache = g.cache_dir.as_ref().filter(|_| cacheable).map(Cache::new);
    let key = cache
        .as_ref()
        .map(|_| cache::key(&RunConfig { global: g, command: &cli.command, input_sha256: input_digest(g) }));
    if let (Some(c), Some(k)) = (&cache, &key) {
        if let Some(text) = c.get(k) {
            log::info!("cache hit in {}", c.dir().display());
            return Ok(Outcome { text, success: true });
        }
    }
    let text = match &cli.command {
        Command::Constant { shape, vertices } => cmd_constant(g, shape.as_deref(), vertices.as_deref())?,
        Command::Profile { sup } => cmd_profile(g, *sup)?,
        Command::Folner { export } => cmd_folner(g, export.as_deref())?,
        Command::Cheeger => cmd_cheeger(g)?,
        Command::Growth { kind } => cmd_growth(g, *kind)?,
        Command::Qicheck { map } => cmd_qicheck(g, map)?,
        Command::Verify { suite } => return cmd_verify(g, suite),
    };
    if let (Some(c), Some(k)) = (&cache, &key) {
        if let Err(e) = c.put(k, &text) {
            log::warn!("could not write cache entry: {e}");
        }
    }
    Ok(Outcome { text, success: true })
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.success {
                0
            } else {
                1
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> std::result::Result<Outcome, Failure> {
        let cli = Cli::try_parse_from(std::iter::once("pdlab").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    fn json_of(args: &[&str]) -> serde_json::Value {
        serde_json::from_str(&run_args(args).map_err(|f| f.message).unwrap().text).unwrap()
    }

    #[test]
    fn constant_on_interval() {
        let doc = json_of(&["constant", "--preset", "zd:1", "--shape", "ball:3", "--p", "inf"]);
        assert!((doc["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(doc["mode"], "exact");
        assert_eq!(doc["free"], 5);
        let doc = json_of(&["constant", "--preset", "zd:1", "--shape", "ball:3", "--p", "1"]);
        assert_eq!(doc["mode"], "exact");
        assert!((doc["value"].as_f64().unwrap() - 0.75).abs() < 1e-9);
    }

    #[test]
    fn margin_violation_is_exit_3() {
        let f = run_args(&["constant", "--preset", "zd:1", "--radius", "3", "--shape", "ball:3"]).err().unwrap();
        assert_eq!(f.code, 3);
    }

    #[test]
    fn bad_vertex_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("set.txt");
        fs::write(&path, "0\n1\n# note\nx\n").unwrap();
        let f = run_args(&["constant", "--preset", "zd:1", "--vertices", path.to_str().unwrap()]).err().unwrap();
        assert_eq!(f.code, 2);
        assert!(f.message.contains("line 4"), "{}", f.message);
    }

    #[test]
    fn sup_profile_column() {
        let doc = json_of(&["profile", "--sup", "--preset", "zd:1", "--p", "2", "--nmax", "20"]);
        let points = doc["points"].as_array().unwrap();
        assert_eq!(points.len(), 20);
        for q in &points[2..] {
            let n = q["n"].as_f64().unwrap();
            assert!((q["value"].as_f64().unwrap() - 3f64.sqrt() * n).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_curve() {
        let out = run_args(&["profile", "--preset", "zd:2", "--nmax", "0", "--format", "csv"])
            .map_err(|f| f.message)
            .unwrap();
        assert_eq!(out.text, "n,value,mode,witness_size\n");
        let doc = json_of(&["profile", "--preset", "zd:2", "--nmax", "0"]);
        assert_eq!(doc["points"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn unknown_suite_is_exit_2() {
        assert_eq!(run_args(&["verify", "nosuchsuite"]).err().unwrap().code, 2);
        assert_eq!(run_args(&["growth", "--preset", "zd:9"]).err().unwrap().code, 2);
    }

    #[test]
    fn cache_returns_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let args = ["profile", "--preset", "zd:2", "--radius", "6", "--nmax", "30", "--p", "1,2", "--cache-dir", d];
        let fresh = run_args(&args).map_err(|f| f.message).unwrap().text;
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        let cached = run_args(&args).map_err(|f| f.message).unwrap().text;
        assert_eq!(fresh, cached);
        let uncached = run_args(&args[..args.len() - 2]).map_err(|f| f.message).unwrap().text;
        assert_eq!(fresh, uncached);
    }

    #[test]
    fn folner_strategy_sizes_its_window() {
        let out =
            run_args(&["profile", "--preset", "zd:2", "--strategy", "folner", "--nmax", "1000", "--format", "csv"])
                .map_err(|f| f.message)
                .unwrap()
                .text;
        let rows: Vec<(f64, f64)> = out
            .lines()
            .skip(1)
            .map(|l| {
                let mut it = l.split(',');
                (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
            })
            .collect();
        assert_eq!(rows.last().unwrap().0, 1000.0);
        // Roughly a square-root trend: value/√n stays in a bounded band.
        let band: Vec<f64> = rows.iter().filter(|r| r.0 >= 50.0).map(|r| r.1 / r.0.sqrt()).collect();
        let (lo, hi) = band.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        assert!(hi / lo < 4.0, "{lo} {hi}");
    }

    #[test]
    fn folner_export_round_trips_through_constant() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let doc = json_of(&["folner", "--preset", "zd:1", "--radius", "12", "--nmax", "3", "--export", d]);
        assert_eq!(doc["points"][2]["value"], 6.0);
        let file = dir.path().join("folner_3.txt");
        let f = run_args(&["constant", "--preset", "zd:1", "--radius", "12", "--vertices", file.to_str().unwrap()]);
        assert!(f.is_ok());
    }

    #[test]
    fn deterministic_output() {
        let args = ["profile", "--preset", "free:2", "--radius", "5", "--p", "2", "--nmax", "25", "--seed", "7"];
        assert_eq!(
            run_args(&args).map_err(|f| f.message).unwrap().text,
            run_args(&args).map_err(|f| f.message).unwrap().text
        );
    }
}
