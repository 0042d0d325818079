//! The `obgeo` command line: point files in, JSON, SVG and trace dumps out.
//!
//! Exit status 0 on success, 1 for unreadable input or bad flags, 2 when the
//! input violates a precondition, 3 when an audit finds differing traces.

pub mod audit;
pub mod output;
pub mod points;
pub mod workload;

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::error::{CoreError, HullError, ListError, ProximityError, QuadtreeError, TreeError, WspdError};
use crate::hull::convex_hull;
use crate::proximity::{all_nearest_neighbors_with, closest_pair_with};
use crate::quadtree::build_compressed_quadtree;
use crate::trace::{TracedArray, Tracer};
use crate::wspd::{wspd, Separation};
use output::{AnnOut, ClosestPairOut, Envelope, HullOut, NeighborOut, NodeOut, Parameters, PointOut, QuadtreeOut, WspdOut};
use points::{normalize, parse_points, Normalized};
pub use workload::{Algorithm, RunParams, Workload};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("input has no points")]
    NoPoints,
    #[error("grid bits {0} outside 1..=31")]
    GridBits(u32),
    #[error("lines {first} and {second} round to the same grid point ({x}, {y})")]
    Collision { first: usize, second: usize, x: i64, y: i64 },
    #[error("need at least {min} items, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    List(#[from] ListError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Quadtree(#[from] QuadtreeError),
    #[error(transparent)]
    Wspd(#[from] WspdError),
    #[error(transparent)]
    Proximity(#[from] ProximityError),
    #[error("traces differ on {0} of the compared inputs")]
    AuditFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } | CliError::NoPoints => 1,
            CliError::AuditFailed(_) => 3,
            _ => 2,
        }
    }
}

/// A rational `num/den`, written `21/10`, `2.1` or `3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl std::str::FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("not a non-negative rational: {s:?}");
        let digits = |t: &str| -> Result<u64, String> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        let (num, den) = if let Some((a, b)) = s.split_once('/') {
            (digits(a)?, digits(b)?)
        } else if let Some((a, b)) = s.split_once('.') {
            if b.len() > 6 {
                return Err(format!("at most 6 decimals: {s:?}"));
            }
            let den = 10u64.pow(b.len() as u32);
            (digits(a)?.checked_mul(den).and_then(|v| v.checked_add(digits(b).ok()?)).ok_or_else(bad)?, den)
        } else {
            (digits(s)?, 1)
        };
        if den == 0 {
            return Err(bad());
        }
        let g = gcd(num, den);
        Ok(Rational { num: num / g, den: den / g })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Parser)]
#[command(name = "obgeo", version, about = "Data-oblivious geometry on traced memory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convex hull vertices and per-point edge labels.
    Hull(DrawArgs),
    /// Compressed quadtree nodes.
    Quadtree(DrawArgs),
    /// Well-separated pair decomposition over the quadtree.
    Wspd(CommonArgs),
    /// Closest pair of points.
    ClosestPair(CommonArgs),
    /// All nearest neighbors.
    Ann(DrawArgs),
    /// Compare the trace on the input against random inputs of the same size.
    Audit(AuditArgs),
    /// Trace lengths over a doubling schedule.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Point file: two numbers per line, `#` comments.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// WSPD separation s > 2.
    #[arg(long, default_value = "21/10")]
    pub separation: Rational,
    #[arg(long, default_value_t = 20)]
    pub grid_bits: u32,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DrawArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    pub algorithm: Algorithm,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Input size when no `--input` is given.
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Write the reference trace, one `<array_id> <index> <r|w>` per line.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// All algorithms when omitted.
    pub algorithm: Option<Algorithm>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "21/10")]
    pub separation: Rational,
    #[arg(long, default_value_t = 20)]
    pub grid_bits: u32,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Smallest n is 2^min-exp.
    #[arg(long, default_value_t = 6)]
    pub min_exp: u32,
    #[arg(long, default_value_t = 13)]
    pub max_exp: u32,
}

/// Parses `args` (program name first) and runs; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("obgeo: {e}");
            e.exit_code()
        }
    }
}

fn run_params(seed: u64, separation: Rational, grid_bits: u32) -> Result<RunParams, CliError> {
    if !(1..=31).contains(&grid_bits) {
        return Err(CliError::GridBits(grid_bits));
    }
    Ok(RunParams { seed, grid_bits, separation: Separation::new(separation.num, separation.den)? })
}

fn parameters(p: &RunParams) -> Parameters {
    Parameters { seed: p.seed, separation: p.separation.to_string(), grid_bits: p.grid_bits, trials: None, schedule: None }
}

fn load(path: &Path, bits: u32) -> Result<Normalized, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    normalize(&parse_points(&text)?, bits)
}

fn required_input(c: &CommonArgs) -> Result<&Path, CliError> {
    c.input.as_deref().ok_or_else(|| CliError::Usage("--input is required".into()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

/// Pretty JSON with a trailing newline, to `path` or stdout.
fn emit<R: Serialize>(envelope: &Envelope<R>, path: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(envelope).expect("results serialize");
    text.push('\n');
    match path {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn dispatch(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Hull(a) => hull_cmd(a),
        Command::Quadtree(a) => quadtree_cmd(a),
        Command::Wspd(c) => wspd_cmd(c),
        Command::ClosestPair(c) => closest_pair_cmd(c),
        Command::Ann(a) => ann_cmd(a),
        Command::Audit(a) => audit_cmd(a),
        Command::Bench(b) => bench_cmd(b),
    }
}

fn hull_cmd(a: &DrawArgs) -> Result<(), CliError> {
    let c = &a.common;
    let params = run_params(c.seed, c.separation, c.grid_bits)?;
    let norm = load(required_input(c)?, params.grid_bits)?;
    let pts = TracedArray::from_vec(&Tracer::counting(), norm.points.clone());
    let hull = convex_hull(&pts)?;
    if let Some(svg) = &a.svg {
        write_file(svg, output::hull_svg(&norm.points, &hull, params.grid_bits).as_bytes())?;
    }
    let result = HullOut::new(&norm.points, &hull);
    emit(&Envelope { algorithm: "hull", n: norm.points.len(), parameters: parameters(&params), result }, c.json.as_deref())
}

fn quadtree_cmd(a: &DrawArgs) -> Result<(), CliError> {
    let c = &a.common;
    let params = run_params(c.seed, c.separation, c.grid_bits)?;
    let norm = load(required_input(c)?, params.grid_bits)?;
    let pts = TracedArray::from_vec(&Tracer::counting(), norm.points.clone());
    let tree = build_compressed_quadtree(&pts, params.grid_bits)?;
    let nodes = tree.node_list();
    if let Some(svg) = &a.svg {
        write_file(svg, output::quadtree_svg(&norm.points, &nodes, params.grid_bits).as_bytes())?;
    }
    let result = QuadtreeOut {
        node_count: nodes.len(),
        internal_count: nodes.iter().filter(|q| q.point.is_none()).count(),
        nodes: NodeOut::all(&nodes),
        points: PointOut::all(&norm.points),
    };
    emit(&Envelope { algorithm: "quadtree", n: norm.points.len(), parameters: parameters(&params), result }, c.json.as_deref())
}

fn wspd_cmd(c: &CommonArgs) -> Result<(), CliError> {
    let params = run_params(c.seed, c.separation, c.grid_bits)?;
    let norm = load(required_input(c)?, params.grid_bits)?;
    let pts = TracedArray::from_vec(&Tracer::counting(), norm.points.clone());
    let tree = build_compressed_quadtree(&pts, params.grid_bits)?;
    let w = wspd(&pts, &tree, &params.separation, &mut crate::SeededRng::new(params.seed))?;
    let pairs: Vec<(usize, usize)> = w.pair_list().iter().map(|p| (p.a, p.b)).collect();
    let result = WspdOut {
        pair_count: pairs.len(),
        pairs,
        nodes: NodeOut::all(&tree.node_list()),
        points: PointOut::all(&norm.points),
    };
    emit(&Envelope { algorithm: "wspd", n: norm.points.len(), parameters: parameters(&params), result }, c.json.as_deref())
}

fn closest_pair_cmd(c: &CommonArgs) -> Result<(), CliError> {
    let params = run_params(c.seed, c.separation, c.grid_bits)?;
    let norm = load(required_input(c)?, params.grid_bits)?;
    if norm.points.len() < 2 {
        return Err(CliError::TooSmall { n: norm.points.len(), min: 2 });
    }
    let pts = TracedArray::from_vec(&Tracer::counting(), norm.points.clone());
    let cp = closest_pair_with(&pts, &params.separation)?;
    let result = ClosestPairOut { a: cp.a, b: cp.b, dist_sq: cp.dist_sq, distance: norm.to_input_units(cp.dist_sq) };
    emit(&Envelope { algorithm: "closest-pair", n: norm.points.len(), parameters: parameters(&params), result }, c.json.as_deref())
}

fn ann_cmd(a: &DrawArgs) -> Result<(), CliError> {
    let c = &a.common;
    let params = run_params(c.seed, c.separation, c.grid_bits)?;
    let norm = load(required_input(c)?, params.grid_bits)?;
    if norm.points.len() < 2 {
        return Err(CliError::TooSmall { n: norm.points.len(), min: 2 });
    }
    let pts = TracedArray::from_vec(&Tracer::counting(), norm.points.clone());
    let res = all_nearest_neighbors_with(&pts, &params.separation)?;
    let list = res.neighbor_list();
    if let Some(svg) = &a.svg {
        write_file(svg, output::ann_svg(&norm.points, &list, params.grid_bits).as_bytes())?;
    }
    let neighbors = list
        .iter()
        .map(|nb| NeighborOut { id: nb.id, neighbor: nb.neighbor, dist_sq: nb.dist_sq, distance: norm.to_input_units(nb.dist_sq) })
        .collect();
    let result = AnnOut { neighbors, truncated: res.truncated };
    emit(&Envelope { algorithm: "ann", n: norm.points.len(), parameters: parameters(&params), result }, c.json.as_deref())
}

fn audit_cmd(a: &AuditArgs) -> Result<(), CliError> {
    let c = &a.common;
    let params = run_params(c.seed, c.separation, c.grid_bits)?;
    let base = match &c.input {
        Some(path) => a.algorithm.workload_from_points(&load(path, params.grid_bits)?.points),
        None => a.algorithm.random_workload(a.n, params.grid_bits, &mut audit::data_rng(params.seed, 0))?,
    };
    let (report, reference) = audit::audit(a.algorithm, &base, a.trials, &params, a.dump.is_some())?;
    if let (Some(path), Some(trace)) = (&a.dump, reference) {
        let io_err = |source| CliError::Io { path: path.clone(), source };
        let file = fs::File::create(path).map_err(io_err)?;
        let mut w = BufWriter::new(file);
        trace.dump(&mut w).and_then(|_| w.flush()).map_err(io_err)?;
    }
    let failed = report.mismatches.len();
    let parameters = Parameters { trials: Some(a.trials), ..parameters(&params) };
    emit(&Envelope { algorithm: "audit", n: report.n, parameters, result: report }, c.json.as_deref())?;
    if failed > 0 {
        return Err(CliError::AuditFailed(failed));
    }
    Ok(())
}

fn bench_cmd(b: &BenchArgs) -> Result<(), CliError> {
    let params = run_params(b.seed, b.separation, b.grid_bits)?;
    if b.min_exp > b.max_exp || b.max_exp > 24 {
        return Err(CliError::Usage(format!("bad exponent range {}..={}", b.min_exp, b.max_exp)));
    }
    let sizes: Vec<usize> = (b.min_exp..=b.max_exp).map(|k| 1usize << k).collect();
    let algs: Vec<Algorithm> = b.algorithm.map_or(Algorithm::ALL.to_vec(), |a| vec![a]);
    let mut series = Vec::with_capacity(algs.len());
    for alg in algs {
        let s = audit::bench(alg, &sizes, &params)?;
        eprintln!("{}: fitted c = {:.3}", alg.name(), s.fitted_c);
        for r in &s.rows {
            let ratio = r.doubling.map_or(String::from("-"), |d| format!("{d:.3} <= {:.3}", r.doubling_bound.unwrap_or(0.0)));
            eprintln!("  n = {:>6}  L = {:>12}  L/(n log^2 n) = {:>8.3}  L(n)/L(n/2) = {}", r.n, r.trace_length, r.ratio, ratio);
        }
        series.push(s);
    }
    let parameters = Parameters { schedule: Some(sizes.clone()), ..parameters(&params) };
    emit(&Envelope { algorithm: "bench", n: *sizes.last().unwrap_or(&0), parameters, result: series }, b.json.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        let r = |s: &str| s.parse::<Rational>();
        assert_eq!(r("21/10"), Ok(Rational { num: 21, den: 10 }));
        assert_eq!(r("2.1"), Ok(Rational { num: 21, den: 10 }));
        assert_eq!(r("4/2"), Ok(Rational { num: 2, den: 1 }));
        assert_eq!(r("3"), Ok(Rational { num: 3, den: 1 }));
        assert_eq!(r("2.50"), Ok(Rational { num: 5, den: 2 }));
        for bad in ["", "a", "1/0", "-2", "2/", "1.2.3", "2.1234567"] {
            assert!(r(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Parse { line: 1, msg: String::new() }.exit_code(), 1);
        assert_eq!(CliError::Collision { first: 1, second: 2, x: 0, y: 0 }.exit_code(), 2);
        assert_eq!(CliError::TooSmall { n: 1, min: 2 }.exit_code(), 2);
        assert_eq!(CliError::AuditFailed(1).exit_code(), 3);
    }
}
