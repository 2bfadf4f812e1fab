//! The `coarse-tw` command line.
//!
//! Every command prints one JSON object holding a `payload`, its SHA-256 and
//! the wall time. The payload is a pure function of the arguments and the
//! inputs, so two runs can be compared byte for byte. Exit codes: 0 when
//! every check holds, 1 when a check fails or an invariant breaks, 2 on
//! usage or input errors.

mod commands;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::builders::{Algorithm, BoundCheck};
use crate::decomposition::LayerShape;
use crate::error::Error;
use crate::separator::OracleMode;
use crate::transforms::ClusterRule;

#[derive(Debug, Parser)]
#[command(
    name = "coarse-tw",
    version,
    about = "Ball-coverable tree decompositions and coarsenings"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Exact,
    Greedy,
}

impl From<Oracle> for OracleMode {
    fn from(o: Oracle) -> Self {
        match o {
            Oracle::Exact => OracleMode::Exact,
            Oracle::Greedy => OracleMode::Greedy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Simple,
    Round,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Simple => Algorithm::Simple,
            Algo::Round => Algorithm::Round,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Weighted,
    Unweighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Path,
    Branching,
}

impl From<Shape> for LayerShape {
    fn from(s: Shape) -> Self {
        match s {
            Shape::Path => LayerShape::Path,
            Shape::Branching => LayerShape::Branching,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Verbatim,
    Descendant,
}

impl From<Rule> for ClusterRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Verbatim => ClusterRule::Verbatim,
            Rule::Descendant => ClusterRule::Descendant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Chain {
    /// Distance graph certificate, then the round builder.
    Round,
    /// Simple builder, then the balanced bag of its decomposition.
    Bag,
    /// Weighted distance graph, layered tree-partition of it, coarsening.
    Coarsen,
    /// Unweighted distance graph, simple builder on it, lift.
    Lift,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph from a family.
    Gen(GenArgs),
    /// Find a balanced separator made of balls, or compute bsn.
    Separator(SeparatorArgs),
    /// Build a tree decomposition with ball covers.
    Decompose(DecomposeArgs),
    /// Build a distance graph and certify its distortion.
    Distgraph(DistgraphArgs),
    /// Move a host separator into a distance graph.
    Transfer(TransferArgs),
    /// Coarsen a tree-partition of H into one of G.
    Coarsen(CoarsenArgs),
    /// Pull a covered tree decomposition of H back to G.
    Lift(LiftArgs),
    /// Validate a decomposition and tabulate bounds.
    Check(CheckArgs),
    /// Run a chain of the above and check every step.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Shorthand such as P8, C16, G4x5, or a JSON family spec.
    pub spec: String,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the edge-list text format instead of JSON.
    #[arg(long)]
    pub edge_list: bool,
}

#[derive(Debug, Args)]
pub struct SeparatorArgs {
    /// Graph file, shorthand or JSON family spec.
    pub graph: String,
    #[arg(short, default_value_t = 1)]
    pub k: usize,
    #[arg(short, default_value_t = 1)]
    pub r: u64,
    /// Weight function file; uniform weights otherwise.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Oracle::Exact)]
    pub oracle: Oracle,
    /// Compute bsn over indicators up to this many balls instead.
    #[arg(long)]
    pub bsn: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    pub graph: String,
    #[arg(long, value_enum, default_value_t = Algo::Simple)]
    pub algo: Algo,
    #[arg(short, default_value_t = 1)]
    pub k: usize,
    #[arg(short, default_value_t = 1)]
    pub r: u64,
    #[arg(long)]
    pub gamma_cap: Option<u64>,
    #[arg(long, value_enum, default_value_t = Oracle::Exact)]
    pub oracle: Oracle,
    #[arg(long)]
    pub depth_limit: Option<usize>,
    /// Write the decomposition here instead of into the report.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Write per-bag coverability statistics here.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistgraphArgs {
    pub graph: String,
    #[arg(short, default_value_t = 1)]
    pub r: u64,
    /// Defaults to 3 for the weighted and 4 for the unweighted variant.
    #[arg(long)]
    pub sigma: Option<u64>,
    #[arg(long)]
    pub unweighted: bool,
    /// Comma-separated maximal distance-r independent set.
    #[arg(long, value_delimiter = ',')]
    pub independent: Option<Vec<usize>>,
    /// Dimension estimate for the degree bound.
    #[arg(short)]
    pub m: Option<u32>,
    /// Estimate the dimension from the graph for the degree bound.
    #[arg(long, conflicts_with = "m")]
    pub estimate_m: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    pub graph: String,
    #[arg(long)]
    pub dg: PathBuf,
    #[arg(long, value_enum)]
    pub variant: Variant,
    #[arg(short, default_value_t = 1)]
    pub k: usize,
    /// Weight function on H; uniform otherwise.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(short)]
    pub m: Option<u32>,
    #[arg(long, value_enum, default_value_t = Oracle::Exact)]
    pub oracle: Oracle,
}

#[derive(Debug, Args)]
pub struct CoarsenArgs {
    pub graph: String,
    /// Distance graph supplying H and phi.
    #[arg(long, conflicts_with_all = ["h", "phi"])]
    pub dg: Option<PathBuf>,
    /// Weighted graph H.
    #[arg(long, requires = "phi")]
    pub h: Option<PathBuf>,
    /// JSON array mapping each vertex of G to a vertex of H.
    #[arg(long, requires = "h")]
    pub phi: Option<PathBuf>,
    /// Tree-partition of H; a layered one otherwise.
    #[arg(long)]
    pub tp: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Shape::Path)]
    pub layered: Shape,
    /// Rationals such as 3 or 7/2. Default to sigma for a weighted distance graph.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(short)]
    pub r: Option<u64>,
    #[arg(long, value_enum, default_value_t = Rule::Verbatim)]
    pub rule: Rule,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    pub graph: String,
    #[arg(long)]
    pub dg: PathBuf,
    /// Covered tree decomposition of H.
    #[arg(long)]
    pub td: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, required_unless_present = "tp", conflicts_with = "tp")]
    pub td: Option<PathBuf>,
    #[arg(long)]
    pub tp: Option<PathBuf>,
    /// Tabulate the cover bounds of this builder.
    #[arg(long, value_enum, requires = "td")]
    pub bound: Option<Algo>,
    #[arg(short, default_value_t = 1)]
    pub k: usize,
    #[arg(short, default_value_t = 1)]
    pub r: u64,
    #[arg(long)]
    pub gamma_cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    pub graph: String,
    #[arg(long, value_enum)]
    pub chain: Chain,
    /// Balls per separator; computed as bsn when omitted.
    #[arg(short)]
    pub k: Option<usize>,
    #[arg(short, default_value_t = 1)]
    pub r: u64,
    #[arg(long, value_enum, default_value_t = Shape::Path)]
    pub layered: Shape,
    #[arg(long, value_enum, default_value_t = Rule::Verbatim)]
    pub rule: Rule,
}

/// What a command hands back to the envelope.
#[derive(Debug, Default)]
struct Outcome {
    inputs: BTreeMap<String, String>,
    result: serde_json::Value,
    checks: Vec<BoundCheck>,
}

#[derive(Serialize)]
struct Payload<'a> {
    command: &'a str,
    args: &'a [String],
    inputs: &'a BTreeMap<String, String>,
    ok: bool,
    checks: &'a [BoundCheck],
    result: &'a serde_json::Value,
}

#[derive(Serialize)]
struct Envelope<'a> {
    payload: Payload<'a>,
    payload_sha256: String,
    wall_time_ms: u128,
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DecompositionFailure { .. } | Error::CapExceeded { .. } | Error::InvariantViolation { .. } => 1,
        _ => 2,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Separator(_) => "separator",
        Command::Decompose(_) => "decompose",
        Command::Distgraph(_) => "distgraph",
        Command::Transfer(_) => "transfer",
        Command::Coarsen(_) => "coarsen",
        Command::Lift(_) => "lift",
        Command::Check(_) => "check",
        Command::Pipeline(_) => "pipeline",
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    let budget = crate::budget::Budget::from_env();
    let outcome = match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Separator(a) => commands::separator(a, &budget),
        Command::Decompose(a) => commands::decompose(a, &budget),
        Command::Distgraph(a) => commands::distgraph(a, &budget),
        Command::Transfer(a) => commands::transfer(a, &budget),
        Command::Coarsen(a) => commands::coarsen(a),
        Command::Lift(a) => commands::lift(a),
        Command::Check(a) => commands::check_cmd(a),
        Command::Pipeline(a) => commands::pipeline(a, &budget),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let ok = outcome.checks.iter().all(|c| c.holds);
    let payload = Payload {
        command: command_name(&cli.command),
        args: &echo,
        inputs: &outcome.inputs,
        ok,
        checks: &outcome.checks,
        result: &outcome.result,
    };
    let digest = sha256_hex(&serde_json::to_vec(&payload).expect("serializable"));
    let wall_time_ms = start.elapsed().as_millis();
    let written = match cli.format {
        Format::Json => {
            let env = Envelope {
                payload,
                payload_sha256: digest,
                wall_time_ms,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&env).expect("serializable"))
        }
        Format::Text => write_text(out, &payload, &digest, wall_time_ms),
    };
    if written.is_err() {
        return 2;
    }
    if ok {
        0
    } else {
        1
    }
}

fn write_text(out: &mut dyn Write, p: &Payload, digest: &str, wall_time_ms: u128) -> std::io::Result<()> {
    writeln!(out, "command: {}", p.command)?;
    for (name, sha) in p.inputs {
        writeln!(out, "input {name}: {sha}")?;
    }
    for c in p.checks {
        let verdict = if c.holds { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{verdict} {:<16} observed {:<12} bound {}",
            c.name, c.observed, c.bound
        )?;
    }
    if let serde_json::Value::Object(map) = p.result {
        for (key, value) in map {
            match value {
                serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                    writeln!(out, "{key}: {}", serde_json::to_string(value).expect("serializable"))?
                }
                other => writeln!(out, "{key}: {other}")?,
            }
        }
    }
    writeln!(out, "ok: {}", p.ok)?;
    writeln!(out, "payload sha256: {digest}")?;
    writeln!(out, "wall time: {wall_time_ms} ms")
}
