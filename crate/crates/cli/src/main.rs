use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use rigidsolve::connectivity::connectivity;
use rigidsolve::decomposition::{cleavage_units, reduce_to_minimal, wheel_replace};
use rigidsolve::graph::{detect_format, parse_graph_as, Format, Graph};
use rigidsolve::planarity::is_planar;
use rigidsolve::realization::{
    glue_realize, henneberg_order, newton_solve, parse_branches, quadratic_realize, BranchVector, EdgeLengths,
};
use rigidsolve::rigidity::{generic_rank, is_globally_rigid, is_minimally_rigid, is_redundantly_rigid, is_rigid};
use rigidsolve::selftest::run_selftest;
use rigidsolve::solvability::decide_solvability;

/// Rigidity analysis, radical solvability and realization of 2D frameworks.
#[derive(Parser)]
#[command(name = "rigidsolve", version)]
struct Cli {
    /// Input format; detected from the file contents when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<InputFormat>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Edgelist,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Quadratic,
    Glue,
    Newton,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, rigidity flags, planarity and connectivity.
    Analyze { input: PathBuf },
    /// Radical solvability verdict with its certificate.
    Decide { input: PathBuf },
    /// Cleavage units along 2-separations.
    Decompose { input: PathBuf },
    /// One wheel replacement, or the full reduction with `--all`.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        all: bool,
    },
    /// Coordinates realizing the given squared edge lengths.
    Realize {
        input: PathBuf,
        #[arg(long)]
        lengths: PathBuf,
        /// One `+`/`-` (or `1`/`0`) per branch; defaults to all `+`.
        #[arg(long)]
        branches: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Glue)]
        method: Method,
    },
    /// Runs the invariant suites and reports pass/fail counts.
    Selftest,
}

/// A failure reported as `{"error": {"kind", "detail"}}`; exit code 2 for
/// usage errors and 1 otherwise.
struct Failure {
    kind: &'static str,
    detail: String,
}

fn fail(kind: &'static str, e: impl ToString) -> Failure {
    Failure { kind, detail: e.to_string() }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        if self.kind == "usage" {
            2
        } else {
            1
        }
    }
}

const NEWTON_RESTARTS: usize = 20;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path, format: Option<InputFormat>) -> Result<Graph, Failure> {
    let text = read(path)?;
    let format = match format {
        Some(InputFormat::Edgelist) => Format::EdgeList,
        Some(InputFormat::Json) => Format::Json,
        None => detect_format(&text),
    };
    parse_graph_as(&text, format).map_err(|e| fail("parse", e))
}

fn to_value(x: &impl Serialize) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| fail("serialize", e))
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let graph = |p: &Path| load_graph(p, cli.format);
    let out = match &cli.command {
        Command::Analyze { input } => {
            let g = graph(input)?;
            json!({
                "n": g.n(),
                "m": g.m(),
                "rank": generic_rank(&g),
                "rigid": is_rigid(&g),
                "minimallyRigid": is_minimally_rigid(&g),
                "redundantlyRigid": is_redundantly_rigid(&g),
                "globallyRigid": is_globally_rigid(&g),
                "planar": is_planar(&g),
                "connectivity": connectivity(&g),
            })
        }
        Command::Decide { input } => to_value(&decide_solvability(&graph(input)?).map_err(|e| fail("solvability", e))?)?,
        Command::Decompose { input } => to_value(&cleavage_units(&graph(input)?).map_err(|e| fail("decomposition", e))?)?,
        Command::Reduce { input, all } => {
            let g = graph(input)?;
            let planar = is_planar(&g);
            if *all {
                to_value(&reduce_to_minimal(&g, planar).map_err(|e| fail("decomposition", e))?)?
            } else {
                to_value(&wheel_replace(&g, planar).map_err(|e| fail("decomposition", e))?)?
            }
        }
        Command::Realize { input, lengths, branches, method } => {
            if branches.is_some() && !matches!(method, Method::Quadratic) {
                return Err(fail("usage", "--branches requires --method quadratic"));
            }
            let g = graph(input)?;
            let d: EdgeLengths = serde_json::from_str(&read(lengths)?).map_err(|e| fail("parse", e))?;
            let d = EdgeLengths::new(d.edges, d.d).map_err(|e| fail("realization", e))?;
            let placement = match method {
                Method::Quadratic => {
                    let order = henneberg_order(&g)
                        .ok_or_else(|| fail("realization", "graph has no construction by degree-two additions"))?;
                    let bv = match branches {
                        Some(s) => parse_branches(s).map_err(|e| fail("usage", e))?,
                        None => BranchVector::all_plus(order.steps.len() + 1),
                    };
                    quadratic_realize(&g, &d, &order, &bv)
                }
                Method::Glue => glue_realize(&g, &d, cli.seed),
                Method::Newton => newton_solve(&g, &d, cli.seed, NEWTON_RESTARTS),
            }
            .map_err(|e| fail("realization", e))?;
            to_value(&placement)?
        }
        Command::Selftest => {
            let report = run_selftest(cli.seed);
            return Ok((to_value(&report)?, report.ok()));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, ok)) => {
            println!("{value}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(f) => {
            println!("{}", json!({ "error": { "kind": f.kind, "detail": f.detail } }));
            ExitCode::from(f.exit_code())
        }
    }
}
