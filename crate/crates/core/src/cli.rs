//! The `rooms` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or bounds error,
//! 3 target unreachable or permutation not factorable.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::graph::{export_dot, export_jsonl, verify_graph, ExplicitGraph, InstanceTag};
use crate::model::{Configuration, Instance, DEFAULT_VERTEX_BOUND};
use crate::oracle::{run_oracle, Grid, OracleConfig};
use crate::perm::{factor_into_derangements, Parity, PermError, Permutation};
use crate::planner::{plan_path, PlanOutcome};
use crate::walk::{run_walk, StatsMode, WalkConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNREACHABLE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "rooms", version, about = "People moving between rooms: graph analysis, path planning and random walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build G(N, M), decompose it and check the connectivity predictions.
    Analyze {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Also write the graph as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Also write one JSON record per vertex.
        #[arg(long)]
        jsonl: Option<PathBuf>,
    },
    /// Plan a path between two configurations.
    Path {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Also compute the BFS distance and check that both agree on reachability.
        #[arg(long)]
        compare_bfs: bool,
    },
    /// Run seeded random walks.
    Walk {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        walkers: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start configuration; defaults to person i in room (i mod M) + 1.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::PerState)]
        mode: ModeArg,
    },
    /// Write a permutation as a product of at most four derangements.
    Derange {
        /// 1-based image list, e.g. 3,2,1,4.
        #[arg(long)]
        perm: String,
    },
    /// Compare the planner against BFS over a grid of instances.
    Oracle {
        /// Instance grid such as 1..6x2..4.
        #[arg(long)]
        grid: String,
        /// Random ordered pairs per instance with more than 1000 vertices.
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_VERTEX_BOUND)]
        max_vertices: u64,
    },
    /// Write the whole graph as DOT or JSON lines.
    Export {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
        /// Output file; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    #[arg(long, short = 'n')]
    pub people: usize,
    #[arg(long, short = 'm')]
    pub rooms: usize,
    /// Largest M^N for commands that enumerate vertices.
    #[arg(long, default_value_t = DEFAULT_VERTEX_BOUND)]
    pub max_vertices: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    PerState,
    Occupancy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Jsonl,
}

type CmdResult = Result<u8, (u8, String)>;

fn usage<E: std::fmt::Display>(e: E) -> (u8, String) {
    (EXIT_USAGE, e.to_string())
}

fn io_err(e: io::Error) -> (u8, String) {
    (EXIT_USAGE, format!("i/o error: {e}"))
}

fn instance(args: &InstanceArgs) -> Result<Instance, (u8, String)> {
    Instance::new(args.people, args.rooms).map_err(usage)
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), (u8, String)> {
    let text = serde_json::to_string(value).map_err(|e| (EXIT_FAIL, e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

/// Runs a parsed command, writing JSON to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let res = match cli.command {
        Command::Analyze { instance, dot, jsonl } => analyze(&instance, dot, jsonl, out),
        Command::Path {
            instance,
            from,
            to,
            compare_bfs,
        } => path(&instance, &from, &to, compare_bfs, out),
        Command::Walk {
            instance,
            steps,
            walkers,
            seed,
            start,
            mode,
        } => walk(&instance, steps, walkers, seed, start.as_deref(), mode, out),
        Command::Derange { perm } => derange(&perm, out),
        Command::Oracle {
            grid,
            pairs,
            seed,
            max_vertices,
        } => oracle(&grid, pairs, seed, max_vertices, out),
        Command::Export {
            instance,
            format,
            output,
        } => export(&instance, format, output, out),
    };
    let code = match res {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    };
    let _ = out.flush();
    code
}

fn write_file(
    path: &PathBuf,
    graph: &ExplicitGraph,
    f: fn(&ExplicitGraph, &mut BufWriter<File>) -> io::Result<()>,
) -> Result<(), (u8, String)> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    f(graph, &mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

fn analyze(
    args: &InstanceArgs,
    dot: Option<PathBuf>,
    jsonl: Option<PathBuf>,
    out: &mut dyn Write,
) -> CmdResult {
    let graph = ExplicitGraph::build(instance(args)?, args.max_vertices).map_err(usage)?;
    let report = verify_graph(&graph);
    if let Some(p) = &dot {
        write_file(p, &graph, export_dot)?;
    }
    if let Some(p) = &jsonl {
        write_file(p, &graph, export_jsonl)?;
    }
    emit(out, &report)?;
    Ok(if report.all_pass { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct PathRecord {
    instance: InstanceTag,
    reachable: bool,
    length: Option<usize>,
    path: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<crate::planner::UnreachableReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bfs_distance: Option<Option<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<bool>,
}

fn path(args: &InstanceArgs, from: &str, to: &str, compare_bfs: bool, out: &mut dyn Write) -> CmdResult {
    let inst = instance(args)?;
    let f = Configuration::parse(from, inst).map_err(usage)?;
    let g = Configuration::parse(to, inst).map_err(usage)?;
    let bfs = if compare_bfs {
        let graph = ExplicitGraph::build(inst, args.max_vertices).map_err(usage)?;
        let (s, t) = (graph.vertex_of(&f).map_err(usage)?, graph.vertex_of(&g).map_err(usage)?);
        Some(graph.pair_distances(&[(s, t)])[0])
    } else {
        None
    };
    let outcome = plan_path(&f, &g).map_err(|e| (EXIT_FAIL, format!("planner error: {e}")))?;
    let (reachable, length, steps, reason) = match &outcome {
        PlanOutcome::Reached(p) => (true, Some(p.len()), p.steps().iter().map(|c| c.to_string()).collect(), None),
        PlanOutcome::Unreachable(r) => (false, None, Vec::new(), Some(*r)),
    };
    let agreement = bfs.map(|d| d.is_some() == reachable);
    emit(
        out,
        &PathRecord {
            instance: inst.into(),
            reachable,
            length,
            path: steps,
            reason,
            bfs_distance: bfs,
            agreement,
        },
    )?;
    Ok(match (agreement, reachable) {
        (Some(false), _) => EXIT_FAIL,
        (_, true) => EXIT_OK,
        (_, false) => EXIT_UNREACHABLE,
    })
}

fn walk(
    args: &InstanceArgs,
    steps: u64,
    walkers: u64,
    seed: u64,
    start: Option<&str>,
    mode: ModeArg,
    out: &mut dyn Write,
) -> CmdResult {
    let inst = instance(args)?;
    let start = match start {
        Some(text) => Configuration::parse(text, inst).map_err(usage)?,
        None => {
            let rooms = (0..inst.people()).map(|i| i % inst.rooms()).collect();
            Configuration::new(inst, rooms).map_err(usage)?
        }
    };
    let cfg = WalkConfig {
        start,
        steps,
        walkers,
        seed,
        mode: match mode {
            ModeArg::PerState => StatsMode::PerState,
            ModeArg::Occupancy => StatsMode::Occupancy,
        },
        bound: args.max_vertices,
    };
    let stats = run_walk(&cfg).map_err(usage)?;
    writeln!(out, "{}", stats.to_json()).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn derange(text: &str, out: &mut dyn Write) -> CmdResult {
    let p = Permutation::parse(text).map_err(usage)?;
    let parity = match p.parity() {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    match factor_into_derangements(&p) {
        Ok(fac) => {
            let factors: Vec<String> = fac.factors().iter().map(|f| f.to_string()).collect();
            let verified = fac.product() == p && fac.factors().iter().all(Permutation::is_derangement) && fac.len() <= 4;
            emit(
                out,
                &json!({
                    "perm": p.to_string(),
                    "parity": parity,
                    "factors": factors,
                    "count": fac.len(),
                    "verified": verified,
                }),
            )?;
            Ok(if verified { EXIT_OK } else { EXIT_FAIL })
        }
        Err(PermError::NotFactorable) => {
            emit(
                out,
                &json!({"perm": p.to_string(), "parity": parity, "reason": "NotFactorable"}),
            )?;
            Ok(EXIT_UNREACHABLE)
        }
        Err(e) => Err((EXIT_FAIL, e.to_string())),
    }
}

fn oracle(grid: &str, pairs: usize, seed: u64, bound: u64, out: &mut dyn Write) -> CmdResult {
    let grid = Grid::parse(grid).map_err(usage)?;
    let report = run_oracle(&OracleConfig { grid, pairs, seed, bound }).map_err(usage)?;
    emit(out, &report)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn export(
    args: &InstanceArgs,
    format: ExportFormat,
    output: Option<PathBuf>,
    out: &mut dyn Write,
) -> CmdResult {
    let graph = ExplicitGraph::build(instance(args)?, args.max_vertices).map_err(usage)?;
    let f = match format {
        ExportFormat::Dot => export_dot,
        ExportFormat::Jsonl => export_jsonl,
    };
    match output {
        Some(p) => write_file(&p, &graph, f)?,
        None => {
            let mut w = BufWriter::new(out);
            match format {
                ExportFormat::Dot => export_dot(&graph, &mut w),
                ExportFormat::Jsonl => export_jsonl(&graph, &mut w),
            }
            .map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}
