//! Planner-versus-BFS conformance over a grid of instances.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::panic::{self, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{ExplicitGraph, InstanceTag};
use crate::model::{Instance, ModelError};
use crate::planner::{path_length_ceiling, plan_path};

/// Instances with at most this many vertices are checked on every ordered pair.
pub const ALL_PAIRS_LIMIT: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("could not parse grid {0:?}; expected N1..N2xM1..M2")]
    GridSyntax(String),
    #[error("grid {0:?} contains no valid instance")]
    EmptyGrid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `N1..N2 x M1..M2`, both ends inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub people: RangeInclusive<usize>,
    pub rooms: RangeInclusive<usize>,
}

fn parse_range(text: &str) -> Option<RangeInclusive<usize>> {
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo.trim(), hi.trim()),
        None => (text.trim(), text.trim()),
    };
    let lo: usize = lo.parse().ok()?;
    let hi: usize = hi.parse().ok()?;
    (lo <= hi).then_some(lo..=hi)
}

impl Grid {
    /// Parses `"1..6x2..4"`; a bare number is a one-element range.
    pub fn parse(text: &str) -> Result<Grid, OracleError> {
        let bad = || OracleError::GridSyntax(text.to_string());
        let (n, m) = text.split_once(['x', 'X', '×']).ok_or_else(bad)?;
        let grid = Grid {
            people: parse_range(n).ok_or_else(bad)?,
            rooms: parse_range(m).ok_or_else(bad)?,
        };
        if grid.instances().is_empty() {
            return Err(OracleError::EmptyGrid(text.to_string()));
        }
        Ok(grid)
    }

    /// Valid instances, by `N` then `M`.
    pub fn instances(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        for n in self.people.clone() {
            for m in self.rooms.clone() {
                if let Ok(inst) = Instance::new(n, m) {
                    out.push(inst);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub grid: Grid,
    /// Random ordered pairs per instance above [`ALL_PAIRS_LIMIT`].
    pub pairs: usize,
    pub seed: u64,
    pub bound: u64,
}

/// A pair where the planner and BFS disagree, or the planner path is bad.
#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub from: String,
    pub to: String,
    pub planner: Option<usize>,
    pub bfs: Option<u32>,
    pub issue: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceConformance {
    pub instance: InstanceTag,
    pub vertices: u64,
    pub all_pairs: bool,
    pub pairs_checked: usize,
    pub reachable_pairs: usize,
    pub agreement: bool,
    pub ceiling: usize,
    pub max_planner_length: usize,
    pub mean_planner_length: f64,
    pub max_bfs_distance: u32,
    pub mean_bfs_distance: f64,
    pub max_excess: usize,
    pub disagreements: Vec<Disagreement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub n: usize,
    pub max_planner_length: usize,
    pub max_bfs_distance: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub pairs: usize,
    pub instances: Vec<InstanceConformance>,
    pub max_length_vs_n: Vec<CurvePoint>,
    pub pairs_checked: usize,
    pub disagreement_count: usize,
    pub pass: bool,
}

/// The sampling stream for one instance: the oracle seed, stream `N << 32 | M`.
fn instance_rng(seed: u64, inst: Instance) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((inst.people() as u64) << 32) | inst.rooms() as u64);
    rng
}

/// Ordered vertex pairs checked for one instance.
pub fn sample_pairs(inst: Instance, count: u64, pairs: usize, seed: u64) -> Vec<(u32, u32)> {
    if count <= ALL_PAIRS_LIMIT {
        let c = count as u32;
        return (0..c).flat_map(|s| (0..c).map(move |t| (s, t))).collect();
    }
    let mut rng = instance_rng(seed, inst);
    (0..pairs)
        .map(|_| {
            let s = rng.random_range(0..count) as u32;
            let t = rng.random_range(0..count) as u32;
            (s, t)
        })
        .collect()
}

/// Checks one instance; the graph must already be built.
pub fn check_instance(graph: &ExplicitGraph, pairs: &[(u32, u32)]) -> InstanceConformance {
    let inst = graph.instance();
    let ceiling = path_length_ceiling(inst.people(), inst.rooms());
    let distances = graph.pair_distances(pairs);
    let mut disagreements = Vec::new();
    let (mut reachable, mut sum_len, mut sum_bfs) = (0usize, 0usize, 0u64);
    let (mut max_len, mut max_bfs, mut max_excess) = (0usize, 0u32, 0usize);

    for (&(s, t), &bfs) in pairs.iter().zip(&distances) {
        let (f, g) = (graph.config(s), graph.config(t));
        let mut report = |planner: Option<usize>, issue: String| {
            disagreements.push(Disagreement {
                from: f.to_string(),
                to: g.to_string(),
                planner,
                bfs,
                issue,
            })
        };
        // plan_path asserts its own output; a tripped assertion is a finding here
        let outcome = match panic::catch_unwind(AssertUnwindSafe(|| plan_path(&f, &g))) {
            Ok(Ok(o)) => o,
            Ok(Err(e)) => {
                report(None, format!("planner error: {e}"));
                continue;
            }
            Err(_) => {
                report(None, "planner panicked".into());
                continue;
            }
        };
        let len = outcome.path().map(|p| p.len());
        match (outcome.path(), bfs) {
            (Some(path), Some(d)) => {
                reachable += 1;
                let l = path.len();
                if !path.is_valid() || path.first() != &f || path.last() != &g {
                    report(len, "planner path fails validation".into());
                } else if l < d as usize {
                    report(len, "planner path shorter than BFS distance".into());
                } else if l > ceiling {
                    report(len, format!("planner path exceeds ceiling {ceiling}"));
                }
                sum_len += l;
                sum_bfs += d as u64;
                max_len = max_len.max(l);
                max_bfs = max_bfs.max(d);
                max_excess = max_excess.max(l - (d as usize).min(l));
            }
            (None, None) => {}
            (Some(_), None) => report(len, "planner reached a BFS-unreachable target".into()),
            (None, Some(_)) => report(len, "planner gave up on a BFS-reachable target".into()),
        }
    }

    let mean = |sum: f64| if reachable == 0 { 0.0 } else { sum / reachable as f64 };
    InstanceConformance {
        instance: inst.into(),
        vertices: graph.vertex_count() as u64,
        all_pairs: graph.vertex_count() as u64 <= ALL_PAIRS_LIMIT,
        pairs_checked: pairs.len(),
        reachable_pairs: reachable,
        agreement: disagreements.is_empty(),
        ceiling,
        max_planner_length: max_len,
        mean_planner_length: mean(sum_len as f64),
        max_bfs_distance: max_bfs,
        mean_bfs_distance: mean(sum_bfs as f64),
        max_excess,
        disagreements,
    }
}

/// Runs the conformance check on every grid instance. Fails before doing any
/// work if an instance exceeds the vertex bound.
pub fn run_oracle(cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    let instances = cfg.grid.instances();
    for inst in &instances {
        inst.checked_vertex_count(cfg.bound)?;
    }
    let mut results = Vec::with_capacity(instances.len());
    let mut curve: BTreeMap<usize, CurvePoint> = BTreeMap::new();
    for inst in instances {
        let graph = ExplicitGraph::build(inst, cfg.bound)?;
        let pairs = sample_pairs(inst, graph.vertex_count() as u64, cfg.pairs, cfg.seed);
        let res = check_instance(&graph, &pairs);
        let point = curve.entry(inst.people()).or_insert(CurvePoint {
            n: inst.people(),
            max_planner_length: 0,
            max_bfs_distance: 0,
        });
        point.max_planner_length = point.max_planner_length.max(res.max_planner_length);
        point.max_bfs_distance = point.max_bfs_distance.max(res.max_bfs_distance);
        results.push(res);
    }
    let disagreement_count = results.iter().map(|r| r.disagreements.len()).sum();
    Ok(OracleReport {
        seed: cfg.seed,
        pairs: cfg.pairs,
        pairs_checked: results.iter().map(|r| r.pairs_checked).sum(),
        pass: disagreement_count == 0,
        disagreement_count,
        max_length_vs_n: curve.into_values().collect(),
        instances: results,
    })
}
