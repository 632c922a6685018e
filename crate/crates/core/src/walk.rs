//! Seeded random walks on `G(N, M)`.
//!
//! At every step each room's smartest occupant independently picks one of the
//! other `M - 1` rooms uniformly, which makes the next vertex uniform over the
//! out-neighbours. Walker `i` draws from ChaCha8 seeded with the walk seed and
//! switched to stream `i`, so results do not depend on thread count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{ExplicitGraph, InstanceTag};
use crate::model::{skip_room, Configuration, Indexer, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("need at least one walker")]
    NoWalkers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StatsMode {
    /// Visit counts for every vertex; needs an enumerable instance.
    PerState,
    /// Histogram of sorted room-size multisets.
    Occupancy,
}

impl StatsMode {
    pub fn label(&self) -> &'static str {
        match self {
            StatsMode::PerState => "per-state",
            StatsMode::Occupancy => "occupancy",
        }
    }
}

#[derive(Debug, Clone)]
pub struct WalkConfig {
    pub start: Configuration,
    pub steps: u64,
    pub walkers: u64,
    pub seed: u64,
    pub mode: StatsMode,
    /// Explicit-mode vertex bound for per-state statistics.
    pub bound: u64,
}

/// The generator of walker `walker` under `seed`.
pub fn walker_rng(seed: u64, walker: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(walker);
    rng
}

/// One uniformly random successor of `f`.
pub fn random_successor<R: Rng + ?Sized>(f: &Configuration, rng: &mut R) -> Configuration {
    let mut rooms = f.rooms().to_vec();
    step_rooms(f, &mut rooms, rng);
    Configuration::new(f.instance(), rooms).expect("rooms stay in range")
}

fn step_rooms<R: Rng + ?Sized>(f: &Configuration, rooms: &mut [usize], rng: &mut R) {
    let m = f.instance().rooms();
    let mut movers: Vec<(usize, usize)> = f.room_tops().into_iter().map(|(r, p)| (p, r)).collect();
    movers.sort_unstable();
    for (person, from) in movers {
        let digit = if m == 2 {
            0
        } else {
            rng.random_range(0..(m - 1) as u32) as usize
        };
        rooms[person] = skip_room(digit, from);
    }
}

/// Every vertex visited by one walker, start included.
pub fn trajectory<R: Rng + ?Sized>(start: &Configuration, steps: u64, rng: &mut R) -> Vec<Configuration> {
    let mut out = Vec::with_capacity(steps as usize + 1);
    let mut cur = start.clone();
    for _ in 0..steps {
        let next = random_successor(&cur, rng);
        out.push(std::mem::replace(&mut cur, next));
    }
    out.push(cur);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Visits {
    PerState(Vec<u64>),
    Occupancy(BTreeMap<Vec<usize>, u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStats {
    pub instance: InstanceTag,
    pub seed: u64,
    pub steps: u64,
    pub walkers: u64,
    pub mode: StatsMode,
    pub visits: Visits,
    pub vc_visits: u64,
    pub vs_visits: u64,
    /// Concentrated vertices met after the start; zero whenever `M <= N`.
    pub vc_revisits: u64,
    pub total_visits: u64,
    indexer: Option<Indexer>,
}

#[derive(Default)]
struct Tally {
    per_state: Vec<u64>,
    occupancy: BTreeMap<Vec<usize>, u64>,
    vc: u64,
    vs: u64,
    vc_late: u64,
    total: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        if self.per_state.is_empty() {
            self.per_state = other.per_state;
        } else {
            for (a, b) in self.per_state.iter_mut().zip(other.per_state) {
                *a += b;
            }
        }
        for (k, v) in other.occupancy {
            *self.occupancy.entry(k).or_insert(0) += v;
        }
        self.vc += other.vc;
        self.vs += other.vs;
        self.vc_late += other.vc_late;
        self.total += other.total;
        self
    }
}

fn occupancy_key(c: &Configuration) -> Vec<usize> {
    let mut sizes = vec![0usize; c.instance().rooms()];
    for &r in c.rooms() {
        sizes[r] += 1;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

pub fn run_walk(cfg: &WalkConfig) -> Result<WalkStats, WalkError> {
    if cfg.walkers == 0 {
        return Err(WalkError::NoWalkers);
    }
    let inst = cfg.start.instance();
    let indexer = match cfg.mode {
        StatsMode::PerState => Some(inst.indexer(cfg.bound)?),
        StatsMode::Occupancy => None,
    };
    let vertex_count = indexer.as_ref().map_or(0, |ix| ix.count() as usize);

    let run_one = |mut tally: Tally, walker: u64| -> Tally {
        if indexer.is_some() && tally.per_state.is_empty() {
            tally.per_state = vec![0; vertex_count];
        }
        let mut rng = walker_rng(cfg.seed, walker);
        let mut cur = cfg.start.clone();
        let mut rooms = cur.rooms().to_vec();
        for step in 0..=cfg.steps {
            if step > 0 {
                step_rooms(&cur, &mut rooms, &mut rng);
                cur = Configuration::new(inst, rooms.clone()).expect("rooms stay in range");
            }
            match &indexer {
                Some(ix) => tally.per_state[ix.encode(&cur).unwrap() as usize] += 1,
                None => *tally.occupancy.entry(occupancy_key(&cur)).or_insert(0) += 1,
            }
            if cur.is_concentrated() {
                tally.vc += 1;
                if step > 0 {
                    tally.vc_late += 1;
                }
            }
            if cur.is_spread() {
                tally.vs += 1;
            }
            tally.total += 1;
        }
        tally
    };

    let tally = (0..cfg.walkers)
        .into_par_iter()
        .fold(Tally::default, run_one)
        .reduce(Tally::default, Tally::merge);

    let visits = match cfg.mode {
        StatsMode::PerState => Visits::PerState(tally.per_state),
        StatsMode::Occupancy => Visits::Occupancy(tally.occupancy),
    };
    Ok(WalkStats {
        instance: inst.into(),
        seed: cfg.seed,
        steps: cfg.steps,
        walkers: cfg.walkers,
        mode: cfg.mode,
        visits,
        vc_visits: tally.vc,
        vs_visits: tally.vs,
        vc_revisits: tally.vc_late,
        total_visits: tally.total,
        indexer,
    })
}

impl WalkStats {
    /// Normalized per-state frequencies, in vertex-id order.
    pub fn frequencies(&self) -> Option<Vec<f64>> {
        match &self.visits {
            Visits::PerState(counts) => Some(
                counts
                    .iter()
                    .map(|&c| c as f64 / self.total_visits as f64)
                    .collect(),
            ),
            Visits::Occupancy(_) => None,
        }
    }

    /// The JSON record, keys in a fixed order, without a trailing newline.
    pub fn to_json(&self) -> String {
        let (freqs, occupancy_hist) = match (&self.visits, &self.indexer) {
            (Visits::PerState(counts), Some(ix)) => {
                let rows = counts
                    .iter()
                    .zip(self.frequencies().unwrap())
                    .enumerate()
                    .map(|(v, (&count, freq))| FreqRow {
                        config: ix.decode(v as u64).unwrap().to_string(),
                        count,
                        freq,
                    })
                    .collect();
                (Some(rows), None)
            }
            (Visits::Occupancy(hist), _) => {
                let rows = hist
                    .iter()
                    .map(|(sizes, &count)| OccupancyRow { sizes: sizes.clone(), count })
                    .collect();
                (None, Some(rows))
            }
            (Visits::PerState(_), None) => unreachable!("per-state stats carry an indexer"),
        };
        let record = WalkRecord {
            instance: &self.instance,
            seed: self.seed,
            steps: self.steps,
            walkers: self.walkers,
            mode: self.mode.label(),
            freqs,
            occupancy_hist,
            vc_visits: self.vc_visits,
            vs_visits: self.vs_visits,
        };
        serde_json::to_string(&record).expect("walk record serializes")
    }
}

#[derive(Serialize)]
struct FreqRow {
    config: String,
    count: u64,
    freq: f64,
}

#[derive(Serialize)]
struct OccupancyRow {
    sizes: Vec<usize>,
    count: u64,
}

#[derive(Serialize)]
struct WalkRecord<'a> {
    instance: &'a InstanceTag,
    seed: u64,
    steps: u64,
    walkers: u64,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    freqs: Option<Vec<FreqRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    occupancy_hist: Option<Vec<OccupancyRow>>,
    vc_visits: u64,
    vs_visits: u64,
}

/// Per-state frequencies next to each state's strongly connected component.
#[derive(Debug, Clone)]
pub struct FrequencyTable {
    pub stats: WalkStats,
    pub freqs: Vec<f64>,
    pub component: Vec<u32>,
    pub giant: u32,
}

pub fn estimate_frequencies(cfg: &WalkConfig) -> Result<FrequencyTable, WalkError> {
    let cfg = WalkConfig {
        mode: StatsMode::PerState,
        ..cfg.clone()
    };
    let graph = ExplicitGraph::build(cfg.start.instance(), cfg.bound)?;
    let stats = run_walk(&cfg)?;
    let scc = graph.scc_decompose();
    Ok(FrequencyTable {
        freqs: stats.frequencies().unwrap(),
        component: scc.partition.component_of.clone(),
        giant: scc.giant_id(),
        stats,
    })
}
