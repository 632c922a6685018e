//! Constructive paths between configurations, without building the graph.
//!
//! [`plan_path`] chains the pieces: reach the spread set, walk the low people
//! to the profile of a spread predecessor of the target, exchange the top
//! people, and take the final edge. Two rooms are handled separately because
//! every vertex then has exactly one successor.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Configuration, Path};
use crate::perm::PermError;

mod exchange;
mod lift;
mod spread;

pub use exchange::{exchange_path, quotient_path};
pub use lift::{
    apply_asynch_move, asynch_route, concentrate_predecessor, low_profile_path, trick_lift,
    AsynchMove,
};
pub use spread::spread_path;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("configurations belong to different instances")]
    InstanceMismatch,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("every top person shares one room and M <= N, so nothing leads here")]
    NoPredecessor,
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnreachableReason {
    TargetConcentrated,
    DeterministicOrbitMiss,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanOutcome {
    Reached(Path),
    Unreachable(UnreachableReason),
}

impl PlanOutcome {
    pub fn path(&self) -> Option<&Path> {
        match self {
            PlanOutcome::Reached(p) => Some(p),
            PlanOutcome::Unreachable(_) => None,
        }
    }

    pub fn is_reachable(&self) -> bool {
        matches!(self, PlanOutcome::Reached(_))
    }
}

/// The forward orbit of a vertex in a graph where every vertex has out-degree 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Distinct vertices in visiting order.
    pub visited: Vec<Configuration>,
    /// Index in `visited` where the terminal cycle starts.
    pub cycle_start: usize,
}

impl Orbit {
    pub fn cycle(&self) -> &[Configuration] {
        &self.visited[self.cycle_start..]
    }
}

/// Follows the unique successor until a vertex repeats. Requires `M = 2`.
pub fn deterministic_orbit(f: &Configuration) -> Result<Orbit, PlanError> {
    if f.instance().rooms() != 2 {
        return Err(PlanError::PreconditionViolated("orbits need M = 2"));
    }
    let mut seen: HashMap<Configuration, usize> = HashMap::new();
    let mut visited = Vec::new();
    let mut cur = f.clone();
    loop {
        if let Some(&i) = seen.get(&cur) {
            return Ok(Orbit {
                visited,
                cycle_start: i,
            });
        }
        seen.insert(cur.clone(), visited.len());
        let next = cur.successors().next().expect("out-degree is 1");
        visited.push(cur);
        cur = next;
    }
}

/// A validated path from `f` to `g`, or the reason none exists.
pub fn plan_path(f: &Configuration, g: &Configuration) -> Result<PlanOutcome, PlanError> {
    let inst = f.instance();
    if inst != g.instance() {
        return Err(PlanError::InstanceMismatch);
    }
    if f == g {
        return Ok(PlanOutcome::Reached(Path::single(f.clone())));
    }
    let (n, m) = (inst.people(), inst.rooms());
    if m == 2 {
        let orbit = deterministic_orbit(f)?;
        return Ok(match orbit.visited.iter().position(|c| c == g) {
            Some(i) => PlanOutcome::Reached(Path::new(orbit.visited[..=i].to_vec())),
            None => PlanOutcome::Unreachable(UnreachableReason::DeterministicOrbitMiss),
        });
    }
    if g.is_concentrated() && m <= n {
        return Ok(PlanOutcome::Unreachable(UnreachableReason::TargetConcentrated));
    }

    let mut path = spread_path(f);
    let (g1, final_edge) = if g.is_spread() {
        (g.clone(), false)
    } else {
        (concentrate_predecessor(g)?, true)
    };
    if inst.low_count() > 0 {
        let lows = low_profile_path(path.last(), &g1.low_profile())?;
        path.extend(lows);
    }
    let exchange = exchange_path(path.last(), &g1)?;
    path.extend(exchange);
    if final_edge {
        path.push(g.clone());
    }
    assert!(
        path.is_valid() && path.first() == f && path.last() == g,
        "planner produced an invalid path from {f} to {g}"
    );
    Ok(PlanOutcome::Reached(path))
}

/// The length ceiling checked by the conformance report: `2·L·(L+2) + N + 6`
/// with `L = max(N - M, 0)`.
pub fn path_length_ceiling(n: usize, m: usize) -> usize {
    let l = n.saturating_sub(m);
    2 * l * (l + 2) + n + 6
}
