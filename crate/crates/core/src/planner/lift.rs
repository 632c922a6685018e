//! One-step predecessors, the asynchronous low-person router, and the two-step
//! lift of an asynchronous move into the simultaneous graph.

use serde::Serialize;

use crate::model::{Configuration, LowProfile, Path};
use crate::perm::make_derangement;
use crate::planner::PlanError;

/// A spread configuration with an edge into `g`.
///
/// The room maxima among the top people are rotated cyclically (ascending),
/// the remaining top people fill the unused rooms in ascending order, and the
/// low people keep their rooms. When `g` is concentrated and `M > N`, everyone
/// starts alone in the rooms other than `g`'s room, in ascending order.
pub fn concentrate_predecessor(g: &Configuration) -> Result<Configuration, PlanError> {
    let inst = g.instance();
    let (n, m) = (inst.people(), inst.rooms());
    if g.is_concentrated() {
        if m <= n {
            return Err(PlanError::NoPredecessor);
        }
        let room = g.room_of(n - 1);
        let rooms: Vec<usize> = (0..m).filter(|&r| r != room).take(n).collect();
        return Ok(Configuration::new(inst, rooms).expect("rooms stay in range"));
    }

    let tops = inst.top_people();
    let maxima: Vec<usize> = g
        .room_tops()
        .into_iter()
        .map(|(_, p)| p)
        .filter(|p| tops.contains(p))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    debug_assert!(maxima.len() >= 2);
    let mut rooms = g.rooms().to_vec();
    for (i, &p) in maxima.iter().enumerate() {
        rooms[p] = g.room_of(maxima[(i + 1) % maxima.len()]);
    }
    let taken: Vec<usize> = maxima.iter().map(|&p| g.room_of(p)).collect();
    let mut spare = (0..m).filter(|r| !taken.contains(r));
    for p in tops.filter(|p| !maxima.contains(p)) {
        rooms[p] = spare.next().expect("enough unused rooms");
    }
    let f = Configuration::new(inst, rooms).expect("rooms stay in range");
    debug_assert!(f.is_spread() && f.is_edge_to(g));
    Ok(f)
}

/// One move of the asynchronous variant: the smartest person in `from` goes to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AsynchMove {
    pub person: usize,
    pub from: usize,
    pub to: usize,
}

/// Applies `mv` to a low profile, checking that the mover is its room's maximum.
pub fn apply_asynch_move(
    profile: &LowProfile,
    mv: AsynchMove,
    rooms: usize,
) -> Result<LowProfile, PlanError> {
    let h = &profile.rooms;
    let valid = mv.person < h.len()
        && h[mv.person] == mv.from
        && mv.to != mv.from
        && mv.to < rooms
        && !h[mv.person + 1..].contains(&mv.from);
    if !valid {
        return Err(PlanError::PreconditionViolated("not a legal asynchronous move"));
    }
    let mut next = h.clone();
    next[mv.person] = mv.to;
    Ok(LowProfile::new(next))
}

/// Moves turning `from` into `to`, settling persons in ascending order.
///
/// Before a person leaves its room, everyone smarter in that room is evacuated
/// one at a time to the smallest room that is neither their room nor the
/// settling person's destination (or to the destination when `M = 2`).
pub fn asynch_route(
    from: &LowProfile,
    to: &LowProfile,
    rooms: usize,
) -> Result<Vec<AsynchMove>, PlanError> {
    if rooms < 2 || from.len() != to.len() || to.rooms.iter().chain(&from.rooms).any(|&r| r >= rooms) {
        return Err(PlanError::PreconditionViolated("profiles do not match the instance"));
    }
    let mut state = from.rooms.clone();
    let mut moves = Vec::new();
    for p in 0..state.len() {
        let target = to.rooms[p];
        if state[p] == target {
            continue;
        }
        let room = state[p];
        while let Some(q) = (p + 1..state.len()).rev().find(|&q| state[q] == room) {
            let dest = (0..rooms).find(|&r| r != room && r != target).unwrap_or(target);
            moves.push(AsynchMove {
                person: q,
                from: room,
                to: dest,
            });
            state[q] = dest;
        }
        moves.push(AsynchMove {
            person: p,
            from: room,
            to: target,
        });
        state[p] = target;
    }
    Ok(moves)
}

/// Simulates one asynchronous low move with two simultaneous steps, from a
/// spread configuration to a spread configuration.
pub fn trick_lift(f1: &Configuration, mv: AsynchMove) -> Result<Path, PlanError> {
    let inst = f1.instance();
    let (n, m) = (inst.people(), inst.rooms());
    if !(3 <= m && m <= n) {
        return Err(PlanError::PreconditionViolated("needs 3 <= M <= N"));
    }
    if !f1.is_spread() {
        return Err(PlanError::PreconditionViolated("start must be spread"));
    }
    apply_asynch_move(&f1.low_profile(), mv, m)?;

    let r = mv.from;
    let k = inst
        .top_people()
        .find(|&t| f1.room_of(t) == r)
        .expect("spread with N >= M fills every room");
    let others: Vec<usize> = (0..m).filter(|&x| x != r).collect();
    let rho = make_derangement(m, &others, None)?;
    let s = others[0];

    let mut g = f1.rooms().to_vec();
    for t in inst.top_people() {
        g[t] = if t == k { s } else { rho.apply(f1.room_of(t)) };
    }
    let pair = inst.top_people().filter(|&t| g[t] == s);
    let stay = pair.min().unwrap();

    let sigma = make_derangement(m, &(0..m).collect::<Vec<_>>(), Some((r, s)))?;
    let mut f2 = g.clone();
    f2[mv.person] = mv.to;
    for t in inst.top_people().filter(|&t| t != stay) {
        f2[t] = sigma.apply(g[t]);
    }
    let g = Configuration::new(inst, g).expect("rooms stay in range");
    let f2 = Configuration::new(inst, f2).expect("rooms stay in range");
    Ok(Path::new(vec![f1.clone(), g, f2]))
}

/// A path from a spread `f1` to a spread configuration whose low profile is `target`.
pub fn low_profile_path(f1: &Configuration, target: &LowProfile) -> Result<Path, PlanError> {
    let inst = f1.instance();
    if !(3 <= inst.rooms() && inst.rooms() <= inst.people()) {
        return Err(PlanError::PreconditionViolated("needs 3 <= M <= N"));
    }
    if !f1.is_spread() {
        return Err(PlanError::PreconditionViolated("start must be spread"));
    }
    let moves = asynch_route(&f1.low_profile(), target, inst.rooms())?;
    let mut path = Path::single(f1.clone());
    for mv in moves {
        let lift = trick_lift(path.last(), mv)?;
        path.extend(lift);
    }
    Ok(path)
}
