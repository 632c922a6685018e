//! Moving between spread configurations that share their low profile.

use std::collections::VecDeque;

use crate::model::{Configuration, Path};
use crate::perm::{factor_into_derangements, Permutation};
use crate::planner::PlanError;

/// A path of at most four steps from `f` to `g`, both spread with equal low profiles.
///
/// For `M != 3` every step applies one room derangement to the top people, so
/// the path stays in the spread set. For `M = 3` the path comes from a
/// breadth-first search over the rooms of the tracked people (see
/// [`quotient_path`]) and may pass through non-spread configurations.
pub fn exchange_path(f: &Configuration, g: &Configuration) -> Result<Path, PlanError> {
    if f.instance() != g.instance() {
        return Err(PlanError::InstanceMismatch);
    }
    if !f.is_spread() || !g.is_spread() {
        return Err(PlanError::PreconditionViolated("both endpoints must be spread"));
    }
    if f.low_profile() != g.low_profile() {
        return Err(PlanError::PreconditionViolated("low profiles differ"));
    }
    if f == g {
        return Ok(Path::single(f.clone()));
    }
    if f.instance().rooms() == 3 {
        exchange_three_rooms(f, g)
    } else {
        exchange_by_derangements(f, g)
    }
}

fn exchange_by_derangements(f: &Configuration, g: &Configuration) -> Result<Path, PlanError> {
    let inst = f.instance();
    let m = inst.rooms();
    // σ(f(t)) = g(t) on the top people, extended in ascending order on unused rooms
    let mut images = vec![usize::MAX; m];
    let mut used = vec![false; m];
    for t in inst.top_people() {
        images[f.room_of(t)] = g.room_of(t);
        used[g.room_of(t)] = true;
    }
    let mut spare = (0..m).filter(|&r| !used[r]);
    for image in images.iter_mut().filter(|x| **x == usize::MAX) {
        *image = spare.next().unwrap();
    }
    let sigma = Permutation::from_images(images).expect("extension is a bijection");
    let factors = factor_into_derangements(&sigma)?;

    let mut path = Path::single(f.clone());
    for d in factors.factors() {
        let mut rooms = path.last().rooms().to_vec();
        for t in inst.top_people() {
            rooms[t] = d.apply(rooms[t]);
        }
        path.push(Configuration::new(inst, rooms).expect("rooms stay in range"));
    }
    debug_assert_eq!(path.last(), g);
    Ok(path)
}

fn exchange_three_rooms(f: &Configuration, g: &Configuration) -> Result<Path, PlanError> {
    let inst = f.instance();
    let n = inst.people();
    let tracked: Vec<usize> = if n > 3 { (n - 4..n).collect() } else { (0..n).collect() };
    let mut pinned = [false; 3];
    for p in 0..tracked[0] {
        pinned[f.room_of(p)] = true;
    }
    let start: Vec<usize> = tracked.iter().map(|&p| f.room_of(p)).collect();
    let target: Vec<usize> = tracked.iter().map(|&p| g.room_of(p)).collect();
    let states = quotient_path(&start, &target, pinned)
        .ok_or(PlanError::PreconditionViolated("no quotient path"))?;

    let mut path = Path::single(f.clone());
    for state in states.into_iter().skip(1) {
        let mut rooms = f.rooms().to_vec();
        for (&p, &r) in tracked.iter().zip(&state) {
            rooms[p] = r;
        }
        path.push(Configuration::new(inst, rooms).expect("rooms stay in range"));
    }
    Ok(path)
}

/// Shortest path in the three-room quotient: the state is the rooms of the
/// tracked people (the smartest `min(N, 4)` persons), every other person is
/// pinned, and `pinned[r]` marks rooms that hold pinned people. A state may only
/// be left when each pinned room also holds a tracked person, so pinned people
/// are never forced to move.
pub fn quotient_path(start: &[usize], target: &[usize], pinned: [bool; 3]) -> Option<Vec<Vec<usize>>> {
    let k = start.len();
    let count = 3usize.pow(k as u32);
    let encode = |s: &[usize]| s.iter().rev().fold(0, |acc, &r| acc * 3 + r);
    let decode = |mut v: usize| {
        let mut s = Vec::with_capacity(k);
        for _ in 0..k {
            s.push(v % 3);
            v /= 3;
        }
        s
    };
    let (src, dst) = (encode(start), encode(target));
    let mut parent = vec![usize::MAX; count];
    parent[src] = src;
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        if v == dst {
            break;
        }
        let state = decode(v);
        if (0..3).any(|r| pinned[r] && !state.contains(&r)) {
            continue;
        }
        // movers: the last tracked person seen in each room
        let movers: Vec<usize> = (0..k).filter(|&i| !state[i + 1..].contains(&state[i])).collect();
        for choice in 0..(1usize << movers.len()) {
            let mut next = state.clone();
            for (bit, &i) in movers.iter().enumerate() {
                let step = 1 + (choice >> bit & 1);
                next[i] = (state[i] + step) % 3;
            }
            let w = encode(&next);
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    if parent[dst] == usize::MAX {
        return None;
    }
    let mut out = vec![decode(dst)];
    let mut v = dst;
    while v != src {
        v = parent[v];
        out.push(decode(v));
    }
    out.reverse();
    Some(out)
}
