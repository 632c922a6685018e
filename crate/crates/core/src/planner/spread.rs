//! Reaching the spread set.

use crate::model::{Configuration, Path};

/// A path from `f` to a configuration whose top segment is injective.
///
/// Each step strictly increases the number of rooms holding a top person:
/// with two or more singleton rooms the singletons are rotated among
/// themselves; with exactly one, its person goes to the first free room and
/// the first multi-room mover takes its place. Every other multi-room mover
/// takes its own free room in ascending order. Rooms without any top person
/// send their smartest low occupant to the smallest other room.
pub fn spread_path(f: &Configuration) -> Path {
    let mut path = Path::single(f.clone());
    while !path.last().is_spread() {
        let next = spread_step(path.last());
        path.push(next);
    }
    path
}

fn spread_step(c: &Configuration) -> Configuration {
    let inst = c.instance();
    let m = inst.rooms();
    let lo = inst.low_count();

    // tops per room, ascending
    let mut tops: Vec<Vec<usize>> = vec![Vec::new(); m];
    for p in inst.top_people() {
        tops[c.room_of(p)].push(p);
    }
    let singles: Vec<usize> = (0..m).filter(|&r| tops[r].len() == 1).collect();
    let multis: Vec<usize> = (0..m).filter(|&r| tops[r].len() >= 2).collect();
    let free: Vec<usize> = (0..m).filter(|&r| tops[r].is_empty()).collect();
    debug_assert!(free.len() >= multis.len());

    let mut next = c.rooms().to_vec();
    for &room in &free {
        if let Some(low) = (0..lo).rev().find(|&p| c.room_of(p) == room) {
            next[low] = if room == 0 { 1 } else { 0 };
        }
    }
    let movers: Vec<usize> = multis.iter().map(|&r| *tops[r].last().unwrap()).collect();
    let mut free_iter = free.iter().copied();
    let mut movers_iter = movers.iter().copied();
    match singles.len() {
        0 => {}
        1 => {
            let single_room = singles[0];
            next[tops[single_room][0]] = free_iter.next().unwrap();
            if let Some(p) = movers_iter.next() {
                next[p] = single_room;
            }
        }
        s => {
            for (i, &room) in singles.iter().enumerate() {
                next[tops[room][0]] = singles[(i + 1) % s];
            }
        }
    }
    for p in movers_iter {
        next[p] = free_iter.next().unwrap();
    }
    Configuration::new(inst, next).expect("rooms stay in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Instance;

    fn cfg(m: usize, rooms: &[usize]) -> Configuration {
        Configuration::from_one_based(Instance::new(rooms.len(), m).unwrap(), rooms).unwrap()
    }

    fn top_rooms(c: &Configuration) -> usize {
        let mut r: Vec<usize> = c.instance().top_people().map(|p| c.room_of(p)).collect();
        r.sort();
        r.dedup();
        r.len()
    }

    #[test]
    fn examples() {
        let p = spread_path(&cfg(3, &[1, 1, 1]));
        let s: Vec<String> = p.steps().iter().map(|c| c.to_string()).collect();
        assert_eq!(s, vec!["1,1,1", "1,1,2", "1,2,3"]);

        let f = cfg(3, &[1, 2, 3]);
        assert_eq!(spread_path(&f), Path::single(f));

        let p = spread_path(&cfg(3, &[1, 1, 1, 1]));
        assert!(p.is_valid() && p.last().is_spread() && p.len() <= 3);
    }

    #[test]
    fn exhaustive_small() {
        for (n, m) in [(3, 2), (4, 2), (3, 3), (5, 3), (4, 4), (6, 4), (3, 5), (5, 5)] {
            let ix = Instance::new(n, m).unwrap().indexer(1 << 20).unwrap();
            for v in 0..ix.count() {
                let f = ix.decode(v).unwrap();
                let p = spread_path(&f);
                assert!(p.is_valid(), "{f}");
                assert!(p.last().is_spread());
                assert!(p.len() <= n.min(m));
                for w in p.steps().windows(2) {
                    assert!(top_rooms(&w[1]) > top_rooms(&w[0]));
                }
            }
        }
    }
}
