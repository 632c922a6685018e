//! Configurations of people in rooms and the simultaneous-move edge relation.
//!
//! Persons and rooms are 0-based everywhere in the Rust API: person `k` is the
//! `(k+1)`-th least smart person, and a larger index means smarter. The text
//! format used on the command line is 1-based.

use std::fmt;
use std::ops::RangeInclusive;

use thiserror::Error;

/// Default upper bound on `M^N` for operations that index every vertex.
pub const DEFAULT_VERTEX_BOUND: u64 = 1 << 22;

/// Hard ceiling on the explicit-mode bound; vertex ids are stored as `u32`.
pub const MAX_VERTEX_BOUND: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid instance: need at least 1 person and 2 rooms, got N={people}, M={rooms}")]
    InvalidInstance { people: usize, rooms: usize },
    #[error("could not parse {token:?} as a room number")]
    Parse { token: String },
    #[error("room {room} is outside [1, {rooms}]")]
    Range { room: usize, rooms: usize },
    #[error("expected {expected} entries, found {found}")]
    Length { expected: usize, found: usize },
    #[error("configuration belongs to a different instance")]
    InstanceMismatch,
    #[error("index {index} is outside [0, {count})")]
    IndexOutOfRange { index: u64, count: u64 },
    #[error("{rooms}^{people} vertices exceed the explicit-mode bound {bound}")]
    Overflow { people: usize, rooms: usize, bound: u64 },
}

/// The pair (N people, M rooms).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instance {
    people: usize,
    rooms: usize,
}

impl Instance {
    pub fn new(people: usize, rooms: usize) -> Result<Self, ModelError> {
        if people == 0 || rooms < 2 {
            return Err(ModelError::InvalidInstance { people, rooms });
        }
        Ok(Instance { people, rooms })
    }

    pub fn people(&self) -> usize {
        self.people
    }

    pub fn rooms(&self) -> usize {
        self.rooms
    }

    /// Number of low people, `max(N - M, 0)`.
    pub fn low_count(&self) -> usize {
        self.people.saturating_sub(self.rooms)
    }

    /// The `min(N, M)` smartest people, as a 0-based range.
    pub fn top_people(&self) -> std::ops::Range<usize> {
        self.low_count()..self.people
    }

    /// `M^N` if it fits in a `u64`.
    pub fn vertex_count(&self) -> Option<u64> {
        let exp = u32::try_from(self.people).ok()?;
        (self.rooms as u64).checked_pow(exp)
    }

    /// `M^N`, failing when it exceeds `bound`.
    pub fn checked_vertex_count(&self, bound: u64) -> Result<u64, ModelError> {
        match self.vertex_count() {
            Some(count) if count <= bound.min(MAX_VERTEX_BOUND) => Ok(count),
            _ => Err(ModelError::Overflow {
                people: self.people,
                rooms: self.rooms,
                bound,
            }),
        }
    }

    pub fn indexer(&self, bound: u64) -> Result<Indexer, ModelError> {
        Indexer::new(*self, bound)
    }
}

/// `[lo, hi] ∩ Z≥1`; empty when `hi < max(lo, 1)`.
pub fn interval(lo: i64, hi: i64) -> RangeInclusive<i64> {
    lo.max(1)..=hi
}

/// A total assignment of persons to rooms (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    inst: Instance,
    rooms: Vec<usize>,
}

impl Configuration {
    /// Builds a configuration from 0-based room indices.
    pub fn new(inst: Instance, rooms: Vec<usize>) -> Result<Self, ModelError> {
        if rooms.len() != inst.people {
            return Err(ModelError::Length {
                expected: inst.people,
                found: rooms.len(),
            });
        }
        if let Some(&room) = rooms.iter().find(|&&r| r >= inst.rooms) {
            return Err(ModelError::Range {
                room: room + 1,
                rooms: inst.rooms,
            });
        }
        Ok(Configuration { inst, rooms })
    }

    /// Builds a configuration from 1-based room numbers, as written in the text format.
    pub fn from_one_based(inst: Instance, rooms: &[usize]) -> Result<Self, ModelError> {
        if let Some(&room) = rooms.iter().find(|&&r| r == 0 || r > inst.rooms) {
            return Err(ModelError::Range {
                room,
                rooms: inst.rooms,
            });
        }
        Self::new(inst, rooms.iter().map(|r| r - 1).collect())
    }

    /// Everyone in room `room`.
    pub fn constant(inst: Instance, room: usize) -> Self {
        assert!(room < inst.rooms);
        Configuration {
            inst,
            rooms: vec![room; inst.people],
        }
    }

    pub(crate) fn from_raw(inst: Instance, rooms: Vec<usize>) -> Self {
        debug_assert!(rooms.len() == inst.people && rooms.iter().all(|&r| r < inst.rooms));
        Configuration { inst, rooms }
    }

    /// Parses comma-separated 1-based rooms, e.g. `"1,1,2,3"`.
    pub fn parse(text: &str, inst: Instance) -> Result<Self, ModelError> {
        let rooms = text
            .split(',')
            .map(|token| {
                let token = token.trim();
                token.parse::<usize>().map_err(|_| ModelError::Parse {
                    token: token.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if rooms.len() != inst.people {
            return Err(ModelError::Length {
                expected: inst.people,
                found: rooms.len(),
            });
        }
        Self::from_one_based(inst, &rooms)
    }

    pub fn instance(&self) -> Instance {
        self.inst
    }

    pub fn rooms(&self) -> &[usize] {
        &self.rooms
    }

    pub fn room_of(&self, person: usize) -> usize {
        self.rooms[person]
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.rooms.iter().map(|r| r + 1).collect()
    }

    /// `(room, smartest occupant)` for every occupied room, sorted by room.
    pub fn room_tops(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .rooms
            .iter()
            .enumerate()
            .map(|(person, &room)| (room, person))
            .collect();
        pairs.sort_unstable();
        let mut tops: Vec<(usize, usize)> = Vec::with_capacity(pairs.len());
        for (room, person) in pairs {
            match tops.last_mut() {
                Some(last) if last.0 == room => last.1 = person,
                _ => tops.push((room, person)),
            }
        }
        tops
    }

    /// The persons forced to move: the smartest occupant of every occupied room,
    /// in ascending order.
    pub fn movers(&self) -> Vec<usize> {
        let mut movers: Vec<usize> = self.room_tops().into_iter().map(|(_, p)| p).collect();
        movers.sort_unstable();
        movers
    }

    pub(crate) fn mover_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.inst.people];
        for (_, person) in self.room_tops() {
            flags[person] = true;
        }
        flags
    }

    pub fn occupied_rooms(&self) -> usize {
        self.room_tops().len()
    }

    /// `(M-1)^(occupied rooms)`, saturating.
    pub fn out_degree(&self) -> u64 {
        let k = self.occupied_rooms() as u32;
        (self.inst.rooms as u64 - 1).saturating_pow(k)
    }

    /// True iff exactly the room maxima of `self` change room in `next`.
    pub fn is_edge_to(&self, next: &Configuration) -> bool {
        if self.inst != next.inst {
            return false;
        }
        self.mover_flags()
            .iter()
            .zip(self.rooms.iter().zip(&next.rooms))
            .all(|(&moves, (a, b))| moves == (a != b))
    }

    /// Lazily enumerates every successor in lexicographic order of the movers'
    /// target rooms (movers taken in ascending person order).
    pub fn successors(&self) -> Successors {
        Successors::new(self.clone())
    }

    /// True iff the `min(N, M)` smartest people occupy pairwise distinct rooms.
    pub fn is_spread(&self) -> bool {
        let mut top = self.rooms[self.inst.top_people()].to_vec();
        top.sort_unstable();
        top.windows(2).all(|w| w[0] != w[1])
    }

    /// True iff the `min(N, M)` smartest people share one room.
    pub fn is_concentrated(&self) -> bool {
        let top = &self.rooms[self.inst.top_people()];
        top.windows(2).all(|w| w[0] == w[1])
    }

    pub fn low_profile(&self) -> LowProfile {
        LowProfile {
            rooms: self.rooms[..self.inst.low_count()].to_vec(),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, room) in self.rooms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", room + 1)?;
        }
        Ok(())
    }
}

/// Vertex class used by reports and exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    Spread,
    Concentrated,
    Other,
}

impl VertexClass {
    /// Spread takes precedence; the two classes only overlap when `min(N, M) = 1`.
    pub fn of(config: &Configuration) -> Self {
        if config.is_spread() {
            VertexClass::Spread
        } else if config.is_concentrated() {
            VertexClass::Concentrated
        } else {
            VertexClass::Other
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            VertexClass::Spread => "Vs",
            VertexClass::Concentrated => "Vc",
            VertexClass::Other => "other",
        }
    }
}

/// Rooms of the low people `0..N-M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LowProfile {
    pub rooms: Vec<usize>,
}

impl LowProfile {
    pub fn new(rooms: Vec<usize>) -> Self {
        LowProfile { rooms }
    }

    pub fn len(&self) -> usize {
        self.rooms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rooms.is_empty()
    }
}

/// Streams the successors of a configuration without materializing them.
#[derive(Debug, Clone)]
pub struct Successors {
    current: Configuration,
    movers: Vec<usize>,
    origin: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Successors {
    fn new(base: Configuration) -> Self {
        let movers = base.movers();
        let origin: Vec<usize> = movers.iter().map(|&p| base.rooms[p]).collect();
        let mut current = base;
        for (&p, &from) in movers.iter().zip(&origin) {
            current.rooms[p] = skip_room(0, from);
        }
        let digits = vec![0; movers.len()];
        Successors {
            current,
            movers,
            origin,
            digits,
            done: false,
        }
    }
}

/// The `digit`-th room different from `from`.
#[inline]
pub(crate) fn skip_room(digit: usize, from: usize) -> usize {
    if digit < from {
        digit
    } else {
        digit + 1
    }
}

impl Iterator for Successors {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let base = self.current.inst.rooms - 1;
        let mut i = self.movers.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < base {
                self.current.rooms[self.movers[i]] = skip_room(self.digits[i], self.origin[i]);
                break;
            }
            self.digits[i] = 0;
            self.current.rooms[self.movers[i]] = skip_room(0, self.origin[i]);
        }
        Some(out)
    }
}

/// Dense vertex ids: person 0 is the least significant base-M digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indexer {
    inst: Instance,
    count: u64,
    powers: Vec<u64>,
}

impl Indexer {
    pub fn new(inst: Instance, bound: u64) -> Result<Self, ModelError> {
        let count = inst.checked_vertex_count(bound)?;
        let mut powers = Vec::with_capacity(inst.people);
        let mut p = 1u64;
        for _ in 0..inst.people {
            powers.push(p);
            p = p.saturating_mul(inst.rooms as u64);
        }
        Ok(Indexer {
            inst,
            count,
            powers,
        })
    }

    pub fn instance(&self) -> Instance {
        self.inst
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn powers(&self) -> &[u64] {
        &self.powers
    }

    pub fn encode(&self, config: &Configuration) -> Result<u64, ModelError> {
        if config.inst != self.inst {
            return Err(ModelError::InstanceMismatch);
        }
        Ok(self.encode_rooms(&config.rooms))
    }

    pub(crate) fn encode_rooms(&self, rooms: &[usize]) -> u64 {
        rooms
            .iter()
            .zip(&self.powers)
            .map(|(&r, &p)| r as u64 * p)
            .sum()
    }

    pub fn decode(&self, index: u64) -> Result<Configuration, ModelError> {
        if index >= self.count {
            return Err(ModelError::IndexOutOfRange {
                index,
                count: self.count,
            });
        }
        let mut rooms = Vec::with_capacity(self.inst.people);
        self.decode_into(index, &mut rooms);
        Ok(Configuration::from_raw(self.inst, rooms))
    }

    pub(crate) fn decode_into(&self, mut index: u64, rooms: &mut Vec<usize>) {
        rooms.clear();
        let m = self.inst.rooms as u64;
        for _ in 0..self.inst.people {
            rooms.push((index % m) as usize);
            index /= m;
        }
    }
}

/// A nonempty sequence of configurations over one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    steps: Vec<Configuration>,
}

impl Path {
    /// Panics on an empty sequence.
    pub fn new(steps: Vec<Configuration>) -> Self {
        assert!(!steps.is_empty(), "a path has at least one vertex");
        Path { steps }
    }

    pub fn single(config: Configuration) -> Self {
        Path {
            steps: vec![config],
        }
    }

    pub fn steps(&self) -> &[Configuration] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<Configuration> {
        self.steps
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.steps.len() == 1
    }

    pub fn first(&self) -> &Configuration {
        &self.steps[0]
    }

    pub fn last(&self) -> &Configuration {
        self.steps.last().unwrap()
    }

    pub fn push(&mut self, config: Configuration) {
        self.steps.push(config);
    }

    /// Appends `other`, whose first vertex must equal our last one.
    pub fn extend(&mut self, other: Path) {
        assert_eq!(self.last(), other.first(), "paths do not join");
        self.steps.extend(other.steps.into_iter().skip(1));
    }

    /// Index `i` of the first pair `(steps[i], steps[i+1])` that is not an edge.
    pub fn first_invalid_step(&self) -> Option<usize> {
        self.steps.windows(2).position(|w| !w[0].is_edge_to(&w[1]))
    }

    pub fn is_valid(&self) -> bool {
        self.first_invalid_step().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, m: usize) -> Instance {
        Instance::new(n, m).unwrap()
    }

    fn cfg(m: usize, rooms: &[usize]) -> Configuration {
        Configuration::from_one_based(inst(rooms.len(), m), rooms).unwrap()
    }

    fn all_configs(inst: Instance) -> Vec<Configuration> {
        let ix = inst.indexer(DEFAULT_VERTEX_BOUND).unwrap();
        (0..ix.count()).map(|i| ix.decode(i).unwrap()).collect()
    }

    #[test]
    fn instance_bounds() {
        assert!(Instance::new(0, 3).is_err());
        assert!(Instance::new(3, 1).is_err());
        assert!(Instance::new(1, 2).is_ok());
    }

    #[test]
    fn interval_examples() {
        assert_eq!(interval(2, 4).collect::<Vec<_>>(), vec![2, 3, 4]);
        assert_eq!(interval(-1, 3).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(interval(5, 4).next().is_none());
        assert!(interval(-3, 0).next().is_none());
    }

    #[test]
    fn movers_examples() {
        assert_eq!(cfg(3, &[1, 1, 2, 3]).movers(), vec![1, 2, 3]);
        assert_eq!(cfg(3, &[1, 1, 1, 1]).movers(), vec![3]);
        assert_eq!(cfg(3, &[1, 2, 3]).movers(), vec![0, 1, 2]);
    }

    #[test]
    fn movers_brute_force_scan() {
        for f in all_configs(inst(4, 3)) {
            let mut expected = vec![];
            for room in 0..3 {
                if let Some(p) = (0..4).filter(|&p| f.room_of(p) == room).max() {
                    expected.push(p);
                }
            }
            expected.sort();
            assert_eq!(f.movers(), expected);
        }
    }

    #[test]
    fn edge_examples() {
        assert!(cfg(3, &[1, 2, 3]).is_edge_to(&cfg(3, &[2, 3, 2])));
        assert!(!cfg(3, &[1, 1, 1, 1]).is_edge_to(&cfg(3, &[1, 1, 1, 1])));
        assert!(cfg(2, &[1, 1]).is_edge_to(&cfg(2, &[1, 2])));
        // a non-mover changing room
        assert!(!cfg(3, &[1, 1]).is_edge_to(&cfg(3, &[2, 2])));
    }

    #[test]
    fn successor_examples() {
        let s: Vec<String> = cfg(3, &[1, 1, 1, 1])
            .successors()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(s, vec!["1,1,1,2", "1,1,1,3"]);

        let s: Vec<String> = cfg(2, &[1, 2]).successors().map(|c| c.to_string()).collect();
        assert_eq!(s, vec!["2,1"]);

        let f = cfg(3, &[1, 2, 3]);
        let succ: Vec<Configuration> = f.successors().collect();
        assert_eq!(succ.len(), 8);
        assert!(succ.contains(&cfg(3, &[2, 3, 2])));
        let by_scan: Vec<Configuration> = all_configs(inst(3, 3))
            .into_iter()
            .filter(|g| f.is_edge_to(g))
            .collect();
        assert_eq!(by_scan.len(), 8);
        for g in &by_scan {
            assert!(succ.contains(g));
        }
    }

    #[test]
    fn successors_are_lexicographic() {
        let f = cfg(4, &[1, 2, 2, 4]);
        let tuples: Vec<Vec<usize>> = f
            .successors()
            .map(|g| f.movers().iter().map(|&p| g.room_of(p)).collect())
            .collect();
        let mut sorted = tuples.clone();
        sorted.sort();
        assert_eq!(tuples, sorted);
        assert_eq!(tuples.len(), 27);
    }

    #[test]
    fn successor_counts_and_edge_equivalence() {
        for (n, m) in [(1, 2), (3, 2), (3, 3), (4, 3), (3, 4), (2, 5)] {
            let all = all_configs(inst(n, m));
            for f in &all {
                let succ: Vec<Configuration> = f.successors().collect();
                assert_eq!(succ.len() as u64, f.out_degree());
                if m == 2 {
                    assert_eq!(succ.len(), 1);
                }
                for g in &all {
                    assert_eq!(f.is_edge_to(g), succ.contains(g), "{f} -> {g}");
                }
            }
        }
    }

    #[test]
    fn spread_and_concentrated() {
        assert!(cfg(3, &[1, 1, 2, 3]).is_spread());
        assert!(cfg(3, &[1, 2]).is_spread());
        assert!(!cfg(3, &[2, 2, 2]).is_spread());
        assert!(cfg(3, &[1, 2, 2, 2]).is_concentrated());
        assert!(!cfg(3, &[1, 1, 2, 3]).is_concentrated());
        for m in 2..5 {
            for f in all_configs(inst(1, m)) {
                assert!(f.is_spread() && f.is_concentrated());
            }
        }
        for (n, m) in [(2, 2), (3, 3), (4, 3), (2, 4)] {
            for f in all_configs(inst(n, m)) {
                assert!(!(f.is_spread() && f.is_concentrated()));
            }
        }
    }

    #[test]
    fn low_profile_examples() {
        assert_eq!(cfg(3, &[1, 1, 2, 3]).low_profile().rooms, vec![0]);
        assert!(cfg(3, &[3, 1, 2]).low_profile().is_empty());
        assert_eq!(cfg(3, &[2, 3, 1, 1, 2]).low_profile().rooms, vec![1, 2]);
    }

    #[test]
    fn index_roundtrip() {
        let i = inst(2, 2);
        let ix = i.indexer(DEFAULT_VERTEX_BOUND).unwrap();
        assert_eq!(ix.encode(&cfg(2, &[1, 1])).unwrap(), 0);
        assert_eq!(ix.encode(&cfg(2, &[2, 1])).unwrap(), 1);

        let ix = inst(4, 3).indexer(DEFAULT_VERTEX_BOUND).unwrap();
        for i in 0..81 {
            assert_eq!(ix.encode(&ix.decode(i).unwrap()).unwrap(), i);
        }
        assert!(matches!(
            ix.decode(81),
            Err(ModelError::IndexOutOfRange { index: 81, count: 81 })
        ));
        assert!(matches!(
            inst(30, 3).indexer(DEFAULT_VERTEX_BOUND),
            Err(ModelError::Overflow { .. })
        ));
        assert!(inst(200, 20).indexer(u64::MAX).is_err());
    }

    #[test]
    fn parse_and_format() {
        let i = inst(3, 3);
        let f = Configuration::parse("1,2,3", i).unwrap();
        assert_eq!(f.rooms(), &[0, 1, 2]);
        assert_eq!(Configuration::parse(" 1, 2 ,3 ", i).unwrap(), f);
        assert!(matches!(
            Configuration::parse("1,4", inst(2, 3)),
            Err(ModelError::Range { room: 4, rooms: 3 })
        ));
        assert!(matches!(
            Configuration::parse("1,x,3", i),
            Err(ModelError::Parse { .. })
        ));
        assert!(matches!(
            Configuration::parse("0,1,3", i),
            Err(ModelError::Range { room: 0, .. })
        ));
        assert!(matches!(
            Configuration::parse("1,2", i),
            Err(ModelError::Length { .. })
        ));
        assert_eq!(cfg(3, &[2, 3, 2]).to_string(), "2,3,2");
    }

    #[test]
    fn path_validation() {
        let p = Path::new(
            ["1,2,3", "2,3,2", "2,2,1", "2,1,3"]
                .iter()
                .map(|s| Configuration::parse(s, inst(3, 3)).unwrap())
                .collect(),
        );
        assert!(p.is_valid());
        assert_eq!(p.len(), 3);
        assert!(Path::single(cfg(3, &[1, 1, 1, 1])).is_valid());
        let bad = Path::new(vec![cfg(3, &[1, 2, 3]), cfg(3, &[1, 2, 3])]);
        assert_eq!(bad.first_invalid_step(), Some(0));
    }
}
