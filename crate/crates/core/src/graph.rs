//! Explicit configuration graphs at desk scale.
//!
//! Vertices are the dense ids produced by [`Indexer`]. Small graphs keep their
//! adjacency in CSR form; larger ones regenerate successor ids on the fly from
//! the base-M digits, which gives the same lists in the same order.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use crate::model::{skip_room, Configuration, Indexer, Instance, ModelError, Path, VertexClass};

/// Graphs with more vertices than this are never materialized.
pub const MATERIALIZE_VERTEX_LIMIT: u64 = 1 << 18;
/// Graphs with more edges than this are never materialized.
pub const MATERIALIZE_EDGE_LIMIT: u64 = 1 << 24;

const UNSEEN: u32 = u32::MAX;

/// Successor ids of one vertex, in the same order as [`Configuration::successors`].
#[derive(Debug, Clone)]
pub struct SuccessorIndices {
    origin: Vec<usize>,
    powers: Vec<i64>,
    digits: Vec<usize>,
    base: usize,
    current: i64,
    done: bool,
}

impl SuccessorIndices {
    pub fn new(indexer: &Indexer, vertex: u32) -> Self {
        let inst = indexer.instance();
        let m = inst.rooms() as u64;
        let mut rooms = Vec::with_capacity(inst.people());
        let mut v = vertex as u64;
        for _ in 0..inst.people() {
            rooms.push((v % m) as usize);
            v /= m;
        }
        // movers in ascending order: a person moves iff nobody smarter shares the room
        let mut movers = Vec::new();
        for p in (0..rooms.len()).rev() {
            if !rooms[p + 1..].contains(&rooms[p]) {
                movers.push(p);
            }
        }
        movers.reverse();
        let origin: Vec<usize> = movers.iter().map(|&p| rooms[p]).collect();
        let powers: Vec<i64> = movers
            .iter()
            .map(|&p| indexer.powers()[p] as i64)
            .collect();
        let mut current = vertex as i64;
        for (&from, &pow) in origin.iter().zip(&powers) {
            current += (skip_room(0, from) as i64 - from as i64) * pow;
        }
        SuccessorIndices {
            digits: vec![0; origin.len()],
            origin,
            powers,
            base: inst.rooms() - 1,
            current,
            done: false,
        }
    }
}

impl Iterator for SuccessorIndices {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.done {
            return None;
        }
        let out = self.current as u32;
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            let from = self.origin[i];
            let d = self.digits[i];
            if d + 1 < self.base {
                let step = skip_room(d + 1, from) - skip_room(d, from);
                self.current += step as i64 * self.powers[i];
                self.digits[i] = d + 1;
                break;
            }
            let back = skip_room(d, from) - skip_room(0, from);
            self.current -= back as i64 * self.powers[i];
            self.digits[i] = 0;
        }
        Some(out)
    }
}

#[derive(Debug, Clone)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

/// Successors of a vertex in either storage mode.
pub enum Neighbors<'a> {
    Stored(std::iter::Copied<std::slice::Iter<'a, u32>>),
    Implicit(SuccessorIndices),
}

impl Iterator for Neighbors<'_> {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        match self {
            Neighbors::Stored(it) => it.next(),
            Neighbors::Implicit(it) => it.next(),
        }
    }
}

/// `G(N, M)` with dense vertex ids.
#[derive(Debug, Clone)]
pub struct ExplicitGraph {
    indexer: Indexer,
    edge_count: u64,
    adjacency: Option<Csr>,
}

impl ExplicitGraph {
    /// Fails with `Overflow` when `M^N > bound`.
    pub fn build(inst: Instance, bound: u64) -> Result<Self, ModelError> {
        let indexer = inst.indexer(bound)?;
        let n = indexer.count();
        let mut degrees = Vec::with_capacity(n as usize);
        let mut rooms = Vec::with_capacity(inst.people());
        for v in 0..n {
            indexer.decode_into(v, &mut rooms);
            let mut occupied = 0u32;
            for p in 0..rooms.len() {
                if !rooms[p + 1..].contains(&rooms[p]) {
                    occupied += 1;
                }
            }
            degrees.push((inst.rooms() as u64 - 1).saturating_pow(occupied));
        }
        let edge_count = degrees.iter().fold(0u64, |a, &d| a.saturating_add(d));

        let adjacency = if n <= MATERIALIZE_VERTEX_LIMIT && edge_count <= MATERIALIZE_EDGE_LIMIT {
            let mut offsets = Vec::with_capacity(n as usize + 1);
            let mut targets = Vec::with_capacity(edge_count as usize);
            offsets.push(0);
            for v in 0..n as u32 {
                targets.extend(SuccessorIndices::new(&indexer, v));
                offsets.push(targets.len());
            }
            Some(Csr { offsets, targets })
        } else {
            None
        };
        Ok(ExplicitGraph {
            indexer,
            edge_count,
            adjacency,
        })
    }

    pub fn instance(&self) -> Instance {
        self.indexer.instance()
    }

    pub fn indexer(&self) -> &Indexer {
        &self.indexer
    }

    pub fn vertex_count(&self) -> usize {
        self.indexer.count() as usize
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn is_materialized(&self) -> bool {
        self.adjacency.is_some()
    }

    pub fn successors(&self, v: u32) -> Neighbors<'_> {
        match &self.adjacency {
            Some(csr) => {
                let range = csr.offsets[v as usize]..csr.offsets[v as usize + 1];
                Neighbors::Stored(csr.targets[range].iter().copied())
            }
            None => Neighbors::Implicit(SuccessorIndices::new(&self.indexer, v)),
        }
    }

    pub fn config(&self, v: u32) -> Configuration {
        self.indexer.decode(v as u64).expect("vertex id in range")
    }

    pub fn vertex_of(&self, config: &Configuration) -> Result<u32, ModelError> {
        self.indexer.encode(config).map(|i| i as u32)
    }

    /// Exact in-degree of every vertex.
    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.vertex_count()];
        for v in 0..self.vertex_count() as u32 {
            for w in self.successors(v) {
                deg[w as usize] += 1;
            }
        }
        deg
    }

    pub fn out_degree(&self, v: u32) -> u64 {
        match &self.adjacency {
            Some(csr) => (csr.offsets[v as usize + 1] - csr.offsets[v as usize]) as u64,
            None => self.config(v).out_degree(),
        }
    }

    /// Strongly connected components via iterative Tarjan.
    pub fn scc_decompose(&self) -> SccReport {
        let n = self.vertex_count();
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut raw = vec![UNSEEN; n];
        let mut next_index = 0u32;
        let mut next_comp = 0u32;
        let mut frames: Vec<(u32, Neighbors<'_>)> = Vec::new();

        for root in 0..n as u32 {
            if index[root as usize] != UNSEEN {
                continue;
            }
            index[root as usize] = next_index;
            low[root as usize] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root as usize] = true;
            frames.push((root, self.successors(root)));

            while let Some((v, it)) = frames.last_mut() {
                let v = *v;
                if let Some(w) = it.next() {
                    let wi = w as usize;
                    if index[wi] == UNSEEN {
                        index[wi] = next_index;
                        low[wi] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[wi] = true;
                        frames.push((w, self.successors(w)));
                    } else if on_stack[wi] {
                        low[v as usize] = low[v as usize].min(index[wi]);
                    }
                    continue;
                }
                frames.pop();
                if let Some((parent, _)) = frames.last() {
                    let p = *parent as usize;
                    low[p] = low[p].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        raw[w as usize] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
        SccReport {
            partition: ComponentPartition::from_labels(&raw),
        }
    }

    /// Components of the underlying undirected graph.
    pub fn weak_components(&self) -> ComponentPartition {
        let n = self.vertex_count();
        let mut dsu = DisjointSets::new(n);
        for v in 0..n as u32 {
            for w in self.successors(v) {
                dsu.union(v, w);
            }
        }
        let roots: Vec<u32> = (0..n as u32).map(|v| dsu.find(v)).collect();
        ComponentPartition::from_labels(&roots)
    }

    /// Shortest-path distances from `from` to every vertex (`None` when unreachable).
    pub fn bfs_distances(&self, from: u32) -> Vec<Option<u32>> {
        let mut dist = vec![UNSEEN; self.vertex_count()];
        dist[from as usize] = 0;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize] + 1;
            for w in self.successors(v) {
                if dist[w as usize] == UNSEEN {
                    dist[w as usize] = d;
                    queue.push_back(w);
                }
            }
        }
        dist.into_iter()
            .map(|d| (d != UNSEEN).then_some(d))
            .collect()
    }

    /// A shortest path from `from` to `to`, or `None` when `to` is unreachable.
    pub fn bfs_path(&self, from: u32, to: u32) -> Option<Vec<u32>> {
        let mut parent = vec![UNSEEN; self.vertex_count()];
        parent[from as usize] = from;
        let mut queue = std::collections::VecDeque::from([from]);
        'search: while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for w in self.successors(v) {
                if parent[w as usize] == UNSEEN {
                    parent[w as usize] = v;
                    if w == to {
                        break 'search;
                    }
                    queue.push_back(w);
                }
            }
        }
        if parent[to as usize] == UNSEEN {
            return None;
        }
        let mut path = vec![to];
        let mut v = to;
        while v != from {
            v = parent[v as usize];
            path.push(v);
        }
        path.reverse();
        Some(path)
    }

    /// Shortest distances for many `(source, target)` pairs at once.
    ///
    /// Up to 256 distinct sources share one level-synchronous sweep, each source
    /// owning one bit of a per-vertex mask.
    pub fn pair_distances(&self, pairs: &[(u32, u32)]) -> Vec<Option<u32>> {
        const LANES: usize = 256;
        let n = self.vertex_count();
        let mut out = vec![None; pairs.len()];
        let mut sources: Vec<u32> = pairs.iter().map(|p| p.0).collect();
        sources.sort_unstable();
        sources.dedup();

        let mut seen = vec![[0u64; 4]; n];
        let mut cur = vec![[0u64; 4]; n];
        let mut nxt = vec![[0u64; 4]; n];
        let mut target_slot = vec![UNSEEN; n];

        for batch in sources.chunks(LANES) {
            for m in seen.iter_mut() {
                *m = [0; 4];
            }
            // pairs of this batch, grouped by target vertex
            let mut slots: Vec<Vec<(usize, usize)>> = Vec::new();
            let mut pending = 0usize;
            for (pid, &(s, t)) in pairs.iter().enumerate() {
                let Ok(lane) = batch.binary_search(&s) else {
                    continue;
                };
                if s == t {
                    out[pid] = Some(0);
                    continue;
                }
                let slot = &mut target_slot[t as usize];
                if *slot == UNSEEN {
                    *slot = slots.len() as u32;
                    slots.push(Vec::new());
                }
                slots[*slot as usize].push((pid, lane));
                pending += 1;
            }

            let mut active: Vec<u32> = Vec::with_capacity(batch.len());
            for (lane, &s) in batch.iter().enumerate() {
                let (word, bit) = (lane / 64, lane % 64);
                seen[s as usize][word] |= 1 << bit;
                cur[s as usize][word] |= 1 << bit;
                active.push(s);
            }
            let mut level = 0u32;
            while !active.is_empty() && pending > 0 {
                level += 1;
                let mut next_active = Vec::new();
                for &v in &active {
                    let bits = std::mem::take(&mut cur[v as usize]);
                    for w in self.successors(v) {
                        let wi = w as usize;
                        let s = &mut seen[wi];
                        let gained = [
                            bits[0] & !s[0],
                            bits[1] & !s[1],
                            bits[2] & !s[2],
                            bits[3] & !s[3],
                        ];
                        if gained == [0; 4] {
                            continue;
                        }
                        for k in 0..4 {
                            s[k] |= gained[k];
                        }
                        let nx = &mut nxt[wi];
                        if *nx == [0; 4] {
                            next_active.push(w);
                        }
                        for k in 0..4 {
                            nx[k] |= gained[k];
                        }
                        let slot = target_slot[wi];
                        if slot != UNSEEN {
                            for &(pid, lane) in &slots[slot as usize] {
                                if gained[lane / 64] >> (lane % 64) & 1 == 1 {
                                    out[pid] = Some(level);
                                    pending -= 1;
                                }
                            }
                        }
                    }
                }
                std::mem::swap(&mut cur, &mut nxt);
                active = next_active;
            }
            for &v in &active {
                cur[v as usize] = [0; 4];
            }
            for &(s, t) in pairs {
                if batch.binary_search(&s).is_ok() {
                    target_slot[t as usize] = UNSEEN;
                }
            }
        }
        out
    }
}

/// A partition of the vertex set; ids ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub component_of: Vec<u32>,
    pub sizes: Vec<u64>,
}

impl ComponentPartition {
    fn from_labels(labels: &[u32]) -> Self {
        let mut rename: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        let mut sizes = Vec::new();
        let component_of = labels
            .iter()
            .map(|&l| {
                let id = *rename.entry(l).or_insert_with(|| {
                    sizes.push(0);
                    sizes.len() as u32 - 1
                });
                sizes[id as usize] += 1;
                id
            })
            .collect();
        ComponentPartition {
            component_of,
            sizes,
        }
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// Strongly connected components and summary counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccReport {
    pub partition: ComponentPartition,
}

impl SccReport {
    pub fn count(&self) -> usize {
        self.partition.count()
    }

    pub fn component_of(&self, v: u32) -> u32 {
        self.partition.component_of[v as usize]
    }

    pub fn sizes(&self) -> &[u64] {
        &self.partition.sizes
    }

    pub fn giant_size(&self) -> u64 {
        self.sizes().iter().copied().max().unwrap_or(0)
    }

    /// Id of the largest component (smallest id on ties).
    pub fn giant_id(&self) -> u32 {
        let giant = self.giant_size();
        self.sizes().iter().position(|&s| s == giant).unwrap_or(0) as u32
    }

    pub fn singleton_count(&self) -> usize {
        self.sizes().iter().filter(|&&s| s == 1).count()
    }

    /// size -> number of components of that size
    pub fn size_multiset(&self) -> BTreeMap<u64, usize> {
        let mut out = BTreeMap::new();
        for &s in self.sizes() {
            *out.entry(s).or_insert(0) += 1;
        }
        out
    }
}

struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let grand = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = grand;
            v = grand;
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

/// Shortest distance between two configurations of an enumerable instance.
pub fn bfs_distance(
    from: &Configuration,
    to: &Configuration,
    bound: u64,
) -> Result<Option<u32>, ModelError> {
    let path = bfs_path(from, to, bound)?;
    Ok(path.map(|p| p.len() as u32))
}

/// A shortest path between two configurations of an enumerable instance.
pub fn bfs_path(
    from: &Configuration,
    to: &Configuration,
    bound: u64,
) -> Result<Option<Path>, ModelError> {
    if from.instance() != to.instance() {
        return Err(ModelError::InstanceMismatch);
    }
    let graph = ExplicitGraph::build(from.instance(), bound)?;
    let (s, t) = (graph.vertex_of(from)?, graph.vertex_of(to)?);
    Ok(graph
        .bfs_path(s, t)
        .map(|ids| Path::new(ids.into_iter().map(|v| graph.config(v)).collect())))
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InstanceTag {
    pub n: usize,
    pub m: usize,
}

impl From<Instance> for InstanceTag {
    fn from(inst: Instance) -> Self {
        InstanceTag {
            n: inst.people(),
            m: inst.rooms(),
        }
    }
}

/// One measured-vs-predicted comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: &'static str,
    pub predicted: serde_json::Value,
    pub measured: serde_json::Value,
    pub pass: bool,
}

impl Verdict {
    fn new<T: Serialize + PartialEq>(name: &'static str, predicted: T, measured: T) -> Self {
        Verdict {
            name,
            pass: predicted == measured,
            predicted: serde_json::to_value(&predicted).unwrap(),
            measured: serde_json::to_value(&measured).unwrap(),
        }
    }
}

/// Measured structure of `G(N, M)` next to the connectivity predictions.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub instance: InstanceTag,
    pub vertices: u64,
    pub edges: u64,
    pub strongly_connected: bool,
    pub weakly_connected: bool,
    pub scc_count: usize,
    pub giant_size: u64,
    pub singleton_count: usize,
    pub weak_component_count: usize,
    pub weak_component_sizes: Vec<u64>,
    pub min_in_degree: u32,
    pub zero_in_degree: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub all_pass: bool,
}

/// Builds `G(N, M)`, measures it, and compares against the predicted structure:
/// strong connectivity iff `M >= N + 1`; for `3 <= M <= N` weak connectivity,
/// a giant component of size `M^N - M^(N-M+1)` and `M^(N-M+1)` singleton
/// components that are exactly the concentrated configurations; zero in-degree
/// exactly on the concentrated configurations whenever `M <= N`.
pub fn verify_theorems(inst: Instance, bound: u64) -> Result<TheoremReport, ModelError> {
    let graph = ExplicitGraph::build(inst, bound)?;
    Ok(verify_graph(&graph))
}

pub fn verify_graph(graph: &ExplicitGraph) -> TheoremReport {
    let inst = graph.instance();
    let (n, m) = (inst.people(), inst.rooms());
    let scc = graph.scc_decompose();
    let weak = graph.weak_components();
    let indeg = graph.in_degrees();

    let concentrated: Vec<bool> = (0..graph.vertex_count() as u32)
        .map(|v| graph.config(v).is_concentrated())
        .collect();
    let zero_in: Vec<bool> = indeg.iter().map(|&d| d == 0).collect();
    let singleton_members: Vec<bool> = scc
        .partition
        .component_of
        .iter()
        .map(|&c| scc.sizes()[c as usize] == 1)
        .collect();

    let strongly_connected = scc.count() == 1;
    let weakly_connected = weak.count() == 1;
    let mut verdicts = vec![Verdict::new(
        "strongly_connected_iff_m_ge_n_plus_1",
        m > n,
        strongly_connected,
    )];
    let min_in_degree = indeg.iter().copied().min().unwrap_or(0);
    if m > n {
        verdicts.push(Verdict::new("min_in_degree_positive", true, min_in_degree >= 1));
    } else {
        verdicts.push(Verdict::new("zero_in_degree_equals_vc", true, zero_in == concentrated));
    }
    if (3..=n).contains(&m) {
        let mm = m as u64;
        let singletons = mm.pow((n - m + 1) as u32);
        let giant = mm.pow(n as u32) - singletons;
        verdicts.push(Verdict::new("weakly_connected", true, weakly_connected));
        verdicts.push(Verdict::new("giant_size", giant, scc.giant_size()));
        verdicts.push(Verdict::new(
            "singleton_count",
            singletons,
            scc.singleton_count() as u64,
        ));
        verdicts.push(Verdict::new("scc_count", singletons + 1, scc.count() as u64));
        verdicts.push(Verdict::new(
            "singletons_equal_vc",
            true,
            singleton_members == concentrated,
        ));
    }
    if m == 2 && n > 2 {
        verdicts.push(Verdict::new("weakly_connected", false, weakly_connected));
    }

    let zero_in_degree = zero_in
        .iter()
        .enumerate()
        .filter(|(_, &z)| z)
        .map(|(v, _)| graph.config(v as u32).to_string())
        .collect();
    let all_pass = verdicts.iter().all(|v| v.pass);
    let mut weak_component_sizes = weak.sizes.clone();
    weak_component_sizes.sort_unstable_by(|a, b| b.cmp(a));
    TheoremReport {
        instance: inst.into(),
        vertices: graph.vertex_count() as u64,
        edges: graph.edge_count(),
        strongly_connected,
        weakly_connected,
        scc_count: scc.count(),
        giant_size: scc.giant_size(),
        singleton_count: scc.singleton_count(),
        weak_component_count: weak.count(),
        weak_component_sizes,
        min_in_degree,
        zero_in_degree,
        verdicts,
        all_pass,
    }
}

/// Graphviz digraph; node shape follows the vertex class (spread: filled
/// circle, concentrated: square, other: cross-labelled plain node).
pub fn export_dot<W: Write>(graph: &ExplicitGraph, out: &mut W) -> io::Result<()> {
    let inst = graph.instance();
    writeln!(out, "digraph G_{}_{} {{", inst.people(), inst.rooms())?;
    writeln!(out, "  node [fontsize=10];")?;
    for v in 0..graph.vertex_count() as u32 {
        let config = graph.config(v);
        let class = VertexClass::of(&config);
        let style = match class {
            VertexClass::Spread => "shape=circle, style=filled, xlabel=\"•\"",
            VertexClass::Concentrated => "shape=square, xlabel=\"■\"",
            VertexClass::Other => "shape=plain, xlabel=\"×\"",
        };
        writeln!(
            out,
            "  v{v} [label=\"{config}\", class=\"{}\", {style}];",
            class.label()
        )?;
    }
    for v in 0..graph.vertex_count() as u32 {
        for w in graph.successors(v) {
            writeln!(out, "  v{v} -> v{w};")?;
        }
    }
    writeln!(out, "}}")
}

#[derive(Debug, Serialize)]
struct VertexRecord {
    id: u32,
    config: String,
    scc: u32,
    in_deg: u32,
    out_deg: u64,
    class: &'static str,
}

/// One JSON record per vertex.
pub fn export_jsonl<W: Write>(graph: &ExplicitGraph, out: &mut W) -> io::Result<()> {
    let scc = graph.scc_decompose();
    let indeg = graph.in_degrees();
    for v in 0..graph.vertex_count() as u32 {
        let config = graph.config(v);
        let record = VertexRecord {
            id: v,
            scc: scc.component_of(v),
            in_deg: indeg[v as usize],
            out_deg: graph.out_degree(v),
            class: VertexClass::of(&config).label(),
            config: config.to_string(),
        };
        serde_json::to_writer(&mut *out, &record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_VERTEX_BOUND;

    fn graph(n: usize, m: usize) -> ExplicitGraph {
        ExplicitGraph::build(Instance::new(n, m).unwrap(), DEFAULT_VERTEX_BOUND).unwrap()
    }

    fn cfg(m: usize, rooms: &[usize]) -> Configuration {
        Configuration::from_one_based(Instance::new(rooms.len(), m).unwrap(), rooms).unwrap()
    }

    /// Reachability by repeated relaxation over a dense matrix; independent of Tarjan.
    fn closure(g: &ExplicitGraph) -> Vec<Vec<bool>> {
        let n = g.vertex_count();
        let mut r = vec![vec![false; n]; n];
        for v in 0..n {
            r[v][v] = true;
            for w in g.config(v as u32).successors() {
                r[v][g.vertex_of(&w).unwrap() as usize] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if r[i][k] {
                    for j in 0..n {
                        if r[k][j] {
                            r[i][j] = true;
                        }
                    }
                }
            }
        }
        r
    }

    #[test]
    fn successor_indices_match_model() {
        for (n, m) in [(1, 2), (3, 2), (4, 3), (3, 4), (2, 6), (5, 3)] {
            let g = graph(n, m);
            for v in 0..g.vertex_count() as u32 {
                let expected: Vec<u32> = g
                    .config(v)
                    .successors()
                    .map(|c| g.vertex_of(&c).unwrap())
                    .collect();
                let implicit: Vec<u32> = SuccessorIndices::new(g.indexer(), v).collect();
                assert_eq!(implicit, expected);
                assert_eq!(g.successors(v).collect::<Vec<_>>(), expected);
                assert_eq!(g.out_degree(v), expected.len() as u64);
            }
        }
    }

    #[test]
    fn build_examples() {
        let g = graph(1, 3);
        assert_eq!(g.vertex_count(), 3);
        assert!((0..3).all(|v| g.successors(v).count() == 2));
        assert_eq!(graph(4, 3).vertex_count(), 81);
        assert!(matches!(
            ExplicitGraph::build(Instance::new(30, 3).unwrap(), DEFAULT_VERTEX_BOUND),
            Err(ModelError::Overflow { .. })
        ));
    }

    #[test]
    fn scc_examples() {
        let r = graph(4, 3).scc_decompose();
        assert_eq!(r.giant_size(), 72);
        assert_eq!(r.singleton_count(), 9);
        assert_eq!(r.count(), 10);

        let r = graph(3, 4).scc_decompose();
        assert_eq!(r.count(), 1);
        assert_eq!(r.giant_size(), 64);

        let g = graph(2, 2);
        let r = g.scc_decompose();
        let mut sizes = r.sizes().to_vec();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2]);
        let a = g.vertex_of(&cfg(2, &[1, 2])).unwrap();
        let b = g.vertex_of(&cfg(2, &[2, 1])).unwrap();
        assert_eq!(r.component_of(a), r.component_of(b));
    }

    #[test]
    fn scc_matches_transitive_closure() {
        for (n, m) in [(2, 2), (3, 2), (3, 3), (4, 3), (2, 4), (3, 4)] {
            let g = graph(n, m);
            let r = closure(&g);
            let scc = g.scc_decompose();
            for v in 0..g.vertex_count() {
                for w in 0..g.vertex_count() {
                    let same = r[v][w] && r[w][v];
                    assert_eq!(same, scc.component_of(v as u32) == scc.component_of(w as u32));
                }
            }
            // ids ordered by smallest member
            let mut next = 0;
            for v in 0..g.vertex_count() as u32 {
                let c = scc.component_of(v);
                assert!(c <= next);
                if c == next {
                    next += 1;
                }
            }
            assert_eq!(scc.sizes().iter().sum::<u64>(), g.vertex_count() as u64);
        }
    }

    #[test]
    fn weak_examples() {
        assert_eq!(graph(4, 3).weak_components().count(), 1);
        assert!(graph(3, 2).weak_components().count() > 1);
        assert_eq!(graph(1, 2).weak_components().count(), 1);
    }

    #[test]
    fn in_degree_examples() {
        let g = graph(4, 3);
        let deg = g.in_degrees();
        for v in 0..81u32 {
            assert_eq!(deg[v as usize] == 0, g.config(v).is_concentrated());
        }
        assert_eq!(deg.iter().filter(|&&d| d == 0).count(), 9);
        assert!(graph(3, 4).in_degrees().iter().all(|&d| d >= 1));
        assert_eq!(graph(1, 2).in_degrees(), vec![1, 1]);
    }

    #[test]
    fn bfs_examples() {
        let f = cfg(3, &[1, 2, 3]);
        // (1,2,3) -> (2,3,2) -> (2,1,3); frozen from a brute-force scan over all 27 vertices
        assert_eq!(
            bfs_distance(&f, &cfg(3, &[2, 1, 3]), DEFAULT_VERTEX_BOUND).unwrap(),
            Some(2)
        );
        let p = bfs_path(&f, &cfg(3, &[2, 1, 3]), DEFAULT_VERTEX_BOUND)
            .unwrap()
            .unwrap();
        assert!(p.is_valid());
        assert_eq!(p.len(), 2);
        assert_eq!(
            bfs_distance(&f, &cfg(3, &[1, 1, 1]), DEFAULT_VERTEX_BOUND).unwrap(),
            None
        );
        assert_eq!(bfs_distance(&f, &f, DEFAULT_VERTEX_BOUND).unwrap(), Some(0));
    }

    #[test]
    fn pair_distances_match_single_source() {
        for (n, m) in [(3, 3), (4, 3), (3, 4), (5, 2)] {
            let g = graph(n, m);
            let v = g.vertex_count() as u32;
            let pairs: Vec<(u32, u32)> = (0..v).flat_map(|s| (0..v).map(move |t| (s, t))).collect();
            let fast = g.pair_distances(&pairs);
            for (pid, &(s, t)) in pairs.iter().enumerate() {
                assert_eq!(fast[pid], g.bfs_distances(s)[t as usize], "{s}->{t}");
            }
        }
    }

    #[test]
    fn theorem_reports() {
        let inst = |n, m| Instance::new(n, m).unwrap();
        let r = verify_theorems(inst(4, 3), DEFAULT_VERTEX_BOUND).unwrap();
        assert!(r.all_pass);
        assert_eq!(r.giant_size, 72);
        assert_eq!(r.zero_in_degree.len(), 9);
        let r = verify_theorems(inst(2, 3), DEFAULT_VERTEX_BOUND).unwrap();
        assert!(r.strongly_connected && r.all_pass);
        let r = verify_theorems(inst(5, 2), DEFAULT_VERTEX_BOUND).unwrap();
        assert!(!r.strongly_connected && !r.weakly_connected && r.all_pass);
    }

    #[test]
    fn dot_and_jsonl() {
        let g = graph(4, 3);
        let mut dot = Vec::new();
        export_dot(&g, &mut dot).unwrap();
        let dot = String::from_utf8(dot).unwrap();
        assert_eq!(dot.matches(" [label=").count(), 81);
        assert_eq!(dot.matches("class=\"Vc\"").count(), 9);

        let mut dot = Vec::new();
        export_dot(&graph(1, 2), &mut dot).unwrap();
        let dot = String::from_utf8(dot).unwrap();
        assert_eq!(dot.matches(" [label=").count(), 2);
        assert_eq!(dot.matches(" -> ").count(), 2);

        let mut lines = Vec::new();
        export_jsonl(&g, &mut lines).unwrap();
        let lines = String::from_utf8(lines).unwrap();
        let recs: Vec<serde_json::Value> = lines
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(recs.len(), 81);
        let first = &recs[0];
        assert_eq!(first["config"], "1,1,1,1");
        assert_eq!(first["class"], "Vc");
        assert_eq!(first["in_deg"], 0);
        for r in &recs {
            let c = Configuration::parse(r["config"].as_str().unwrap(), g.instance()).unwrap();
            assert_eq!(r["out_deg"].as_u64().unwrap(), c.out_degree());
        }
    }
}
