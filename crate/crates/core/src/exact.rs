//! Ground-truth verifiers.
//!
//! Everything here reads the whole graph and may take linear, cubic or
//! exponential time. These functions decide whether a reconstructed graph
//! really has the target property; reconstructors never call them.

use std::collections::VecDeque;

use crate::error::CheckError;
use crate::graph::{SparseGraph, Vertex};

fn require_undirected(g: &SparseGraph) -> Result<(), CheckError> {
    if g.is_directed() {
        Err(CheckError::WrongGraphKind {
            expected: "undirected",
        })
    } else {
        Ok(())
    }
}

fn require_directed(g: &SparseGraph) -> Result<(), CheckError> {
    if g.is_directed() {
        Ok(())
    } else {
        Err(CheckError::WrongGraphKind {
            expected: "directed",
        })
    }
}

/// Component label per vertex (index 0 unused) and the number of components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub label: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn is_connected(&self) -> bool {
        self.count <= 1
    }

    /// Vertex sets, in label order.
    pub fn groups(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.label.iter().enumerate().skip(1) {
            out[c].push(v);
        }
        out
    }
}

pub fn connected_components(g: &SparseGraph) -> Result<Components, CheckError> {
    require_undirected(g)?;
    let n = g.n();
    let mut label = vec![usize::MAX; n + 1];
    label[0] = 0;
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 1..=n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = count;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if label[w] == usize::MAX {
                    label[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    Ok(Components { label, count })
}

pub fn is_connected(g: &SparseGraph) -> Result<bool, CheckError> {
    Ok(connected_components(g)?.is_connected())
}

/// Strongly connected components with source/sink flags from the condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Component id per vertex; index 0 unused.
    pub component: Vec<usize>,
    pub is_source: Vec<bool>,
    pub is_sink: Vec<bool>,
}

impl SccDecomposition {
    pub fn count(&self) -> usize {
        self.is_source.len()
    }

    pub fn sources(&self) -> usize {
        self.is_source.iter().filter(|&&b| b).count()
    }

    pub fn sinks(&self) -> usize {
        self.is_sink.iter().filter(|&&b| b).count()
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.count() <= 1
    }

    pub fn members(&self, c: usize) -> Vec<Vertex> {
        (1..self.component.len())
            .filter(|&v| self.component[v] == c)
            .collect()
    }
}

/// Iterative Tarjan over the vertices in `scope` (or all vertices),
/// following only arcs that stay inside the scope.
pub(crate) fn tarjan<F>(n: usize, roots: &[Vertex], in_scope: F, out: &dyn Fn(Vertex) -> Vec<Vertex>) -> Vec<usize>
where
    F: Fn(Vertex) -> bool,
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n + 1];
    let mut low = vec![0usize; n + 1];
    let mut on_stack = vec![false; n + 1];
    let mut comp = vec![UNSEEN; n + 1];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;

    for &root in roots {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, its out-list, position)
        let mut call: Vec<(Vertex, Vec<Vertex>, usize)> = Vec::new();
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, out(root), 0));
        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if !in_scope(w) {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, out(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

pub fn scc_decompose(g: &SparseGraph) -> Result<SccDecomposition, CheckError> {
    require_directed(g)?;
    let n = g.n();
    let roots: Vec<Vertex> = (1..=n).collect();
    let mut component = tarjan(n, &roots, |_| true, &|v| g.out_neighbors(v).to_vec());
    component[0] = 0;
    let count = component.iter().skip(1).copied().max().map_or(0, |c| c + 1);
    let mut is_source = vec![true; count];
    let mut is_sink = vec![true; count];
    for (u, v) in g.edges() {
        let (cu, cv) = (component[u], component[v]);
        if cu != cv {
            is_sink[cu] = false;
            is_source[cv] = false;
        }
    }
    Ok(SccDecomposition {
        component,
        is_source,
        is_sink,
    })
}

/// Global minimum edge cut (Stoer–Wagner). Zero iff disconnected.
pub fn edge_connectivity(g: &SparseGraph) -> Result<usize, CheckError> {
    require_undirected(g)?;
    let n = g.n();
    if n < 2 {
        return Err(CheckError::Degenerate("edge connectivity needs n >= 2"));
    }
    let mut w = vec![vec![0u32; n]; n];
    for (u, v) in g.edges() {
        w[u - 1][v - 1] += 1;
        w[v - 1][u - 1] += 1;
    }
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    let mut key = vec![0u64; n];
    let mut added = vec![false; n];
    while alive.len() > 1 {
        for &v in &alive {
            key[v] = 0;
            added[v] = false;
        }
        let mut prev = alive[0];
        let mut last = alive[0];
        for step in 0..alive.len() {
            let mut sel = usize::MAX;
            for &v in &alive {
                if !added[v] && (sel == usize::MAX || key[v] > key[sel]) {
                    sel = v;
                }
            }
            added[sel] = true;
            if step == alive.len() - 1 {
                best = best.min(key[sel] as usize);
                prev = last;
                last = sel;
            } else {
                prev = last;
                last = sel;
                let row = &w[sel];
                for &v in &alive {
                    if !added[v] {
                        key[v] += u64::from(row[v]);
                    }
                }
            }
        }
        // merge `last` into `prev`
        for &v in &alive {
            let x = w[last][v];
            w[prev][v] += x;
            w[v][prev] += x;
        }
        w[prev][prev] = 0;
        alive.retain(|&v| v != last);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// Number of edges leaving `set` (`member` is indexed by vertex).
pub fn cut_degree(g: &SparseGraph, member: &[bool]) -> usize {
    g.edges()
        .filter(|&(u, v)| member[u] != member[v])
        .count()
}

fn bfs_distances(g: &SparseGraph, s: Vertex, limit: Option<usize>) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n() + 1];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        if limit.is_some_and(|l| dist[u] >= l) {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

/// BFS distance layers from `s` (undirected). `usize::MAX` marks unreachable.
pub fn distances_from(g: &SparseGraph, s: Vertex) -> Vec<usize> {
    bfs_distances(g, s, None)
}

/// Largest BFS distance over all pairs; `None` when disconnected.
pub fn exact_diameter(g: &SparseGraph) -> Result<Option<usize>, CheckError> {
    require_undirected(g)?;
    let mut diam = 0;
    for s in 1..=g.n() {
        let d = bfs_distances(g, s, None);
        for &x in &d[1..] {
            if x == usize::MAX {
                return Ok(None);
            }
            diam = diam.max(x);
        }
    }
    Ok(Some(diam))
}

/// `G^D`: an edge between every pair at distance `1..=D`.
pub fn power_graph(g: &SparseGraph, d: usize) -> Result<SparseGraph, CheckError> {
    require_undirected(g)?;
    if d == 0 {
        return Err(CheckError::Degenerate("power graph needs D >= 1"));
    }
    let mut edges = Vec::new();
    for s in 1..=g.n() {
        let dist = bfs_distances(g, s, Some(d));
        for v in (s + 1)..=g.n() {
            if dist[v] <= d {
                edges.push((s, v));
            }
        }
    }
    let m = g.m_bound().max(edges.len());
    Ok(SparseGraph::undirected(g.n(), m, edges).expect("power graph is simple"))
}

pub const EXTREME_ENUMERATION_LIMIT: usize = 16;

/// All `ℓ`-extreme sets: nonempty `U ⊊ V` with `deg(U) = ℓ` and
/// `deg(W) > ℓ` for every nonempty `W ⊊ U`. Exponential in `n`.
pub fn enumerate_extreme_sets(g: &SparseGraph, ell: usize) -> Result<Vec<Vec<Vertex>>, CheckError> {
    require_undirected(g)?;
    let n = g.n();
    if n > EXTREME_ENUMERATION_LIMIT {
        return Err(CheckError::SizeLimit {
            n,
            limit: EXTREME_ENUMERATION_LIMIT,
        });
    }
    let deg = subset_degrees(g);
    let full = (1usize << n) - 1;
    // best[U] = min deg(W) over nonempty W ⊆ U
    let mut best = vec![usize::MAX; 1 << n];
    for u in 1..=full {
        let mut b = deg[u];
        let mut rest = u;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            b = b.min(best[u ^ bit]);
        }
        best[u] = b;
    }
    let mut out = Vec::new();
    for u in 1..full {
        if deg[u] != ell {
            continue;
        }
        let mut proper_min = usize::MAX;
        let mut rest = u;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            proper_min = proper_min.min(best[u ^ bit]);
        }
        if proper_min > ell {
            out.push((0..n).filter(|i| u >> i & 1 == 1).map(|i| i + 1).collect::<Vec<_>>());
        }
    }
    for (i, a) in out.iter().enumerate() {
        for b in &out[i + 1..] {
            assert!(
                a.iter().all(|x| !b.contains(x)),
                "distinct {ell}-extreme sets {a:?} and {b:?} intersect"
            );
        }
    }
    Ok(out)
}

// deg(U) for every bitmask U (bit i is vertex i + 1); deg(∅) = usize::MAX
fn subset_degrees(g: &SparseGraph) -> Vec<usize> {
    let n = g.n();
    let mut adj = vec![0usize; n];
    for (u, v) in g.edges() {
        adj[u - 1] |= 1 << (v - 1);
        adj[v - 1] |= 1 << (u - 1);
    }
    let mut deg = vec![0usize; 1 << n];
    deg[0] = usize::MAX;
    for u in 1usize..(1 << n) {
        let low = u.trailing_zeros() as usize;
        let rest = u & (u - 1);
        let base = if rest == 0 { 0 } else { deg[rest] };
        let inside = (adj[low] & rest).count_ones() as usize;
        let d = adj[low].count_ones() as usize;
        deg[u] = base + d - 2 * inside;
    }
    deg
}

/// Size of a maximum independent set, by exhaustive branching.
pub fn max_independent_set_size(g: &SparseGraph) -> Result<usize, CheckError> {
    require_undirected(g)?;
    let n = g.n();
    if n > 60 {
        return Err(CheckError::SizeLimit { n, limit: 60 });
    }
    let mut adj = vec![0u64; n];
    for (u, v) in g.edges() {
        adj[u - 1] |= 1 << (v - 1);
        adj[v - 1] |= 1 << (u - 1);
    }
    fn go(mask: u64, adj: &[u64]) -> usize {
        if mask == 0 {
            return 0;
        }
        let v = mask.trailing_zeros() as usize;
        let without = go(mask & !(1 << v), adj);
        let with = 1 + go(mask & !(1 << v) & !adj[v], adj);
        without.max(with)
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(go(all, &adj))
}

/// Exact distance to connectivity: `(components - 1) / m_bound`, as a pair count.
pub fn distance_to_connectivity(g: &SparseGraph) -> Result<crate::graph::GraphDistance, CheckError> {
    let c = connected_components(g)?;
    Ok(crate::graph::GraphDistance {
        differing_pairs: c.count.saturating_sub(1),
        m_bound: g.m_bound(),
    })
}

/// Exact distance to strong connectivity: `max(sources, sinks)` of the
/// condensation, or 0 when already strongly connected.
pub fn distance_to_strong_connectivity(
    g: &SparseGraph,
) -> Result<crate::graph::GraphDistance, CheckError> {
    let scc = scc_decompose(g)?;
    let arcs = if scc.is_strongly_connected() {
        0
    } else {
        scc.sources().max(scc.sinks())
    };
    Ok(crate::graph::GraphDistance {
        differing_pairs: arcs,
        m_bound: g.m_bound(),
    })
}

/// A graph property with an exact decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Connected,
    StronglyConnected,
    /// Edge connectivity at least `k`.
    KEdgeConnected(usize),
    /// Diameter at most `D`.
    DiameterAtMost(usize),
}

impl Property {
    pub fn is_directed(&self) -> bool {
        matches!(self, Property::StronglyConnected)
    }

    pub fn holds(&self, g: &SparseGraph) -> Result<bool, CheckError> {
        match *self {
            Property::Connected => is_connected(g),
            Property::StronglyConnected => Ok(scc_decompose(g)?.is_strongly_connected()),
            Property::KEdgeConnected(k) => {
                if g.n() < 2 {
                    return Ok(true);
                }
                Ok(edge_connectivity(g)? >= k)
            }
            Property::DiameterAtMost(d) => Ok(exact_diameter(g)?.is_some_and(|x| x <= d)),
        }
    }
}
