//! Local reconstruction of connectivity.
//!
//! [`Connected`] keeps every edge of `G` and adds `(w, v0)` exactly when `w`
//! has the smallest rank among the first `K` vertices a breadth-first search
//! from `w` discovers. Every component contains its own global rank
//! minimum, which always passes that test, so the answered graph is
//! connected for every seed; the rank randomness only controls how many
//! extra edges large components contribute.
//!
//! [`ModConnected`] spreads the added edges over `⌈c·n⌉` super-nodes joined
//! in a chain, which bounds the degree growth of every vertex and yields a
//! cheap neighbor oracle for the corrected graph (see [`ModConnected`]'s
//! [`NeighborOracle`] impl).

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use crate::error::{ConfigError, QueryError};
use crate::graph::Vertex;
use crate::oracle::{sorted_list_contains, EdgeOracle, NeighborOracle, Probe, Universe};
use crate::random::{RandomSource, Stream};

/// Parameters of the connectivity reconstructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnConfig {
    /// Assumed closeness of the input, as a fraction of `m`.
    pub eps: f64,
    /// Allowed overshoot: the output is `(1 + alpha)·eps`-close w.h.p.
    pub alpha: f64,
    /// Failure probability of the closeness guarantee.
    pub delta: f64,
    /// Super-node density for [`ModConnected`]; ignored by [`Connected`].
    pub c: f64,
    pub seed: u64,
}

/// Constants derived from a [`ConnConfig`] and the edge budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedConnConstants {
    /// BFS cap `⌈m / (δαεm − 1)⌉`.
    pub bfs_cap: usize,
    /// Number of super-nodes `⌈c·n⌉` (1 for [`Connected`]).
    pub super_nodes: usize,
}

/// `⌈x⌉` tolerant to floating-point noise such as `30 · 0.1 = 3.0000000000000004`.
pub(crate) fn ceil_tol(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

impl ConnConfig {
    pub fn new(eps: f64, alpha: f64, delta: f64, c: f64, seed: u64) -> Self {
        ConnConfig {
            eps,
            alpha,
            delta,
            c,
            seed,
        }
    }

    fn validate_common(&self) -> Result<(), ConfigError> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(ConfigError::invalid("eps", self.eps, "must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(ConfigError::invalid("alpha", self.alpha, "must be positive"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(ConfigError::invalid("delta", self.delta, "must lie in (0, 1)"));
        }
        Ok(())
    }

    /// `K = ⌈m / (δαεm − 1)⌉`, requiring `δαεm > 1` and `K ≥ 2`.
    pub fn bfs_cap(&self, m: usize) -> Result<usize, ConfigError> {
        self.validate_common()?;
        let budget = self.delta * self.alpha * self.eps * m as f64;
        if budget <= 1.0 {
            return Err(ConfigError::Constraint(format!(
                "δ·α·ε·m = {budget} must exceed 1"
            )));
        }
        let k = ceil_tol(m as f64 / (budget - 1.0));
        if k < 2 {
            return Err(ConfigError::Constraint(format!(
                "BFS cap K = {k} must be at least 2 (δ·α·ε·m = {budget} too large)"
            )));
        }
        Ok(k)
    }

    pub fn super_node_count(&self, n: usize) -> Result<usize, ConfigError> {
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(ConfigError::invalid("c", self.c, "must lie in (0, 1)"));
        }
        Ok(ceil_tol(self.c * n as f64).clamp(1, n))
    }

    pub fn derive(&self, n: usize, m: usize, multi: bool) -> Result<DerivedConnConstants, ConfigError> {
        Ok(DerivedConnConstants {
            bfs_cap: self.bfs_cap(m)?,
            super_nodes: if multi { self.super_node_count(n)? } else { 1 },
        })
    }
}

/// Vertices discovered by a breadth-first search from `start`, in discovery
/// order: FIFO, neighbors in list order, stopping once `cap` vertices are
/// known (mid-layer if need be) or `budget` oracle calls have been spent.
///
/// `stop` is consulted on every newly discovered vertex; returning `true`
/// ends the search early.
pub fn truncated_bfs<O: NeighborOracle + ?Sized>(
    oracle: &O,
    start: Vertex,
    cap: usize,
    budget: usize,
    mut stop: impl FnMut(Vertex) -> bool,
) -> Result<Vec<Vertex>, QueryError> {
    oracle.check_vertex(start)?;
    let mut probe = Probe::new(oracle, budget);
    let mut found = vec![start];
    let mut seen = HashSet::from([start]);
    let mut head = 0;
    'search: while head < found.len() && found.len() < cap {
        let x = found[head];
        head += 1;
        let Some(d) = probe.degree(x)? else { break };
        for i in 1..=d {
            if found.len() >= cap {
                break 'search;
            }
            let Some(y) = probe.neighbor(x, i)? else {
                break 'search;
            };
            if seen.insert(y) {
                found.push(y);
                if stop(y) {
                    break 'search;
                }
            }
        }
    }
    Ok(found)
}

/// Whether `w`'s rank is minimal among the vertices of its truncated BFS.
pub(crate) fn is_bfs_leader<O: NeighborOracle + ?Sized>(
    oracle: &O,
    ranks: &RandomSource,
    w: Vertex,
    cap: usize,
    budget: usize,
) -> Result<bool, QueryError> {
    let own = ranks.rank(w);
    let mut beaten = false;
    truncated_bfs(oracle, w, cap, budget, |y| {
        beaten = ranks.rank(y) < own;
        beaten
    })?;
    Ok(!beaten)
}

fn memo_bool(
    cell: &OnceLock<bool>,
    f: impl FnOnce() -> Result<bool, QueryError>,
) -> Result<bool, QueryError> {
    if let Some(&b) = cell.get() {
        return Ok(b);
    }
    let b = f()?;
    let _ = cell.set(b);
    Ok(b)
}

/// Single-super-node connectivity reconstructor; `v0 = 1`.
///
/// The base oracle must present ascending neighbor lists (as stored graphs
/// and [`OracleHandle`](crate::oracle::OracleHandle)s do): presence of
/// `(w, v0)` is read off the first entry of `w`'s list.
pub struct Connected<O> {
    oracle: O,
    cap: usize,
    ranks: RandomSource,
    leaders: Vec<OnceLock<bool>>,
    lists: Vec<OnceLock<Arc<[Vertex]>>>,
}

impl<O: NeighborOracle> Connected<O> {
    pub const SUPER_NODE: Vertex = 1;

    pub fn new(oracle: O, config: &ConnConfig) -> Result<Self, ConfigError> {
        let cap = config.bfs_cap(oracle.edge_budget())?;
        let n = oracle.vertex_count();
        Ok(Connected {
            cap,
            ranks: RandomSource::new(config.seed, Stream::Rank),
            leaders: (0..=n).map(|_| OnceLock::new()).collect(),
            lists: (0..=n).map(|_| OnceLock::new()).collect(),
            oracle,
        })
    }

    pub fn bfs_cap(&self) -> usize {
        self.cap
    }

    /// Oracle calls a leader search may spend.
    pub fn bfs_budget(&self) -> usize {
        2 * self.cap
    }

    /// Upper bound on base-oracle calls made by one query touching `v0`.
    pub fn query_budget(&self) -> usize {
        2 * self.cap + 2
    }

    pub fn base(&self) -> &O {
        &self.oracle
    }

    pub fn ranks(&self) -> &RandomSource {
        &self.ranks
    }

    /// Whether `w` has the minimal rank in its truncated BFS ball.
    pub fn is_leader(&self, w: Vertex) -> Result<bool, QueryError> {
        self.oracle.check_vertex(w)?;
        memo_bool(&self.leaders[w], || {
            is_bfs_leader(&self.oracle, &self.ranks, w, self.cap, self.bfs_budget())
        })
    }
}

impl<O: NeighborOracle> Universe for Connected<O> {
    fn vertex_count(&self) -> usize {
        self.oracle.vertex_count()
    }
    fn edge_budget(&self) -> usize {
        self.oracle.edge_budget()
    }
}

impl<O: NeighborOracle> EdgeOracle for Connected<O> {
    fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(QueryError::DegenerateQuery(u));
        }
        let v0 = Self::SUPER_NODE;
        if u != v0 && v != v0 {
            return sorted_list_contains(&self.oracle, u.min(v), u.max(v));
        }
        let w = if u == v0 { v } else { u };
        // v0 is the smallest id, so if present it heads w's list
        if self.oracle.degree(w)? > 0 && self.oracle.neighbor(w, 1)? == v0 {
            return Ok(true);
        }
        self.is_leader(w)
    }
}

/// Neighbor lists of the corrected graph: the original list, then `v0` if
/// it was added. The list of `v0` itself needs a leader test for every
/// vertex, so it costs a full scan.
impl<O: NeighborOracle> NeighborOracle for Connected<O> {
    fn degree(&self, v: Vertex) -> Result<usize, QueryError> {
        Ok(self.neighbor_list(v)?.len())
    }

    fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        crate::oracle::index_list(&self.neighbor_list(v)?, v, i)
    }

    fn neighbor_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        self.check_vertex(v)?;
        if let Some(list) = self.lists[v].get() {
            return Ok(list.clone());
        }
        let v0 = Self::SUPER_NODE;
        let base = self.oracle.neighbor_list(v)?;
        let mut added = Vec::new();
        if v == v0 {
            for w in 2..=self.vertex_count() {
                if base.binary_search(&w).is_err() && self.is_leader(w)? {
                    added.push(w);
                }
            }
        } else if base.first() != Some(&v0) && self.is_leader(v)? {
            added.push(v0);
        }
        let list: Arc<[Vertex]> = if added.is_empty() {
            base
        } else {
            base.iter().copied().chain(added).collect()
        };
        let _ = self.lists[v].set(list.clone());
        Ok(list)
    }
}

/// How the super-nodes `1..=n0` are wired together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuperNodeLinks {
    /// `(i, i + 1)` for `1 ≤ i < n0`.
    Chain,
    /// Every pair at circular distance `1..=width` on `1..=n0`.
    Ring { width: usize },
}

impl SuperNodeLinks {
    pub fn linked(&self, n0: usize, a: Vertex, b: Vertex) -> bool {
        match *self {
            SuperNodeLinks::Chain => a.abs_diff(b) == 1,
            SuperNodeLinks::Ring { width } => ring_edge(n0, width, a, b),
        }
    }

    /// Super-nodes linked to `w`, ascending.
    pub fn neighbors(&self, n0: usize, w: Vertex) -> Vec<Vertex> {
        match *self {
            SuperNodeLinks::Chain => [w.wrapping_sub(1), w + 1]
                .into_iter()
                .filter(|&x| x >= 1 && x <= n0 && x != w)
                .collect(),
            SuperNodeLinks::Ring { .. } => (1..=n0).filter(|&x| x != w && self.linked(n0, w, x)).collect(),
        }
    }

    /// Number of link edges among the super-nodes.
    pub fn edge_count(&self, n0: usize) -> usize {
        match *self {
            SuperNodeLinks::Chain => n0.saturating_sub(1),
            SuperNodeLinks::Ring { .. } => (1..=n0)
                .map(|w| self.neighbors(n0, w).len())
                .sum::<usize>()
                / 2,
        }
    }
}

/// Whether `a` and `b` are within circular distance `width` on `1..=n0`.
pub fn ring_edge(n0: usize, width: usize, a: Vertex, b: Vertex) -> bool {
    if a == b || a == 0 || b == 0 || a > n0 || b > n0 {
        return false;
    }
    let d = a.abs_diff(b);
    d.min(n0 - d) <= width
}

/// Super-node assigned to a vertex: `⌈x·c⌉` clamped into `1..=n0`.
pub fn assigned_super_node(x: Vertex, c: f64, n0: usize) -> Vertex {
    ceil_tol(x as f64 * c).clamp(1, n0)
}

/// Non-super-nodes `x` with `assigned_super_node(x) == w`, ascending.
pub fn super_node_bucket(w: Vertex, c: f64, n: usize, n0: usize) -> Vec<Vertex> {
    if w == 0 || w > n0 {
        return Vec::new();
    }
    let lo = (((w as f64 - 1.0) / c).floor() as usize).saturating_sub(1).max(n0 + 1);
    let hi = if w == n0 {
        n
    } else {
        ((w as f64 / c).ceil() as usize + 1).min(n)
    };
    (lo..=hi)
        .filter(|&x| assigned_super_node(x, c, n0) == w)
        .collect()
}

/// Multi-super-node connectivity reconstructor.
///
/// Super-nodes are `1..=n0` with `n0 = ⌈c·n⌉`; a non-super-node `x` may only
/// gain the edge to `h(x) = ⌈x·c⌉`. Implements [`EdgeOracle`] and, for the
/// corrected graph `G′`, [`NeighborOracle`]: a non-super-node's list grows by
/// at most one entry, a super-node's by at most its bucket plus its links.
/// Lists are the original list followed by the added neighbors ascending.
pub struct ModConnected<O> {
    oracle: O,
    cap: usize,
    n0: usize,
    c: f64,
    links: SuperNodeLinks,
    ranks: RandomSource,
    leaders: Vec<OnceLock<bool>>,
    lists: Vec<OnceLock<Arc<[Vertex]>>>,
}

impl<O: NeighborOracle> ModConnected<O> {
    pub fn new(oracle: O, config: &ConnConfig) -> Result<Self, ConfigError> {
        Self::with_links(oracle, config, SuperNodeLinks::Chain)
    }

    pub fn with_links(oracle: O, config: &ConnConfig, links: SuperNodeLinks) -> Result<Self, ConfigError> {
        let n = oracle.vertex_count();
        let derived = config.derive(n, oracle.edge_budget(), true)?;
        Ok(ModConnected {
            cap: derived.bfs_cap,
            n0: derived.super_nodes,
            c: config.c,
            links,
            ranks: RandomSource::new(config.seed, Stream::Rank),
            leaders: (0..=n).map(|_| OnceLock::new()).collect(),
            lists: (0..=n).map(|_| OnceLock::new()).collect(),
            oracle,
        })
    }

    pub fn base(&self) -> &O {
        &self.oracle
    }

    pub fn bfs_cap(&self) -> usize {
        self.cap
    }

    pub fn super_node_count(&self) -> usize {
        self.n0
    }

    pub fn links(&self) -> SuperNodeLinks {
        self.links
    }

    pub fn density(&self) -> f64 {
        self.c
    }

    pub fn is_super_node(&self, v: Vertex) -> bool {
        v >= 1 && v <= self.n0
    }

    pub fn assigned(&self, x: Vertex) -> Vertex {
        assigned_super_node(x, self.c, self.n0)
    }

    pub fn bucket(&self, w: Vertex) -> Vec<Vertex> {
        super_node_bucket(w, self.c, self.vertex_count(), self.n0)
    }

    pub fn is_leader(&self, x: Vertex) -> Result<bool, QueryError> {
        self.oracle.check_vertex(x)?;
        memo_bool(&self.leaders[x], || {
            is_bfs_leader(&self.oracle, &self.ranks, x, self.cap, 2 * self.cap)
        })
    }

    /// Upper bound on base-oracle calls made by one edge query.
    pub fn query_budget(&self) -> usize {
        let n = self.vertex_count();
        2 * self.cap + 2 + usize::BITS as usize - n.leading_zeros() as usize
    }

    fn build_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        let base = self.oracle.neighbor_list(v)?;
        let present: HashSet<Vertex> = base.iter().copied().collect();
        let mut added = Vec::new();
        if self.is_super_node(v) {
            for w in self.links.neighbors(self.n0, v) {
                if !present.contains(&w) {
                    added.push(w);
                }
            }
            for x in self.bucket(v) {
                if !present.contains(&x) && self.is_leader(x)? {
                    added.push(x);
                }
            }
            added.sort_unstable();
        } else {
            let w = self.assigned(v);
            if !present.contains(&w) && self.is_leader(v)? {
                added.push(w);
            }
        }
        if added.is_empty() {
            return Ok(base);
        }
        Ok(base.iter().copied().chain(added).collect())
    }
}

impl<O: NeighborOracle> Universe for ModConnected<O> {
    fn vertex_count(&self) -> usize {
        self.oracle.vertex_count()
    }
    fn edge_budget(&self) -> usize {
        self.oracle.edge_budget()
    }
}

impl<O: NeighborOracle> EdgeOracle for ModConnected<O> {
    fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(QueryError::DegenerateQuery(u));
        }
        match (self.is_super_node(u), self.is_super_node(v)) {
            (true, true) => {
                Ok(self.links.linked(self.n0, u, v) || sorted_list_contains(&self.oracle, u.min(v), u.max(v))?)
            }
            (false, false) => sorted_list_contains(&self.oracle, u.min(v), u.max(v)),
            (su, _) => {
                let (x, w) = if su { (v, u) } else { (u, v) };
                if sorted_list_contains(&self.oracle, x, w)? {
                    return Ok(true);
                }
                Ok(self.assigned(x) == w && self.is_leader(x)?)
            }
        }
    }
}

impl<O: NeighborOracle> NeighborOracle for ModConnected<O> {
    fn degree(&self, v: Vertex) -> Result<usize, QueryError> {
        Ok(self.neighbor_list(v)?.len())
    }

    fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        crate::oracle::index_list(&self.neighbor_list(v)?, v, i)
    }

    fn neighbor_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        self.check_vertex(v)?;
        if let Some(list) = self.lists[v].get() {
            return Ok(list.clone());
        }
        let list = self.build_list(v)?;
        let _ = self.lists[v].set(list.clone());
        Ok(list)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::connected_components;
    use crate::graph::SparseGraph;
    use crate::oracle::{materialize_edges, materialize_neighbors, OracleHandle};

    fn cfg(seed: u64) -> ConnConfig {
        ConnConfig::new(0.25, 1.0, 0.5, 0.3, seed)
    }

    #[test]
    fn bfs_cap_formula() {
        // δαεm = 0.2 · 1 · 0.05 · 2000 = 20
        let c = ConnConfig::new(0.05, 1.0, 0.2, 0.1, 0);
        assert_eq!(c.bfs_cap(2000).unwrap(), 106);
        assert!(ConnConfig::new(0.01, 1.0, 0.1, 0.1, 0).bfs_cap(100).is_err());
        assert!(ConnConfig::new(0.05, 1.0, 1.5, 0.1, 0).bfs_cap(2000).is_err());
    }

    #[test]
    fn tolerant_ceiling() {
        assert_eq!(ceil_tol(30.0 * 0.1), 3);
        assert_eq!(ceil_tol(3.2), 4);
        assert_eq!(ceil_tol(0.1 * 400.0), 40);
    }

    #[test]
    fn bfs_truncates_mid_layer() {
        // star centred at 1 with leaves 2..=9
        let g = SparseGraph::undirected(9, 9, (2..=9).map(|v| (1, v))).unwrap();
        let u = truncated_bfs(&g, 1, 4, usize::MAX, |_| false).unwrap();
        assert_eq!(u, vec![1, 2, 3, 4]);
        let u = truncated_bfs(&g, 5, 3, usize::MAX, |_| false).unwrap();
        assert_eq!(u, vec![5, 1, 2]);
    }

    #[test]
    fn existing_edges_kept_and_symmetric() {
        let g = SparseGraph::undirected(6, 16, [(1, 2), (2, 3), (4, 5), (5, 6)]).unwrap();
        let h = OracleHandle::new(&g);
        let r = Connected::new(&h, &cfg(3)).unwrap();
        for (u, v) in g.edges() {
            assert!(r.has_edge(u, v).unwrap());
        }
        for u in 1..=6 {
            for v in 1..=6 {
                if u != v {
                    assert_eq!(r.has_edge(u, v).unwrap(), r.has_edge(v, u).unwrap());
                }
            }
        }
        assert!(matches!(r.has_edge(2, 2), Err(QueryError::DegenerateQuery(2))));
    }

    #[test]
    fn two_triangles_leader() {
        let g = SparseGraph::undirected(6, 16, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        for seed in 0..20 {
            let r = Connected::new(&g, &cfg(seed)).unwrap();
            assert!(r.bfs_cap() >= 3);
            let ranks = RandomSource::new(seed, Stream::Rank);
            let w = (4..=6).min_by_key(|&v| ranks.rank(v)).unwrap();
            for x in 4..=6 {
                assert_eq!(r.has_edge(x, 1).unwrap(), x == w, "seed {seed}");
            }
        }
    }

    #[test]
    fn connected_for_every_seed() {
        let g = SparseGraph::undirected(12, 40, [(2, 3), (3, 4), (5, 6), (8, 9), (9, 10), (10, 11)]).unwrap();
        for seed in 0..30 {
            let r = Connected::new(&g, &cfg(seed)).unwrap();
            let t = materialize_edges(&r).unwrap();
            assert!(connected_components(&t).unwrap().is_connected());
        }
    }

    #[test]
    fn connected_neighbor_lists_match_edges() {
        let g = SparseGraph::undirected(30, 60, (2..30).filter(|i| i % 4 != 0).map(|i| (i, i + 1))).unwrap();
        for seed in 0..5 {
            let r = Connected::new(&g, &cfg(seed)).unwrap();
            assert_eq!(materialize_neighbors(&r).unwrap(), materialize_edges(&r).unwrap());
        }
    }

    #[test]
    fn super_node_buckets() {
        let (n, c) = (100, 0.1);
        let n0 = ceil_tol(c * n as f64);
        assert_eq!(n0, 10);
        let mut seen = vec![0; n + 1];
        for w in 1..=n0 {
            let b = super_node_bucket(w, c, n, n0);
            assert!(b.len() <= 10);
            for x in b {
                assert_eq!(assigned_super_node(x, c, n0), w);
                seen[x] += 1;
            }
        }
        assert!((n0 + 1..=n).all(|x| seen[x] == 1));
    }

    #[test]
    fn ring_distance() {
        assert!(ring_edge(7, 2, 1, 3));
        assert!(!ring_edge(7, 2, 1, 4));
        assert!(ring_edge(7, 2, 1, 6));
        assert_eq!(SuperNodeLinks::Chain.edge_count(5), 4);
        assert_eq!(SuperNodeLinks::Ring { width: 2 }.edge_count(5), 10);
        assert_eq!(SuperNodeLinks::Ring { width: 2 }.edge_count(9), 18);
    }

    #[test]
    fn mod_connected_chain_and_exclusive_targets() {
        let g = SparseGraph::empty(30, 60, false);
        let r = ModConnected::new(&g, &ConnConfig::new(0.25, 1.0, 0.5, 0.2, 9)).unwrap();
        let n0 = r.super_node_count();
        assert_eq!(n0, 6);
        for i in 1..n0 {
            assert!(r.has_edge(i, i + 1).unwrap());
        }
        for x in n0 + 1..=30 {
            // isolated vertices are always leaders of their own ball
            for w in 1..=n0 {
                assert_eq!(r.has_edge(x, w).unwrap(), w == r.assigned(x));
            }
        }
        let t = materialize_edges(&r).unwrap();
        assert!(connected_components(&t).unwrap().is_connected());
        assert_eq!(materialize_neighbors(&r).unwrap(), t);
    }

    #[test]
    fn neighbor_oracle_degree_growth() {
        let g = SparseGraph::undirected(40, 80, (1..40).filter(|i| i % 5 != 0).map(|i| (i, i + 1))).unwrap();
        for seed in 0..10 {
            let r = ModConnected::new(&g, &ConnConfig::new(0.25, 1.0, 0.5, 0.15, seed)).unwrap();
            let slack = (1.0 / 0.15f64).ceil() as usize + 2;
            for v in 1..=40 {
                let d = r.degree(v).unwrap();
                if r.is_super_node(v) {
                    assert!(d <= g.degree(v) + slack);
                } else {
                    assert!(d == g.degree(v) || d == g.degree(v) + 1);
                }
                let list = r.neighbor_list(v).unwrap();
                assert_eq!(&list[..g.degree(v)], g.neighbors(v));
            }
            assert_eq!(materialize_neighbors(&r).unwrap(), materialize_edges(&r).unwrap());
        }
    }
}
