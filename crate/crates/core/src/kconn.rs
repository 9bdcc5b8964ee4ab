//! Local reconstruction of k-edge-connectivity.
//!
//! Level 1 is [`ModConnected`] whose super-nodes `1..=n0` form a ring of
//! width `⌈k/2⌉`. Level `j ≥ 2` reads level `j − 1` through its neighbor
//! oracle and gives each small `(j−1)`-extreme set one more edge towards the
//! super-nodes: a vertex `v` searches for such a set around itself, and if
//! it has the lowest rank in the set found it links to the first super-node
//! of `h(v)` it is not yet adjacent to. Vertices whose searches never
//! succeed link with a small fixed probability instead, which covers extreme
//! sets too large to search.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::sync::{Arc, OnceLock};

use crate::connect::{assigned_super_node, ceil_tol, ring_edge, super_node_bucket, ConnConfig, ModConnected, SuperNodeLinks};
use crate::error::{ConfigError, QueryError, ReconError};
use crate::graph::{SparseGraph, Vertex};
use crate::oracle::{index_list, EdgeOracle, NeighborOracle, Universe};
use crate::random::{RandomSource, Stream};

/// Default largest set whose extremeness is checked by enumeration.
pub const DEFAULT_VERIFY_LIMIT: usize = 16;

/// A corrected graph answering both kinds of query.
pub trait LevelOracle: NeighborOracle + EdgeOracle {}

impl<T: NeighborOracle + EdgeOracle + ?Sized> LevelOracle for T {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KConnConfig {
    pub eps: f64,
    pub alpha: f64,
    pub delta: f64,
    /// Failure probability spent on the random rule, per level.
    pub gamma: f64,
    /// Super-node density.
    pub c: f64,
    pub k: usize,
    pub seed: u64,
    /// Largest search size `t` accepted (extremeness checks cost `2^t`).
    pub verify_limit: usize,
}

/// Quantities derived from a [`KConnConfig`] for a given `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KConnParams {
    pub k: usize,
    pub n: usize,
    pub c: f64,
    /// `C = 1 / ln(1/(1−γ))`.
    pub big_c: f64,
    /// Search size bound `t = ⌈ln(Cn) / (δαε)⌉`.
    pub t: usize,
    pub super_nodes: usize,
    pub ring_width: usize,
    /// Searches per vertex and level, `⌈t²·ln(Cn)⌉`.
    pub iterations: usize,
    /// Rank value below which the random rule fires, `ln(Cn/t)/t`.
    pub random_threshold: f64,
    pub seed: u64,
}

impl KConnConfig {
    pub fn new(eps: f64, alpha: f64, delta: f64, gamma: f64, c: f64, k: usize, seed: u64) -> Self {
        KConnConfig {
            eps,
            alpha,
            delta,
            gamma,
            c,
            k,
            seed,
            verify_limit: DEFAULT_VERIFY_LIMIT,
        }
    }

    /// Settings for the level-1 connectivity layer.
    pub fn level_one(&self) -> ConnConfig {
        ConnConfig::new(self.eps, self.alpha, self.delta, self.c, self.seed)
    }

    pub fn derive(&self, n: usize) -> Result<KConnParams, ConfigError> {
        if self.k == 0 {
            return Err(ConfigError::invalid("k", self.k as f64, "must be at least 1"));
        }
        for (name, x) in [("eps", self.eps), ("alpha", self.alpha)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(ConfigError::invalid(name, x, "must be positive"));
            }
        }
        for (name, x) in [("delta", self.delta), ("gamma", self.gamma)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(ConfigError::invalid(name, x, "must lie in (0, 1)"));
            }
        }
        if !(self.c < 1.0 && self.c * n as f64 >= self.k as f64 - 1e-9) {
            return Err(ConfigError::invalid("c", self.c, "must lie in [k/n, 1)"));
        }
        let n0 = ceil_tol(self.c * n as f64).clamp(1, n);
        let s = self.k.div_ceil(2);
        if n0 < 2 * s + 1 || n0 < self.k {
            return Err(ConfigError::Constraint(format!(
                "{n0} super-nodes cannot carry a ring of width {s} (need at least {})",
                (2 * s + 1).max(self.k)
            )));
        }
        let big_c = 1.0 / (1.0 / (1.0 - self.gamma)).ln();
        let log_cn = (big_c * n as f64).ln();
        let t = ceil_tol(log_cn / (self.delta * self.alpha * self.eps));
        if t < 2 {
            return Err(ConfigError::Constraint(format!("search size t = {t} must be at least 2")));
        }
        if t > self.verify_limit {
            return Err(ConfigError::Constraint(format!(
                "search size t = {t} exceeds the verification limit {}; raise alpha or the limit",
                self.verify_limit
            )));
        }
        Ok(KConnParams {
            k: self.k,
            n,
            c: self.c,
            big_c,
            t,
            super_nodes: n0,
            ring_width: s,
            iterations: ceil_tol(t as f64 * t as f64 * log_cn).max(1),
            random_threshold: (big_c * n as f64 / t as f64).ln() / t as f64,
            seed: self.seed,
        })
    }
}

/// `h(v) = {b, …, b+k−1}` wrapped into `1..=n0`, with `b = ⌈v·c⌉`.
pub fn hash_supernodes(v: Vertex, c: f64, k: usize, n0: usize) -> Result<Vec<Vertex>, ConfigError> {
    if n0 < k {
        return Err(ConfigError::Constraint(format!("{n0} super-nodes cannot hold {k} hash targets")));
    }
    let b = assigned_super_node(v, c, n0);
    Ok((0..k).map(|i| (b - 1 + i) % n0 + 1).collect())
}

/// Non-super-nodes `v` with `w ∈ h(v)`, ascending.
pub fn hash_bucket(w: Vertex, c: f64, k: usize, n: usize, n0: usize) -> Vec<Vertex> {
    if w == 0 || w > n0 {
        return Vec::new();
    }
    let mut out: Vec<Vertex> = (0..k.min(n0))
        .flat_map(|i| super_node_bucket((w - 1 + n0 - i) % n0 + 1, c, n, n0))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Outcome of one extreme-set search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub success: bool,
    /// Grown set in insertion order.
    pub set: Vec<Vertex>,
    /// Number of edges leaving `set`.
    pub boundary: usize,
}

/// One randomized search from `v` for a `(j−1)`-extreme set of at most `t`
/// vertices in the graph `oracle` describes.
///
/// Grows `U` from `{v}` by the lightest edge leaving it, ignoring endpoints
/// of degree `≥ t + j`, and stops once `|U| = t` or `deg(U) < j`. Succeeds
/// iff `deg(U) = j − 1` and `U` is `(j−1)`-extreme. Edge weights come from
/// `weights` keyed by `iter`.
pub fn extreme_set_search_once<O: NeighborOracle + ?Sized>(
    oracle: &O,
    j: usize,
    t: usize,
    weights: &RandomSource,
    v: Vertex,
    iter: u64,
) -> Result<SearchOutcome, QueryError> {
    assert!(j >= 1, "search level must be positive");
    let mut set = vec![v];
    let mut inside = HashSet::from([v]);
    let first = oracle.neighbor_list(v)?;
    let mut boundary = first.len() as i64;
    let fail = |set: Vec<Vertex>, boundary: i64| SearchOutcome {
        success: false,
        set,
        boundary: boundary as usize,
    };
    if first.len() + 1 >= t + j {
        return Ok(fail(set, boundary));
    }
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<_>, x: Vertex, list: &[Vertex]| -> Result<(), QueryError> {
        for &y in list {
            if oracle.degree(y)? < t + j {
                let (a, b) = (x.min(y), x.max(y));
                heap.push(Reverse((weights.word(&[iter, a as u64, b as u64]), a, b, y)));
            }
        }
        Ok(())
    };
    push(&mut heap, v, &first)?;
    while set.len() < t && boundary >= j as i64 {
        let Some(y) = std::iter::from_fn(|| heap.pop())
            .map(|Reverse((_, _, _, y))| y)
            .find(|y| !inside.contains(y))
        else {
            break;
        };
        let list = oracle.neighbor_list(y)?;
        for z in list.iter() {
            if inside.contains(z) {
                boundary -= 1;
            } else {
                boundary += 1;
            }
        }
        inside.insert(y);
        set.push(y);
        let outward: Vec<Vertex> = list.iter().copied().filter(|z| !inside.contains(z)).collect();
        push(&mut heap, y, &outward)?;
    }
    if boundary != j as i64 - 1 || !is_extreme(oracle, &set, j - 1)? {
        return Ok(fail(set, boundary));
    }
    Ok(SearchOutcome {
        success: true,
        set,
        boundary: boundary as usize,
    })
}

/// Whether `set` is `ell`-extreme: `deg(set) = ell` and every nonempty
/// proper subset has a larger boundary. Checks all `2^|set|` subsets.
pub fn verify_extreme<O: NeighborOracle + ?Sized>(
    oracle: &O,
    set: &[Vertex],
    ell: usize,
    limit: usize,
) -> Result<bool, ReconError> {
    if set.len() > limit {
        return Err(ReconError::SetTooLarge {
            size: set.len(),
            limit,
        });
    }
    Ok(is_extreme(oracle, set, ell)?)
}

fn is_extreme<O: NeighborOracle + ?Sized>(oracle: &O, set: &[Vertex], ell: usize) -> Result<bool, QueryError> {
    let t = set.len();
    if t == 0 || t >= 63 {
        return Ok(false);
    }
    let mut internal = vec![0u64; t];
    let mut external = vec![0i64; t];
    for (i, &x) in set.iter().enumerate() {
        for y in oracle.neighbor_list(x)?.iter() {
            match set.iter().position(|z| z == y) {
                Some(p) => internal[i] |= 1 << p,
                None => external[i] += 1,
            }
        }
    }
    let full = (1u64 << t) - 1;
    let mut deg = vec![0i64; 1 << t];
    for w in 1..=full {
        let i = w.trailing_zeros() as usize;
        let rest = w & (w - 1);
        deg[w as usize] = deg[rest as usize] + external[i] + (internal[i] & !w).count_ones() as i64
            - (internal[i] & rest).count_ones() as i64;
    }
    if deg[full as usize] != ell as i64 {
        return Ok(false);
    }
    Ok((1..full).all(|w| deg[w as usize] > ell as i64))
}

/// Level `j ≥ 2` of the k-connectivity reconstructor, built on level `j − 1`.
pub struct UpgradeLevel<P> {
    prev: P,
    j: usize,
    params: KConnParams,
    ranks: RandomSource,
    weights: RandomSource,
    decisions: Vec<OnceLock<Option<Vertex>>>,
    lists: Vec<OnceLock<Arc<[Vertex]>>>,
}

impl<P: LevelOracle> UpgradeLevel<P> {
    pub fn new(prev: P, j: usize, params: KConnParams) -> Self {
        assert!(j >= 2, "upgrade levels start at 2");
        let n = params.n;
        assert_eq!(prev.vertex_count(), n, "level sizes differ");
        UpgradeLevel {
            prev,
            j,
            ranks: RandomSource::at_level(params.seed, Stream::Rank, j as u32),
            weights: RandomSource::at_level(params.seed, Stream::EdgeWeight, j as u32),
            params,
            decisions: (0..=n).map(|_| OnceLock::new()).collect(),
            lists: (0..=n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn level(&self) -> usize {
        self.j
    }

    pub fn previous(&self) -> &P {
        &self.prev
    }

    pub fn params(&self) -> &KConnParams {
        &self.params
    }

    pub fn weights(&self) -> &RandomSource {
        &self.weights
    }

    pub fn is_super_node(&self, v: Vertex) -> bool {
        v >= 1 && v <= self.params.super_nodes
    }

    fn hash(&self, v: Vertex) -> Vec<Vertex> {
        let p = &self.params;
        hash_supernodes(v, p.c, p.k, p.super_nodes).expect("validated super-node count")
    }

    /// Super-node a non-super-node `v` links to at this level, if any.
    pub fn target(&self, v: Vertex) -> Result<Option<Vertex>, QueryError> {
        self.check_vertex(v)?;
        if self.is_super_node(v) {
            return Ok(None);
        }
        if let Some(&d) = self.decisions[v].get() {
            return Ok(d);
        }
        let d = self.decide(v)?;
        let _ = self.decisions[v].set(d);
        Ok(d)
    }

    fn decide(&self, v: Vertex) -> Result<Option<Vertex>, QueryError> {
        let near = self.prev.neighbor_list(v)?;
        let mut free: Vec<Vertex> = self.hash(v).into_iter().filter(|w| !near.contains(w)).collect();
        free.sort_unstable();
        let Some(&target) = free.first() else {
            return Ok(None);
        };
        let own = self.ranks.rank(v);
        for iter in 0..self.params.iterations as u64 {
            let out = extreme_set_search_once(&self.prev, self.j, self.params.t, &self.weights, v, iter)?;
            if out.success {
                let leader = out.set.iter().all(|&y| self.ranks.rank(y) >= own);
                return Ok(leader.then_some(target));
            }
        }
        Ok((own.value < self.params.random_threshold).then_some(target))
    }

    fn build_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        let base = self.prev.neighbor_list(v)?;
        let mut added = Vec::new();
        if self.is_super_node(v) {
            let p = &self.params;
            for x in hash_bucket(v, p.c, p.k, p.n, p.super_nodes) {
                if self.target(x)? == Some(v) && !base.contains(&x) {
                    added.push(x);
                }
            }
        } else if let Some(w) = self.target(v)? {
            added.push(w);
        }
        if added.is_empty() {
            return Ok(base);
        }
        Ok(base.iter().copied().chain(added).collect())
    }
}

impl<P: LevelOracle> Universe for UpgradeLevel<P> {
    fn vertex_count(&self) -> usize {
        self.prev.vertex_count()
    }
    fn edge_budget(&self) -> usize {
        self.prev.edge_budget()
    }
}

impl<P: LevelOracle> EdgeOracle for UpgradeLevel<P> {
    fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(QueryError::DegenerateQuery(u));
        }
        if self.prev.has_edge(u, v)? {
            return Ok(true);
        }
        match (self.is_super_node(u), self.is_super_node(v)) {
            (true, true) => Ok(ring_edge(self.params.super_nodes, self.params.ring_width, u, v)),
            (false, false) => Ok(false),
            (true, false) => Ok(self.target(v)? == Some(u)),
            (false, true) => Ok(self.target(u)? == Some(v)),
        }
    }
}

impl<P: LevelOracle> NeighborOracle for UpgradeLevel<P> {
    fn degree(&self, v: Vertex) -> Result<usize, QueryError> {
        Ok(self.neighbor_list(v)?.len())
    }

    fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        index_list(&self.neighbor_list(v)?, v, i)
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

/// The full stack of levels `1..=k` over a base neighbor oracle.
pub struct KConnected<'a> {
    top: Box<dyn LevelOracle + 'a>,
    params: KConnParams,
}

impl<'a> KConnected<'a> {
    pub fn new<O: NeighborOracle + 'a>(oracle: O, config: &KConnConfig) -> Result<Self, ConfigError> {
        let params = config.derive(oracle.vertex_count())?;
        let first = ModConnected::with_links(
            oracle,
            &config.level_one(),
            SuperNodeLinks::Ring {
                width: params.ring_width,
            },
        )?;
        let mut top: Box<dyn LevelOracle + 'a> = Box::new(first);
        for j in 2..=config.k {
            top = Box::new(UpgradeLevel::new(top, j, params));
        }
        Ok(KConnected { top, params })
    }

    pub fn params(&self) -> &KConnParams {
        &self.params
    }

    /// The corrected graph of the top level.
    pub fn top(&self) -> &(dyn LevelOracle + 'a) {
        &*self.top
    }
}

impl Universe for KConnected<'_> {
    fn vertex_count(&self) -> usize {
        self.top.vertex_count()
    }
    fn edge_budget(&self) -> usize {
        self.top.edge_budget()
    }
}

impl EdgeOracle for KConnected<'_> {
    fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError> {
        self.top.has_edge(u, v)
    }
}

impl NeighborOracle for KConnected<'_> {
    fn degree(&self, v: Vertex) -> Result<usize, QueryError> {
        self.top.degree(v)
    }
    fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        self.top.neighbor(v, i)
    }
    fn neighbor_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        self.top.neighbor_list(v)
    }
}

/// Ring of width `width` on `1..=n0` as a graph.
pub fn ring_graph(n0: usize, width: usize) -> SparseGraph {
    let edges: Vec<(Vertex, Vertex)> = (1..=n0)
        .flat_map(|a| (a + 1..=n0).map(move |b| (a, b)))
        .filter(|&(a, b)| ring_edge(n0, width, a, b))
        .collect();
    SparseGraph::undirected(n0, edges.len(), edges).expect("ring edges are valid")
}
