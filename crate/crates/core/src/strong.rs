//! Local reconstruction of strong connectivity.
//!
//! Arcs are only ever added between `v0 = 1` and another vertex. A vertex
//! `u` sends an arc to `v0` when it has minimal rank in its forward
//! neighborhood (if that is large or a small sink component) or in its
//! undirected neighborhood otherwise; receiving arcs from `v0` mirror this
//! with backward searches. Every sink component then reaches `v0` and every
//! source component is reached from it, so the answered digraph is strongly
//! connected for every seed.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use crate::connect::ceil_tol;
use crate::error::{ConfigError, QueryError};
use crate::exact::tarjan;
use crate::graph::Vertex;
use crate::oracle::{index_list, sorted_list_contains, DirectedNeighborOracle, EdgeOracle, NeighborOracle, Probe, Side, Universe};
use crate::random::{RandomSource, Stream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongConnConfig {
    pub eps: f64,
    pub alpha: f64,
    pub delta: f64,
    pub seed: u64,
}

impl StrongConnConfig {
    pub fn new(eps: f64, alpha: f64, delta: f64, seed: u64) -> Self {
        StrongConnConfig {
            eps,
            alpha,
            delta,
            seed,
        }
    }

    /// `K = ⌈m / (δαεm/2 − 1)⌉`.
    pub fn search_cap(&self, m: usize) -> Result<usize, ConfigError> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(ConfigError::invalid("eps", self.eps, "must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(ConfigError::invalid("alpha", self.alpha, "must be positive"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(ConfigError::invalid("delta", self.delta, "must lie in (0, 1)"));
        }
        let half = self.delta * self.alpha * self.eps * m as f64 / 2.0;
        if half <= 1.0 {
            return Err(ConfigError::Constraint(format!("δ·α·ε·m/2 = {half} must exceed 1")));
        }
        let k = ceil_tol(m as f64 / (half - 1.0));
        if k < 2 {
            return Err(ConfigError::Constraint(format!("search cap K = {k} must be at least 2")));
        }
        Ok(k)
    }
}

/// Result of a capped depth-first search.
struct Reach {
    /// Discovered vertices in discovery order.
    found: Vec<Vertex>,
    /// True if the cap or the call budget stopped the search.
    truncated: bool,
    /// Fully read lists of the discovered vertices (only when not truncated).
    lists: HashMap<Vertex, Vec<Vertex>>,
}

fn capped_dfs<O: DirectedNeighborOracle + ?Sized>(
    probe: &mut Probe<'_, O>,
    side: Side,
    root: Vertex,
    cap: usize,
) -> Result<Reach, QueryError> {
    let mut found = vec![root];
    let mut seen = HashSet::from([root]);
    let mut lists: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    let mut stack: Vec<(Vertex, usize, usize)> = Vec::new();
    let truncated = 'dfs: {
        if cap <= 1 {
            break 'dfs true;
        }
        let Some(d) = probe.degree_on(side, root)? else {
            break 'dfs true;
        };
        stack.push((root, d, 1));
        lists.insert(root, Vec::with_capacity(d));
        while let Some(top) = stack.last_mut() {
            let (x, d, i) = *top;
            if i > d {
                stack.pop();
                continue;
            }
            top.2 += 1;
            let Some(y) = probe.neighbor_on(side, x, i)? else {
                break 'dfs true;
            };
            lists.get_mut(&x).expect("open vertex").push(y);
            if seen.insert(y) {
                found.push(y);
                if found.len() >= cap {
                    break 'dfs true;
                }
                let Some(dy) = probe.degree_on(side, y)? else {
                    break 'dfs true;
                };
                lists.insert(y, Vec::with_capacity(dy));
                stack.push((y, dy, 1));
            }
        }
        false
    };
    if truncated {
        lists.clear();
    }
    Ok(Reach {
        found,
        truncated,
        lists,
    })
}

/// Whether the fully explored reachable set forms one strongly connected component.
fn single_component(n: usize, reach: &Reach) -> bool {
    let root = reach.found[0];
    let scope: HashSet<Vertex> = reach.found.iter().copied().collect();
    let out = |v: Vertex| reach.lists.get(&v).cloned().unwrap_or_default();
    let comp = tarjan(n, &[root], |v| scope.contains(&v), &out);
    reach.found.iter().all(|&v| comp[v] == comp[root])
}

fn undirected_bfs<O: DirectedNeighborOracle + ?Sized>(
    probe: &mut Probe<'_, O>,
    start: Vertex,
    cap: usize,
    mut stop: impl FnMut(Vertex) -> bool,
) -> Result<Vec<Vertex>, QueryError> {
    let mut found = vec![start];
    let mut seen = HashSet::from([start]);
    let mut head = 0;
    'search: while head < found.len() && found.len() < cap {
        let x = found[head];
        head += 1;
        for side in [Side::Out, Side::In] {
            let Some(d) = probe.degree_on(side, x)? else { break 'search };
            for i in 1..=d {
                if found.len() >= cap {
                    break 'search;
                }
                let Some(y) = probe.neighbor_on(side, x, i)? else {
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
    }
    Ok(found)
}

/// Strong-connectivity reconstructor over a directed neighbor oracle.
///
/// Out- and in-lists of the base oracle must be ascending.
pub struct StronglyConnected<O> {
    oracle: O,
    cap: usize,
    ranks: RandomSource,
    transmit: Vec<OnceLock<bool>>,
    receive: Vec<OnceLock<bool>>,
    out_lists: Vec<OnceLock<Arc<[Vertex]>>>,
    in_lists: Vec<OnceLock<Arc<[Vertex]>>>,
}

impl<O: DirectedNeighborOracle> StronglyConnected<O> {
    pub const SUPER_NODE: Vertex = 1;

    pub fn new(oracle: O, config: &StrongConnConfig) -> Result<Self, ConfigError> {
        let cap = config.search_cap(oracle.edge_budget())?;
        let n = oracle.vertex_count();
        Ok(StronglyConnected {
            cap,
            ranks: RandomSource::new(config.seed, Stream::Rank),
            transmit: (0..=n).map(|_| OnceLock::new()).collect(),
            receive: (0..=n).map(|_| OnceLock::new()).collect(),
            out_lists: (0..=n).map(|_| OnceLock::new()).collect(),
            in_lists: (0..=n).map(|_| OnceLock::new()).collect(),
            oracle,
        })
    }

    pub fn search_cap(&self) -> usize {
        self.cap
    }

    pub fn base(&self) -> &O {
        &self.oracle
    }

    fn dfs_budget(&self) -> usize {
        2 * self.cap
    }

    fn bfs_budget(&self) -> usize {
        3 * self.cap
    }

    /// Upper bound on base-oracle calls made by one arc query.
    pub fn query_budget(&self) -> usize {
        let n = self.vertex_count();
        self.dfs_budget() + self.bfs_budget() + 2 + (usize::BITS - n.leading_zeros()) as usize
    }

    fn reach(&self, side: Side, v: Vertex) -> Result<Reach, QueryError> {
        let mut probe = Probe::new(&self.oracle, self.dfs_budget());
        capped_dfs(&mut probe, side, v, self.cap)
    }

    /// True iff the forward search from `v` stays below the cap and the
    /// reachable set is one strongly connected component.
    pub fn in_small_sink(&self, v: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(v)?;
        let r = self.reach(Side::Out, v)?;
        Ok(!r.truncated && single_component(self.vertex_count(), &r))
    }

    /// Mirror of [`in_small_sink`](Self::in_small_sink) along in-arcs.
    pub fn in_small_source(&self, v: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(v)?;
        let r = self.reach(Side::In, v)?;
        Ok(!r.truncated && single_component(self.vertex_count(), &r))
    }

    fn leader(&self, side: Side, u: Vertex) -> Result<bool, QueryError> {
        let own = self.ranks.rank(u);
        let r = self.reach(side, u)?;
        if r.truncated || single_component(self.vertex_count(), &r) {
            return Ok(r.found.iter().all(|&y| self.ranks.rank(y) >= own));
        }
        let mut probe = Probe::new(&self.oracle, self.bfs_budget());
        let mut beaten = false;
        undirected_bfs(&mut probe, u, self.cap, |y| {
            beaten = self.ranks.rank(y) < own;
            beaten
        })?;
        Ok(!beaten)
    }

    /// Whether the arc `u → v0` is added.
    pub fn transmits(&self, u: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(u)?;
        memo(&self.transmit[u], || self.leader(Side::Out, u))
    }

    /// Whether the arc `v0 → v` is added.
    pub fn receives(&self, v: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(v)?;
        memo(&self.receive[v], || self.leader(Side::In, v))
    }

    /// Corrected list on one side: the original list, then `v0` if added.
    /// For `v0` itself every vertex is tested, so this costs a full scan.
    fn corrected_list(&self, side: Side, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        self.check_vertex(v)?;
        let cell = match side {
            Side::Out => &self.out_lists[v],
            Side::In => &self.in_lists[v],
        };
        if let Some(list) = cell.get() {
            return Ok(list.clone());
        }
        let base: Arc<[Vertex]> = match side {
            Side::Out => self.oracle.neighbor_list(v)?,
            Side::In => (1..=self.oracle.in_degree(v)?)
                .map(|i| self.oracle.in_neighbor(v, i))
                .collect::<Result<_, _>>()?,
        };
        let v0 = Self::SUPER_NODE;
        // out-arc v → v0 is a transmission, in-arc v0 → v a reception
        let added_to_v0 = |w| match side {
            Side::Out => self.transmits(w),
            Side::In => self.receives(w),
        };
        let added_from_v0 = |w| match side {
            Side::Out => self.receives(w),
            Side::In => self.transmits(w),
        };
        let mut added = Vec::new();
        if v == v0 {
            for w in 2..=self.vertex_count() {
                if base.binary_search(&w).is_err() && added_from_v0(w)? {
                    added.push(w);
                }
            }
        } else if base.first() != Some(&v0) && added_to_v0(v)? {
            added.push(v0);
        }
        let list: Arc<[Vertex]> = if added.is_empty() {
            base
        } else {
            base.iter().copied().chain(added).collect()
        };
        let _ = cell.set(list.clone());
        Ok(list)
    }
}

impl<O: DirectedNeighborOracle> NeighborOracle for StronglyConnected<O> {
    fn degree(&self, v: Vertex) -> Result<usize, QueryError> {
        Ok(self.corrected_list(Side::Out, v)?.len())
    }
    fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        index_list(&self.corrected_list(Side::Out, v)?, v, i)
    }
    fn neighbor_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        self.corrected_list(Side::Out, v)
    }
}

impl<O: DirectedNeighborOracle> DirectedNeighborOracle for StronglyConnected<O> {
    fn in_degree(&self, v: Vertex) -> Result<usize, QueryError> {
        Ok(self.corrected_list(Side::In, v)?.len())
    }
    fn in_neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        index_list(&self.corrected_list(Side::In, v)?, v, i)
    }
}

fn memo(cell: &OnceLock<bool>, f: impl FnOnce() -> Result<bool, QueryError>) -> Result<bool, QueryError> {
    if let Some(&b) = cell.get() {
        return Ok(b);
    }
    let b = f()?;
    let _ = cell.set(b);
    Ok(b)
}

impl<O: DirectedNeighborOracle> Universe for StronglyConnected<O> {
    fn vertex_count(&self) -> usize {
        self.oracle.vertex_count()
    }
    fn edge_budget(&self) -> usize {
        self.oracle.edge_budget()
    }
}

impl<O: DirectedNeighborOracle> EdgeOracle for StronglyConnected<O> {
    fn is_directed(&self) -> bool {
        true
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(QueryError::DegenerateQuery(u));
        }
        let v0 = Self::SUPER_NODE;
        if v == v0 {
            if self.oracle.degree(u)? > 0 && self.oracle.neighbor(u, 1)? == v0 {
                return Ok(true);
            }
            self.transmits(u)
        } else if u == v0 {
            if self.oracle.in_degree(v)? > 0 && self.oracle.in_neighbor(v, 1)? == v0 {
                return Ok(true);
            }
            self.receives(v)
        } else {
            sorted_list_contains(&self.oracle, u, v)
        }
    }
}
