//! Query access to graphs.
//!
//! A [`NeighborOracle`] answers `degree(v)` and `neighbor(v, i)` (1-based
//! `i`), an [`EdgeOracle`] answers "is `(u, v)` an edge". Reconstructors
//! consume the former and produce the latter; [`OracleHandle`] wraps a
//! [`SparseGraph`] and counts every call so query complexity can be
//! measured.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::QueryError;
use crate::graph::{SparseGraph, Vertex};

/// Vertex count and edge budget shared by every view of a graph.
pub trait Universe {
    fn vertex_count(&self) -> usize;
    fn edge_budget(&self) -> usize;

    fn check_vertex(&self, v: Vertex) -> Result<(), QueryError> {
        if v == 0 || v > self.vertex_count() {
            Err(QueryError::VertexOutOfRange {
                vertex: v,
                n: self.vertex_count(),
            })
        } else {
            Ok(())
        }
    }
}

/// Adjacency-list access. For directed graphs `degree`/`neighbor` refer to
/// out-neighbors.
pub trait NeighborOracle: Universe + Sync {
    fn degree(&self, v: Vertex) -> Result<usize, QueryError>;
    fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError>;

    /// The full neighbor list, in oracle order.
    fn neighbor_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        let d = self.degree(v)?;
        (1..=d).map(|i| self.neighbor(v, i)).collect()
    }
}

/// Adds in-neighbor access for digraphs.
pub trait DirectedNeighborOracle: NeighborOracle {
    fn in_degree(&self, v: Vertex) -> Result<usize, QueryError>;
    fn in_neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError>;
}

/// Adjacency-matrix access.
pub trait EdgeOracle: Universe + Sync {
    fn is_directed(&self) -> bool {
        false
    }
    fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError>;
}

macro_rules! forward_oracles {
    ($($ptr:ty),*) => {$(
        impl<T: Universe + ?Sized> Universe for $ptr {
            fn vertex_count(&self) -> usize {
                (**self).vertex_count()
            }
            fn edge_budget(&self) -> usize {
                (**self).edge_budget()
            }
        }

        impl<T: NeighborOracle + ?Sized> NeighborOracle for $ptr {
            fn degree(&self, v: Vertex) -> Result<usize, QueryError> {
                (**self).degree(v)
            }
            fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
                (**self).neighbor(v, i)
            }
            fn neighbor_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
                (**self).neighbor_list(v)
            }
        }

        impl<T: DirectedNeighborOracle + ?Sized> DirectedNeighborOracle for $ptr {
            fn in_degree(&self, v: Vertex) -> Result<usize, QueryError> {
                (**self).in_degree(v)
            }
            fn in_neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
                (**self).in_neighbor(v, i)
            }
        }

        impl<T: EdgeOracle + ?Sized> EdgeOracle for $ptr {
            fn is_directed(&self) -> bool {
                (**self).is_directed()
            }
            fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError> {
                (**self).has_edge(u, v)
            }
        }
    )*};
}

forward_oracles!(&T, Box<T>);

impl Universe for SparseGraph {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn edge_budget(&self) -> usize {
        self.m_bound()
    }
}

// Uncounted access straight to the stored lists.
impl NeighborOracle for SparseGraph {
    fn degree(&self, v: Vertex) -> Result<usize, QueryError> {
        self.check_vertex(v)?;
        Ok(self.out_neighbors(v).len())
    }

    fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        self.check_vertex(v)?;
        index_list(self.out_neighbors(v), v, i)
    }

    fn neighbor_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        self.check_vertex(v)?;
        Ok(Arc::from(self.out_neighbors(v)))
    }
}

impl DirectedNeighborOracle for SparseGraph {
    fn in_degree(&self, v: Vertex) -> Result<usize, QueryError> {
        self.check_vertex(v)?;
        Ok(self.in_neighbors(v).len())
    }

    fn in_neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        self.check_vertex(v)?;
        index_list(self.in_neighbors(v), v, i)
    }
}

impl EdgeOracle for SparseGraph {
    fn is_directed(&self) -> bool {
        SparseGraph::is_directed(self)
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(QueryError::DegenerateQuery(u));
        }
        Ok(SparseGraph::has_edge(self, u, v))
    }
}

pub(crate) fn index_list(list: &[Vertex], v: Vertex, i: usize) -> Result<Vertex, QueryError> {
    if i == 0 || i > list.len() {
        Err(QueryError::IndexOutOfRange {
            vertex: v,
            index: i,
            degree: list.len(),
        })
    } else {
        Ok(list[i - 1])
    }
}

/// Counted neighbor-oracle access to a stored graph.
///
/// The counter is atomic, so a handle may be shared between threads; the
/// only promise is that the total equals the number of calls made.
#[derive(Debug)]
pub struct OracleHandle<'g> {
    graph: &'g SparseGraph,
    queries: AtomicU64,
}

impl<'g> OracleHandle<'g> {
    pub fn new(graph: &'g SparseGraph) -> Self {
        OracleHandle {
            graph,
            queries: AtomicU64::new(0),
        }
    }

    pub fn graph(&self) -> &'g SparseGraph {
        self.graph
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    fn tick(&self) {
        self.queries.fetch_add(1, Ordering::Relaxed);
    }

    pub fn out_degree(&self, v: Vertex) -> Result<usize, QueryError> {
        self.degree(v)
    }

    pub fn out_neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        self.neighbor(v, i)
    }
}

impl Universe for OracleHandle<'_> {
    fn vertex_count(&self) -> usize {
        self.graph.n()
    }
    fn edge_budget(&self) -> usize {
        self.graph.m_bound()
    }
}

impl NeighborOracle for OracleHandle<'_> {
    fn degree(&self, v: Vertex) -> Result<usize, QueryError> {
        self.tick();
        self.check_vertex(v)?;
        Ok(self.graph.out_neighbors(v).len())
    }

    fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        self.tick();
        self.check_vertex(v)?;
        index_list(self.graph.out_neighbors(v), v, i)
    }
}

impl DirectedNeighborOracle for OracleHandle<'_> {
    fn in_degree(&self, v: Vertex) -> Result<usize, QueryError> {
        self.tick();
        self.check_vertex(v)?;
        if !self.graph.is_directed() {
            return Err(QueryError::NotDirected);
        }
        Ok(self.graph.in_neighbors(v).len())
    }

    fn in_neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        self.tick();
        self.check_vertex(v)?;
        if !self.graph.is_directed() {
            return Err(QueryError::NotDirected);
        }
        index_list(self.graph.in_neighbors(v), v, i)
    }
}

/// Edge test through a neighbor oracle by binary search over `u`'s list.
///
/// Only valid for oracles whose lists are ascending (stored graphs and
/// handles on them); costs one degree call plus `ceil(log2(deg + 1))`
/// neighbor calls.
pub fn sorted_list_contains<O: NeighborOracle + ?Sized>(
    oracle: &O,
    u: Vertex,
    target: Vertex,
) -> Result<bool, QueryError> {
    let d = oracle.degree(u)?;
    let (mut lo, mut hi) = (1usize, d);
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        let w = oracle.neighbor(u, mid)?;
        match w.cmp(&target) {
            std::cmp::Ordering::Equal => return Ok(true),
            std::cmp::Ordering::Less => lo = mid + 1,
            std::cmp::Ordering::Greater => {
                if mid == 1 {
                    break;
                }
                hi = mid - 1
            }
        }
    }
    Ok(false)
}

/// Which adjacency a [`Probe`] reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Side {
    Out,
    In,
}

/// Per-query reader with a call budget.
///
/// Repeated reads of the same degree or list entry are served from a local
/// cache and cost nothing; once `budget` real calls have been issued every
/// further read returns `None`.
pub(crate) struct Probe<'a, O: ?Sized> {
    oracle: &'a O,
    budget: usize,
    spent: usize,
    degrees: HashMap<(Side, Vertex), usize>,
    entries: HashMap<(Side, Vertex, usize), Vertex>,
}

impl<'a, O: NeighborOracle + ?Sized> Probe<'a, O> {
    pub(crate) fn new(oracle: &'a O, budget: usize) -> Self {
        Probe {
            oracle,
            budget,
            spent: 0,
            degrees: HashMap::new(),
            entries: HashMap::new(),
        }
    }

    #[cfg(test)]
    pub(crate) fn exhausted(&self) -> bool {
        self.spent >= self.budget
    }

    fn charge(&mut self) -> bool {
        if self.spent >= self.budget {
            false
        } else {
            self.spent += 1;
            true
        }
    }

    pub(crate) fn degree(&mut self, v: Vertex) -> Result<Option<usize>, QueryError> {
        self.read_degree(Side::Out, v, |o, v| o.degree(v))
    }

    pub(crate) fn neighbor(&mut self, v: Vertex, i: usize) -> Result<Option<Vertex>, QueryError> {
        self.read_entry(Side::Out, v, i, |o, v, i| o.neighbor(v, i))
    }

    fn read_degree(
        &mut self,
        side: Side,
        v: Vertex,
        f: impl FnOnce(&O, Vertex) -> Result<usize, QueryError>,
    ) -> Result<Option<usize>, QueryError> {
        if let Some(&d) = self.degrees.get(&(side, v)) {
            return Ok(Some(d));
        }
        if !self.charge() {
            return Ok(None);
        }
        let d = f(self.oracle, v)?;
        self.degrees.insert((side, v), d);
        Ok(Some(d))
    }

    fn read_entry(
        &mut self,
        side: Side,
        v: Vertex,
        i: usize,
        f: impl FnOnce(&O, Vertex, usize) -> Result<Vertex, QueryError>,
    ) -> Result<Option<Vertex>, QueryError> {
        if let Some(&w) = self.entries.get(&(side, v, i)) {
            return Ok(Some(w));
        }
        if !self.charge() {
            return Ok(None);
        }
        let w = f(self.oracle, v, i)?;
        self.entries.insert((side, v, i), w);
        Ok(Some(w))
    }
}

impl<O: DirectedNeighborOracle + ?Sized> Probe<'_, O> {
    pub(crate) fn degree_on(&mut self, side: Side, v: Vertex) -> Result<Option<usize>, QueryError> {
        match side {
            Side::Out => self.read_degree(Side::Out, v, |o, v| o.degree(v)),
            Side::In => self.read_degree(Side::In, v, |o, v| o.in_degree(v)),
        }
    }

    pub(crate) fn neighbor_on(
        &mut self,
        side: Side,
        v: Vertex,
        i: usize,
    ) -> Result<Option<Vertex>, QueryError> {
        match side {
            Side::Out => self.read_entry(Side::Out, v, i, |o, v, i| o.neighbor(v, i)),
            Side::In => self.read_entry(Side::In, v, i, |o, v, i| o.in_neighbor(v, i)),
        }
    }
}

/// Builds the graph an edge oracle describes by asking about every pair.
///
/// Quadratic; meant for verification at desk scale. The edge budget is
/// kept unless the reconstructed graph outgrows it.
pub fn materialize_edges<E: EdgeOracle + ?Sized>(oracle: &E) -> Result<SparseGraph, QueryError> {
    let n = oracle.vertex_count();
    let directed = oracle.is_directed();
    let mut edges = Vec::new();
    for u in 1..=n {
        let start = if directed { 1 } else { u + 1 };
        for v in start..=n {
            if u != v && oracle.has_edge(u, v)? {
                edges.push((u, v));
            }
        }
    }
    Ok(build_materialized(n, oracle.edge_budget(), directed, edges))
}

/// Builds the (undirected) graph a neighbor oracle describes by reading
/// every list. Fails if the lists are not symmetric.
pub fn materialize_neighbors<O: NeighborOracle + ?Sized>(
    oracle: &O,
) -> Result<SparseGraph, QueryError> {
    let n = oracle.vertex_count();
    let mut edges = Vec::new();
    for u in 1..=n {
        for &v in oracle.neighbor_list(u)?.iter() {
            oracle.check_vertex(v)?;
            if u == v {
                return Err(QueryError::DegenerateQuery(u));
            }
            if u < v {
                edges.push((u, v));
            }
        }
    }
    let g = build_materialized(n, oracle.edge_budget(), false, edges);
    debug_assert!((1..=n).all(|u| g.degree(u) == oracle.degree(u).unwrap_or(usize::MAX)));
    Ok(g)
}

/// Builds the digraph a directed neighbor oracle describes from its
/// out-lists. In-lists are only compared in debug builds.
pub fn materialize_arcs<O: DirectedNeighborOracle + ?Sized>(
    oracle: &O,
) -> Result<SparseGraph, QueryError> {
    let n = oracle.vertex_count();
    let mut arcs = Vec::new();
    for u in 1..=n {
        for &v in oracle.neighbor_list(u)?.iter() {
            oracle.check_vertex(v)?;
            if u == v {
                return Err(QueryError::DegenerateQuery(u));
            }
            arcs.push((u, v));
        }
    }
    let g = build_materialized(n, oracle.edge_budget(), true, arcs);
    debug_assert!((1..=n).all(|v| g.in_neighbors(v).len() == oracle.in_degree(v).unwrap_or(usize::MAX)));
    Ok(g)
}

fn build_materialized(
    n: usize,
    m_bound: usize,
    directed: bool,
    edges: Vec<(Vertex, Vertex)>,
) -> SparseGraph {
    let m = m_bound.max(edges.len());
    let g = if directed {
        SparseGraph::directed(n, m, edges)
    } else {
        SparseGraph::undirected(n, m, edges)
    };
    g.expect("oracle answers form a simple graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> SparseGraph {
        SparseGraph::undirected(3, 3, [(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn path_queries() {
        let g = path3();
        let h = OracleHandle::new(&g);
        assert_eq!(h.degree(2).unwrap(), 2);
        assert_eq!(h.neighbor(2, 1).unwrap(), 1);
        assert_eq!(h.neighbor(2, 2).unwrap(), 3);
        assert_eq!(h.queries(), 3);
    }

    #[test]
    fn isolated_vertex_index_errors() {
        let g = SparseGraph::undirected(3, 3, [(1, 2)]).unwrap();
        let h = OracleHandle::new(&g);
        assert_eq!(h.degree(3).unwrap(), 0);
        assert!(matches!(h.neighbor(3, 1), Err(QueryError::IndexOutOfRange { .. })));
        assert!(matches!(h.degree(4), Err(QueryError::VertexOutOfRange { .. })));
        assert!(matches!(h.degree(0), Err(QueryError::VertexOutOfRange { .. })));
        // failed calls still count
        assert_eq!(h.queries(), 4);
    }

    #[test]
    fn directed_degrees() {
        let g = SparseGraph::directed(2, 2, [(1, 2)]).unwrap();
        let h = OracleHandle::new(&g);
        assert_eq!(h.out_degree(1).unwrap(), 1);
        assert_eq!(h.in_degree(1).unwrap(), 0);
        assert_eq!(h.in_neighbor(2, 1).unwrap(), 1);
    }

    #[test]
    fn counter_resets() {
        let g = path3();
        let h = OracleHandle::new(&g);
        for v in 1..=3 {
            h.degree(v).unwrap();
        }
        assert_eq!(h.queries(), 3);
        h.reset();
        assert_eq!(h.queries(), 0);
    }

    #[test]
    fn binary_search_membership() {
        let g = SparseGraph::undirected(8, 20, (2..=8).map(|v| (1, v))).unwrap();
        for t in 1..=8 {
            assert_eq!(sorted_list_contains(&g, 1, t).unwrap(), t != 1);
        }
        assert!(!sorted_list_contains(&g, 2, 3).unwrap());
        assert!(sorted_list_contains(&g, 2, 1).unwrap());
    }

    #[test]
    fn probe_caches_and_budgets() {
        let g = path3();
        let h = OracleHandle::new(&g);
        let mut p = Probe::new(&h, 2);
        assert_eq!(p.degree(2).unwrap(), Some(2));
        assert_eq!(p.degree(2).unwrap(), Some(2));
        assert_eq!(p.neighbor(2, 1).unwrap(), Some(1));
        assert_eq!(p.neighbor(2, 2).unwrap(), None);
        assert!(p.exhausted());
        assert_eq!(h.queries(), 2);
    }

    #[test]
    fn materialize_round_trip() {
        let g = path3();
        assert_eq!(materialize_edges(&g).unwrap(), g);
        assert_eq!(materialize_neighbors(&g).unwrap(), g);
        let d = SparseGraph::directed(3, 3, [(1, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(materialize_edges(&d).unwrap(), d);
    }
}
