//! Local reconstruction of bounded diameter.
//!
//! The input is first corrected for connectivity ([`ModConnected`], called
//! `G′` here). Vertices of degree above `τ = d̄/ε` are high-degree; every
//! other vertex whose radius-`K` ball in `G′` avoids them is clean. The
//! clean vertices run a simulated Luby MIS on the graph `H` joining clean
//! vertices at `G′`-distance at most `K`. High-degree vertices and MIS
//! members get an edge to `v0 = 1`, so every vertex ends within `K + 1` of
//! `v0` and the diameter is at most `2K + 2`.

use std::collections::{HashSet, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use crate::connect::{ceil_tol, ConnConfig, ModConnected};
use crate::error::{ConfigError, QueryError};
use crate::graph::Vertex;
use crate::oracle::{index_list, EdgeOracle, NeighborOracle, Universe};
use crate::random::{RandomSource, Rank, Stream};

pub const DEFAULT_MIS_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamConfig {
    pub eps: f64,
    pub alpha: f64,
    pub delta: f64,
    /// Super-node density of the connectivity layer.
    pub c: f64,
    /// Target diameter `D`.
    pub diameter: usize,
    pub seed: u64,
    /// MIS rounds are `⌈mis_factor · log₂(Δ_H + 2)²⌉`.
    pub mis_factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamParams {
    /// Ball radius `K = min(⌈2n/(εm)⌉, D)`.
    pub radius: usize,
    /// `d̄ = 2m/n`.
    pub avg_degree: f64,
    /// High-degree threshold `τ = d̄/ε`.
    pub threshold: f64,
    /// Degree bound of `H`, `τ^K`.
    pub h_degree: f64,
    pub rounds: u32,
}

impl DiamConfig {
    pub fn new(eps: f64, alpha: f64, delta: f64, c: f64, diameter: usize, seed: u64) -> Self {
        DiamConfig {
            eps,
            alpha,
            delta,
            c,
            diameter,
            seed,
            mis_factor: DEFAULT_MIS_FACTOR,
        }
    }

    pub fn connectivity(&self) -> ConnConfig {
        ConnConfig::new(self.eps, self.alpha, self.delta, self.c, self.seed)
    }

    pub fn derive(&self, n: usize, m: usize) -> Result<DiamParams, ConfigError> {
        if self.diameter == 0 {
            return Err(ConfigError::invalid("diameter", 0.0, "must be at least 1"));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(ConfigError::invalid("eps", self.eps, "must lie in (0, 1]"));
        }
        if !(self.mis_factor > 0.0 && self.mis_factor.is_finite()) {
            return Err(ConfigError::invalid("mis_factor", self.mis_factor, "must be positive"));
        }
        if n == 0 || m == 0 {
            return Err(ConfigError::Constraint("empty graph or edge budget".into()));
        }
        let radius = ceil_tol(2.0 * n as f64 / (self.eps * m as f64)).clamp(1, self.diameter);
        let avg_degree = 2.0 * m as f64 / n as f64;
        let threshold = avg_degree / self.eps;
        let h_degree = threshold.powi(radius as i32);
        let rounds = (self.mis_factor * (h_degree + 2.0).log2().powi(2)).ceil() as u32;
        Ok(DiamParams {
            radius,
            avg_degree,
            threshold,
            h_degree,
            rounds: rounds.max(1),
        })
    }
}

/// Luby status of one vertex: undecided at the start of every round up to
/// `through`, or decided in round `.0` (joined if `.1`).
#[derive(Debug, Clone, Copy, Default)]
struct MisState {
    through: u32,
    decided: Option<(u32, bool)>,
}

impl MisState {
    fn undecided_at(&self, r: u32) -> Option<bool> {
        match self.decided {
            Some((d, _)) => Some(r <= d),
            None if r <= self.through => Some(true),
            None => None,
        }
    }
}

/// Bounded-diameter reconstructor.
pub struct SmallDiam<O> {
    gprime: ModConnected<O>,
    params: DiamParams,
    coins: RandomSource,
    balls: Vec<OnceLock<Option<Arc<[Vertex]>>>>,
    h_lists: Vec<OnceLock<Arc<[Vertex]>>>,
    mis: Vec<Mutex<MisState>>,
    lists: Vec<OnceLock<Arc<[Vertex]>>>,
}

impl<O: NeighborOracle> SmallDiam<O> {
    pub const SUPER_NODE: Vertex = 1;

    pub fn new(oracle: O, config: &DiamConfig) -> Result<Self, ConfigError> {
        let n = oracle.vertex_count();
        let params = config.derive(n, oracle.edge_budget())?;
        let gprime = ModConnected::new(oracle, &config.connectivity())?;
        let fresh = MisState {
            through: 1,
            decided: None,
        };
        Ok(SmallDiam {
            gprime,
            params,
            coins: RandomSource::new(config.seed, Stream::MisCoin),
            balls: (0..=n).map(|_| OnceLock::new()).collect(),
            h_lists: (0..=n).map(|_| OnceLock::new()).collect(),
            mis: (0..=n).map(|_| Mutex::new(fresh)).collect(),
            lists: (0..=n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn params(&self) -> &DiamParams {
        &self.params
    }

    /// The connectivity-corrected graph `G′`.
    pub fn g_prime(&self) -> &ModConnected<O> {
        &self.gprime
    }

    pub fn is_high_degree(&self, v: Vertex) -> Result<bool, QueryError> {
        Ok(v == Self::SUPER_NODE || self.gprime.degree(v)? as f64 > self.params.threshold)
    }

    /// Radius-`K` ball of `v` in `G′`, or `None` if it contains a
    /// high-degree vertex (including `v` itself).
    pub fn low_ball(&self, v: Vertex) -> Result<Option<Arc<[Vertex]>>, QueryError> {
        self.check_vertex(v)?;
        if let Some(b) = self.balls[v].get() {
            return Ok(b.clone());
        }
        let ball = self.explore(v)?;
        let _ = self.balls[v].set(ball.clone());
        Ok(ball)
    }

    fn explore(&self, v: Vertex) -> Result<Option<Arc<[Vertex]>>, QueryError> {
        if self.is_high_degree(v)? {
            return Ok(None);
        }
        let mut found = vec![v];
        let mut seen = HashSet::from([v]);
        let mut queue = VecDeque::from([(v, 0usize)]);
        while let Some((x, d)) = queue.pop_front() {
            if d == self.params.radius {
                continue;
            }
            for &y in self.gprime.neighbor_list(x)?.iter() {
                if seen.insert(y) {
                    if self.is_high_degree(y)? {
                        return Ok(None);
                    }
                    found.push(y);
                    queue.push_back((y, d + 1));
                }
            }
        }
        found.sort_unstable();
        Ok(Some(found.into()))
    }

    pub fn is_clean(&self, v: Vertex) -> Result<bool, QueryError> {
        Ok(self.low_ball(v)?.is_some())
    }

    /// Neighbors of a clean vertex in `H`: the other clean vertices of its ball.
    pub fn h_neighbors(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        self.check_vertex(v)?;
        if let Some(l) = self.h_lists[v].get() {
            return Ok(l.clone());
        }
        let list: Arc<[Vertex]> = match self.low_ball(v)? {
            None => Arc::from([]),
            Some(ball) => {
                let mut out = Vec::new();
                for &w in ball.iter() {
                    if w != v && self.is_clean(w)? {
                        out.push(w);
                    }
                }
                out.into()
            }
        };
        let _ = self.h_lists[v].set(list.clone());
        Ok(list)
    }

    fn coin(&self, v: Vertex, r: u32) -> Rank {
        Rank {
            value: self.coins.unit(&[v as u64, u64::from(r)]),
            vertex: v,
        }
    }

    fn state(&self, v: Vertex) -> MisState {
        *self.mis[v].lock().expect("MIS state lock")
    }

    /// Makes `undecided_at(v, r)` known, resolving earlier rounds of
    /// nearby vertices first. Round `s` of `v` depends only on round `s`
    /// statuses, which depend on earlier rounds, so the work list drains.
    fn ensure(&self, v: Vertex, r: u32) -> Result<(), QueryError> {
        let mut work = vec![(v, r)];
        while let Some(&(x, r)) = work.last() {
            let st = self.state(x);
            if st.undecided_at(r).is_some() {
                work.pop();
                continue;
            }
            let s = st.through;
            match self.resolve_round(x, s)? {
                Err(missing) => work.push((missing, s)),
                Ok(decision) => {
                    let mut guard = self.mis[x].lock().expect("MIS state lock");
                    if guard.decided.is_none() && guard.through == s {
                        match decision {
                            Some(joined) => guard.decided = Some((s, joined)),
                            None => guard.through = s + 1,
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Outcome of round `s` for `x` (undecided at its start): `Some(true)`
    /// joins, `Some(false)` excluded, `None` still undecided; or the first
    /// vertex whose round-`s` status is not yet known.
    fn resolve_round(&self, x: Vertex, s: u32) -> Result<Result<Option<bool>, Vertex>, QueryError> {
        let undecided = |w: Vertex| -> Result<bool, Vertex> { self.state(w).undecided_at(s).ok_or(w) };
        let joins = |w: Vertex| -> Result<Result<bool, Vertex>, QueryError> {
            let own = self.coin(w, s);
            for &y in self.h_neighbors(w)?.iter() {
                match undecided(y) {
                    Err(m) => return Ok(Err(m)),
                    Ok(true) if self.coin(y, s) < own => return Ok(Ok(false)),
                    Ok(_) => {}
                }
            }
            Ok(Ok(true))
        };
        match joins(x)? {
            Err(m) => return Ok(Err(m)),
            Ok(true) => return Ok(Ok(Some(true))),
            Ok(false) => {}
        }
        for &w in self.h_neighbors(x)?.iter() {
            match undecided(w) {
                Err(m) => return Ok(Err(m)),
                Ok(false) => continue,
                Ok(true) => {}
            }
            match joins(w)? {
                Err(m) => return Ok(Err(m)),
                Ok(true) => return Ok(Ok(Some(false))),
                Ok(false) => {}
            }
        }
        Ok(Ok(None))
    }

    /// Whether clean vertex `v` ends in the MIS (or is still undecided after
    /// the last round and joins as a fallback). `false` for unclean `v`.
    pub fn in_mis(&self, v: Vertex) -> Result<bool, QueryError> {
        if !self.is_clean(v)? {
            return Ok(false);
        }
        let last = self.params.rounds + 1;
        self.ensure(v, last)?;
        Ok(match self.state(v).decided {
            Some((_, joined)) => joined,
            None => true,
        })
    }

    /// Whether `v` was undecided after all rounds and joined as a fallback.
    pub fn is_fallback(&self, v: Vertex) -> Result<bool, QueryError> {
        Ok(self.in_mis(v)? && self.state(v).decided.is_none())
    }

    /// Whether the edge `(v, v0)` is added for `v ≠ v0`.
    pub fn links_to_super_node(&self, v: Vertex) -> Result<bool, QueryError> {
        if self.is_high_degree(v)? {
            return Ok(true);
        }
        self.in_mis(v)
    }
}

impl<O: NeighborOracle> Universe for SmallDiam<O> {
    fn vertex_count(&self) -> usize {
        self.gprime.vertex_count()
    }
    fn edge_budget(&self) -> usize {
        self.gprime.edge_budget()
    }
}

impl<O: NeighborOracle> EdgeOracle for SmallDiam<O> {
    fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(QueryError::DegenerateQuery(u));
        }
        if self.gprime.has_edge(u, v)? {
            return Ok(true);
        }
        let v0 = Self::SUPER_NODE;
        if u == v0 {
            self.links_to_super_node(v)
        } else if v == v0 {
            self.links_to_super_node(u)
        } else {
            Ok(false)
        }
    }
}

/// Lists of `G′` followed by the added `v0` edge; the list of `v0` itself
/// tests every vertex, so it costs a full scan.
impl<O: NeighborOracle> NeighborOracle for SmallDiam<O> {
    fn degree(&self, v: Vertex) -> Result<usize, QueryError> {
        Ok(self.neighbor_list(v)?.len())
    }

    fn neighbor(&self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        index_list(&self.neighbor_list(v)?, v, i)
    }

    fn neighbor_list(&self, v: Vertex) -> Result<Arc<[Vertex]>, QueryError> {
        self.check_vertex(v)?;
        if let Some(l) = self.lists[v].get() {
            return Ok(l.clone());
        }
        let v0 = Self::SUPER_NODE;
        let base = self.gprime.neighbor_list(v)?;
        let mut added = Vec::new();
        if v == v0 {
            for w in 2..=self.vertex_count() {
                if !base.contains(&w) && self.links_to_super_node(w)? {
                    added.push(w);
                }
            }
        } else if !base.contains(&v0) && self.links_to_super_node(v)? {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{distances_from, exact_diameter, power_graph};
    use crate::graph::SparseGraph;
    use crate::oracle::{materialize_edges, materialize_neighbors};

    fn cfg(d: usize, seed: u64) -> DiamConfig {
        DiamConfig::new(0.2, 1.0, 0.5, 0.1, d, seed)
    }

    #[test]
    fn derived_constants() {
        let p = DiamConfig::new(0.1, 1.0, 0.2, 0.05, 3, 0).derive(500, 1500).unwrap();
        assert_eq!(p.radius, 3);
        assert!((p.avg_degree - 6.0).abs() < 1e-12);
        assert!((p.threshold - 60.0).abs() < 1e-9);
        assert!((p.h_degree - 216_000.0).abs() < 1e-6);
        let expect = (4.0 * (216_002f64).log2().powi(2)).ceil() as u32;
        assert_eq!(p.rounds, expect);
        let q = DiamConfig::new(0.5, 1.0, 0.2, 0.05, 9, 0).derive(100, 200).unwrap();
        assert_eq!(q.radius, 2);
        assert!(DiamConfig::new(0.1, 1.0, 0.2, 0.05, 0, 0).derive(10, 10).is_err());
    }

    #[test]
    fn super_node_and_hub_are_high_degree() {
        let g = SparseGraph::undirected(60, 60, (3..=40).map(|v| (2, v))).unwrap();
        let r = SmallDiam::new(&g, &cfg(2, 1)).unwrap();
        assert!(r.is_high_degree(1).unwrap());
        assert!(r.is_high_degree(2).unwrap());
        assert!(r.has_edge(2, 1).unwrap());
        // leaves next to the hub are dominated and gain nothing
        assert!(!r.is_clean(5).unwrap());
        for v in 3..=40 {
            if !r.g_prime().has_edge(v, 1).unwrap() {
                assert_eq!(r.has_edge(v, 1).unwrap(), r.is_high_degree(v).unwrap());
            }
        }
    }

    #[test]
    fn isolated_clean_vertex_joins() {
        // ball radius 1, only v0's chain neighbors see v0
        let g = SparseGraph::undirected(40, 400, [(30, 31)]).unwrap();
        let r = SmallDiam::new(&g, &DiamConfig::new(0.5, 1.0, 0.5, 0.05, 1, 3)).unwrap();
        assert_eq!(r.params().radius, 1);
        for v in [30, 31] {
            assert!(r.is_clean(v).unwrap());
        }
        let winner = [30, 31].into_iter().min_by_key(|&v| r.coin(v, 1)).unwrap();
        let h30 = r.h_neighbors(30).unwrap();
        if h30.as_ref() == [31] && r.h_neighbors(31).unwrap().as_ref() == [30] {
            assert!(r.in_mis(winner).unwrap());
            assert_eq!(r.in_mis(30).unwrap() as u8 + r.in_mis(31).unwrap() as u8, 1);
        }
    }

    fn lollipop_chain(n: usize) -> SparseGraph {
        // path 2..=n with a hub 2 linked to 3..=12
        let mut e: Vec<(usize, usize)> = (12..n).map(|i| (i, i + 1)).collect();
        e.extend((3..=12).map(|v| (2, v)));
        SparseGraph::undirected(n, 3 * n, e).unwrap()
    }

    #[test]
    fn mis_is_independent_and_dominating() {
        let g = lollipop_chain(120);
        for seed in 0..4 {
            let r = SmallDiam::new(&g, &DiamConfig::new(0.5, 1.0, 0.5, 0.05, 2, seed)).unwrap();
            let k = r.params().radius;
            let gp = materialize_neighbors(r.g_prime()).unwrap();
            let pk = power_graph(&gp, k).unwrap();
            let clean: Vec<Vertex> = (1..=120).filter(|&v| r.is_clean(v).unwrap()).collect();
            let m: Vec<Vertex> = clean.iter().copied().filter(|&v| r.in_mis(v).unwrap()).collect();
            let fallback: HashSet<Vertex> = m.iter().copied().filter(|&v| r.is_fallback(v).unwrap()).collect();
            for &a in &m {
                for &b in &m {
                    if a < b && !fallback.contains(&a) && !fallback.contains(&b) {
                        assert!(!pk.has_edge(a, b), "{a} {b} both in MIS");
                    }
                }
            }
            for &v in &clean {
                assert!(m.contains(&v) || m.iter().any(|&w| pk.has_edge(v, w)));
            }
            let bound: f64 = (1..=k).map(|i| r.params().threshold.powi(i as i32)).sum::<f64>() + 1.0;
            for &v in &clean {
                assert!(r.low_ball(v).unwrap().unwrap().len() as f64 <= bound);
            }
        }
    }

    #[test]
    fn diameter_bound_holds() {
        let g = lollipop_chain(150);
        for seed in 0..4 {
            let r = SmallDiam::new(&g, &DiamConfig::new(0.5, 1.0, 0.5, 0.05, 3, seed)).unwrap();
            let k = r.params().radius;
            let t = materialize_edges(&r).unwrap();
            assert_eq!(materialize_neighbors(&r).unwrap(), t);
            let dist = distances_from(&t, 1);
            assert!((1..=150).all(|v| dist[v] <= k + 1));
            assert!(exact_diameter(&t).unwrap().unwrap() <= 2 * k + 2);
        }
    }
}
