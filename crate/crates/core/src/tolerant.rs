//! Tolerant testing from local reconstruction.
//!
//! [`tolerant_test`] estimates how far a reconstructor moves the input, rejects
//! if that is more than the reconstructor is allowed to move a close input,
//! and otherwise hands the reconstructed graph to an ordinary tester.
//!
//! All reconstructors in this crate only add edges touching their
//! super-nodes, and each vertex outside them has a short, known list of
//! super-nodes it may be joined to. [`SuperNodeStructure`] exposes that list,
//! which lets [`estimate_distance`] sample vertices instead of pairs.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connect::{assigned_super_node, ConnConfig, Connected, ModConnected};
use crate::diameter::SmallDiam;
use crate::error::{ConfigError, QueryError, ReconError};
use crate::exact::Property;
use crate::graph::{graph_distance, SparseGraph, Vertex};
use crate::kconn::{hash_supernodes, KConnected};
use crate::oracle::{materialize_edges, DirectedNeighborOracle, EdgeOracle, NeighborOracle};
use crate::strong::StronglyConnected;

/// Where a reconstructor may add edges: only among super-nodes `1..=n0`,
/// or between a vertex and its [`candidate_partners`](Self::candidate_partners).
pub trait SuperNodeStructure: EdgeOracle {
    fn super_node_count(&self) -> usize;

    /// Super-nodes a non-super-node `u` may gain an edge to.
    fn candidate_partners(&self, u: Vertex) -> Vec<Vertex>;
}

impl<O: NeighborOracle> SuperNodeStructure for Connected<O> {
    fn super_node_count(&self) -> usize {
        1
    }
    fn candidate_partners(&self, _u: Vertex) -> Vec<Vertex> {
        vec![Self::SUPER_NODE]
    }
}

impl<O: NeighborOracle> SuperNodeStructure for ModConnected<O> {
    fn super_node_count(&self) -> usize {
        ModConnected::super_node_count(self)
    }
    fn candidate_partners(&self, u: Vertex) -> Vec<Vertex> {
        vec![self.assigned(u)]
    }
}

impl<O: DirectedNeighborOracle> SuperNodeStructure for StronglyConnected<O> {
    fn super_node_count(&self) -> usize {
        1
    }
    fn candidate_partners(&self, _u: Vertex) -> Vec<Vertex> {
        vec![Self::SUPER_NODE]
    }
}

impl SuperNodeStructure for KConnected<'_> {
    fn super_node_count(&self) -> usize {
        self.params().super_nodes
    }
    fn candidate_partners(&self, u: Vertex) -> Vec<Vertex> {
        let p = self.params();
        hash_supernodes(u, p.c, p.k, p.super_nodes).expect("validated super-node count")
    }
}

impl<O: NeighborOracle> SuperNodeStructure for SmallDiam<O> {
    fn super_node_count(&self) -> usize {
        self.g_prime().super_node_count()
    }
    fn candidate_partners(&self, u: Vertex) -> Vec<Vertex> {
        let g = self.g_prime();
        let h = assigned_super_node(u, g.density(), g.super_node_count());
        if h == Self::SUPER_NODE {
            vec![h]
        } else {
            vec![Self::SUPER_NODE, h]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorMode {
    /// Sample non-super-nodes and probe their candidate partners.
    Structured,
    /// Sample unordered pairs uniformly.
    UniformPair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceParams {
    pub eps1: f64,
    pub eps2: f64,
    /// Additive slack; the estimate aims for error `β/2`.
    pub beta: f64,
    pub mode: EstimatorMode,
}

impl ToleranceParams {
    pub fn new(eps1: f64, eps2: f64, beta: f64) -> Result<Self, ConfigError> {
        if !(eps1 > 0.0 && eps1 <= eps2) {
            return Err(ConfigError::Constraint(format!("need 0 < eps1 = {eps1} ≤ eps2 = {eps2}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(ConfigError::invalid("beta", beta, "must be positive"));
        }
        Ok(ToleranceParams {
            eps1,
            eps2,
            beta,
            mode: EstimatorMode::Structured,
        })
    }
}

/// Vertex samples for the structured estimator:
/// `⌈8·k_max²·ln 12 / β²⌉ · ⌈n/m⌉²`.
pub fn structured_sample_count(beta: f64, k_max: usize, n: usize, m: usize) -> usize {
    let base = (8.0 * (k_max * k_max) as f64 * 12f64.ln() / (beta * beta)).ceil() as usize;
    base * n.div_ceil(m.max(1)).pow(2)
}

/// Pair samples for the uniform estimator: `⌈2·ln 12 / β²⌉`, the count that
/// bounds the error on the pair fraction rather than on the distance.
pub fn uniform_sample_count(beta: f64) -> usize {
    (2.0 * 12f64.ln() / (beta * beta)).ceil() as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceEstimate {
    /// Estimated distance between input and reconstruction, over `m`.
    pub value: f64,
    pub samples: usize,
    /// Differing super-node pairs, counted exactly (structured mode).
    pub deterministic_pairs: usize,
}

fn differs<G, R>(g: &G, r: &R, u: Vertex, v: Vertex) -> Result<usize, QueryError>
where
    G: EdgeOracle + ?Sized,
    R: EdgeOracle + ?Sized,
{
    let mut d = usize::from(g.has_edge(u, v)? != r.has_edge(u, v)?);
    if r.is_directed() {
        d += usize::from(g.has_edge(v, u)? != r.has_edge(v, u)?);
    }
    Ok(d)
}

/// Estimates `dist(G, G̃)` for the graph `recon` answers, given edge access
/// to the input `g`.
pub fn estimate_distance<G, R>(
    g: &G,
    recon: &R,
    params: &ToleranceParams,
    seed: u64,
) -> Result<DistanceEstimate, ReconError>
where
    G: EdgeOracle + ?Sized,
    R: SuperNodeStructure + ?Sized,
{
    let n = recon.vertex_count();
    let m = recon.edge_budget();
    if g.vertex_count() != n || g.is_directed() != recon.is_directed() {
        return Err(ReconError::EstimatorUnsound("input and reconstruction disagree on shape".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match params.mode {
        EstimatorMode::Structured => {
            let n0 = recon.super_node_count();
            if n0 == 0 || n0 >= n {
                return Err(ReconError::EstimatorUnsound(format!("{n0} super-nodes among {n} vertices")));
            }
            let mut deterministic = 0;
            for a in 1..=n0 {
                for b in a + 1..=n0 {
                    deterministic += differs(g, recon, a, b)?;
                }
            }
            let k_max = (n0 + 1..=n).map(|u| recon.candidate_partners(u).len()).max().unwrap_or(1).max(1);
            let s = structured_sample_count(params.beta, k_max, n, m);
            let mut total = 0usize;
            for _ in 0..s {
                let u = rng.random_range(n0 + 1..=n);
                for w in recon.candidate_partners(u) {
                    if w == 0 || w > n0 {
                        return Err(ReconError::EstimatorUnsound(format!("partner {w} of {u} is not a super-node")));
                    }
                    total += differs(g, recon, u, w)?;
                }
            }
            let value = ((n - n0) as f64 / s as f64 * total as f64 + deterministic as f64) / m as f64;
            Ok(DistanceEstimate {
                value,
                samples: s,
                deterministic_pairs: deterministic,
            })
        }
        EstimatorMode::UniformPair => {
            if n < 2 {
                return Err(ReconError::EstimatorUnsound("fewer than two vertices".into()));
            }
            let s = uniform_sample_count(params.beta);
            let mut hits = 0usize;
            for _ in 0..s {
                let u = rng.random_range(1..=n);
                let mut v = rng.random_range(1..n);
                if v >= u {
                    v += 1;
                }
                hits += differs(g, recon, u.min(v), u.max(v))?;
            }
            let pairs = (n * (n - 1) / 2) as f64;
            Ok(DistanceEstimate {
                value: pairs * hits as f64 / s as f64 / m as f64,
                samples: s,
                deterministic_pairs: 0,
            })
        }
    }
}

/// Exact distance between `g` and the materialized reconstruction.
pub fn exact_reconstruction_distance<G, R>(g: &G, recon: &R) -> Result<f64, ReconError>
where
    G: EdgeOracle + ?Sized,
    R: EdgeOracle + ?Sized,
{
    let a = materialize_edges(g)?;
    let b = materialize_edges(recon)?;
    let m = a.m_bound().max(b.m_bound());
    let widen = |g: &SparseGraph| g.with_m_bound(m).expect("raising the budget is always valid");
    let d = graph_distance(&widen(&a), &widen(&b)).map_err(|e| ReconError::EstimatorUnsound(e.to_string()))?;
    Ok(d.differing_pairs as f64 / a.m_bound() as f64)
}

/// A property tester run against an oracle of type `R`.
pub trait PropertyTester<R: ?Sized> {
    fn property(&self) -> Property;

    /// `true` to accept.
    fn test(&self, oracle: &R, seed: u64) -> Result<bool, ReconError>;
}

/// Sublinear one-sided connectivity tester: looks for a small component
/// around random vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityTester {
    pub eps: f64,
}

/// Outcome of one [`ConnectivityTester`] run with its cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TesterRun {
    pub accept: bool,
    pub queries: usize,
    pub samples: usize,
    pub component_cap: usize,
    pub max_degree: usize,
}

impl TesterRun {
    /// `s · (B + 1) · (Δ + 1)` with `Δ` the largest degree read.
    pub fn declared_budget(&self) -> usize {
        self.samples * (self.component_cap + 1) * (self.max_degree + 1)
    }
}

impl ConnectivityTester {
    pub fn new(eps: f64) -> Self {
        ConnectivityTester { eps }
    }

    /// `(s, B)` with `B = ⌈2n/(εm)⌉` and `s = 3B`.
    pub fn sizes(&self, n: usize, m: usize) -> Result<(usize, usize), ConfigError> {
        let em = self.eps * m as f64;
        if em <= 2.0 {
            return Err(ConfigError::Constraint(format!("ε·m = {em} must exceed 2")));
        }
        let b = (2.0 * n as f64 / em).ceil() as usize;
        Ok(((3.0 * 2.0 * n as f64 / em).ceil() as usize, b))
    }

    pub fn run<R: NeighborOracle + ?Sized>(&self, oracle: &R, seed: u64) -> Result<TesterRun, ReconError> {
        let n = oracle.vertex_count();
        let (s, b) = self.sizes(n, oracle.edge_budget())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut queries = 0;
        let mut max_degree = 0;
        let mut accept = true;
        for _ in 0..s {
            let start = rng.random_range(1..=n);
            let mut seen = HashSet::from([start]);
            let mut queue = VecDeque::from([start]);
            let mut exhausted = true;
            'bfs: while let Some(x) = queue.pop_front() {
                let d = oracle.degree(x)?;
                queries += 1;
                max_degree = max_degree.max(d);
                for i in 1..=d {
                    let y = oracle.neighbor(x, i)?;
                    queries += 1;
                    if seen.insert(y) {
                        if seen.len() > b {
                            exhausted = false;
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            if exhausted && seen.len() < n {
                accept = false;
                break;
            }
        }
        Ok(TesterRun {
            accept,
            queries,
            samples: s,
            component_cap: b,
            max_degree,
        })
    }
}

impl<R: NeighborOracle + ?Sized> PropertyTester<R> for ConnectivityTester {
    fn property(&self) -> Property {
        Property::Connected
    }
    fn test(&self, oracle: &R, seed: u64) -> Result<bool, ReconError> {
        Ok(self.run(oracle, seed)?.accept)
    }
}

/// Reference tester that materializes the whole graph and decides the
/// property exactly. Not sublinear.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactTester {
    pub property: Property,
}

impl<R: EdgeOracle + ?Sized> PropertyTester<R> for ExactTester {
    fn property(&self) -> Property {
        self.property
    }
    fn test(&self, oracle: &R, _seed: u64) -> Result<bool, ReconError> {
        let g = materialize_edges(oracle)?;
        Ok(self.property.holds(&g)?)
    }
}

/// Verdict of [`tolerant_test`] with the evidence behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerantVerdict {
    pub accept: bool,
    pub estimate: DistanceEstimate,
    /// False if the distance estimate alone caused the rejection.
    pub tester_ran: bool,
}

/// Rejects if the estimated reconstruction distance exceeds `ε2 + β/2`,
/// otherwise returns the tester's verdict on the reconstruction.
pub fn tolerant_test<G, R, T>(
    g: &G,
    recon: &R,
    tester: &T,
    params: &ToleranceParams,
    seed: u64,
) -> Result<TolerantVerdict, ReconError>
where
    G: EdgeOracle + ?Sized,
    R: SuperNodeStructure + ?Sized,
    T: PropertyTester<R> + ?Sized,
{
    let estimate = estimate_distance(g, recon, params, seed)?;
    if estimate.value > params.eps2 + params.beta / 2.0 {
        return Ok(TolerantVerdict {
            accept: false,
            estimate,
            tester_ran: false,
        });
    }
    let accept = tester.test(recon, seed ^ 0x7465_7374)?;
    Ok(TolerantVerdict {
        accept,
        estimate,
        tester_ran: true,
    })
}

/// The connectivity instance of [`tolerant_test`]: Mod-Connected built with
/// `config.eps` as `ε1`, rejection threshold `ε2 = (1+α)·ε1 + (n0−1)/m`, and
/// the small-component tester with parameter `eps_prime` on the result.
pub fn tolerant_connectivity<O>(
    g: &O,
    config: &ConnConfig,
    eps_prime: f64,
    beta: f64,
    seed: u64,
) -> Result<TolerantVerdict, ReconError>
where
    O: NeighborOracle + EdgeOracle,
{
    let recon = ModConnected::new(g, config)?;
    let n0 = recon.super_node_count();
    let eps2 = (1.0 + config.alpha) * config.eps + (n0 - 1) as f64 / g.edge_budget() as f64;
    let params = ToleranceParams::new(config.eps, eps2, beta)?;
    tolerant_test(g, &recon, &ConnectivityTester::new(eps_prime), &params, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connect::ConnConfig;
    use crate::oracle::{OracleHandle, Universe};

    #[test]
    fn sample_count_scales_with_beta() {
        let a = structured_sample_count(0.02, 1, 2000, 4000);
        let b = structured_sample_count(0.01, 1, 2000, 4000);
        assert!((b as f64 / a as f64 - 4.0).abs() < 1e-3);
        assert_eq!(structured_sample_count(0.1, 2, 300, 100), (32.0 * 12f64.ln() / 0.01).ceil() as usize * 9);
    }

    #[test]
    fn chain_only_estimate_is_exact() {
        // a path on 1..=n already connected: ModConnected adds only the chain
        // (plus leader edges; the path has a single leader which may add one)
        let n = 200;
        let g = SparseGraph::undirected(n, 400, (1..n).map(|i| (i, i + 1))).unwrap();
        let r = ModConnected::new(&g, &ConnConfig::new(0.05, 1.0, 0.2, 0.05, 1)).unwrap();
        let p = ToleranceParams::new(0.01, 0.05, 0.02).unwrap();
        let est = estimate_distance(&g, &r, &p, 3).unwrap();
        let truth = exact_reconstruction_distance(&g, &r).unwrap();
        assert!((est.value - truth).abs() <= 0.01, "{est:?} vs {truth}");
        // the chain 1..=10 overlaps the path, so no deterministic pairs differ
        assert_eq!(est.deterministic_pairs, 0);
    }

    #[test]
    fn connectivity_tester_one_sided() {
        let g = SparseGraph::undirected(100, 200, (1..100).map(|i| (i, i + 1))).unwrap();
        let h = OracleHandle::new(&g);
        let t = ConnectivityTester::new(0.1);
        for seed in 0..20 {
            let run = t.run(&h, seed).unwrap();
            assert!(run.accept);
            assert!(run.queries <= run.declared_budget());
        }
        assert!(t.sizes(10, 10).is_err());
    }

    #[test]
    fn connectivity_tester_rejects_far() {
        // εm + 2 = 22 singletons plus a path on the rest
        let n = 100;
        let g = SparseGraph::undirected(n, 200, (23..n).map(|i| (i, i + 1))).unwrap();
        let t = ConnectivityTester::new(0.1);
        let rejected = (0..300).filter(|&s| !t.run(&g, s).unwrap().accept).count();
        assert!(rejected >= 200, "{rejected}");
    }

    struct Inflated<'a>(&'a SparseGraph);

    impl Universe for Inflated<'_> {
        fn vertex_count(&self) -> usize {
            self.0.n()
        }
        fn edge_budget(&self) -> usize {
            self.0.m_bound()
        }
    }

    impl EdgeOracle for Inflated<'_> {
        fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, QueryError> {
            Ok(self.0.has_edge(u, v) || (u.min(v) == 1 && u.max(v) % 2 == 0))
        }
    }

    impl SuperNodeStructure for Inflated<'_> {
        fn super_node_count(&self) -> usize {
            1
        }
        fn candidate_partners(&self, _u: Vertex) -> Vec<Vertex> {
            vec![1]
        }
    }

    #[test]
    fn spurious_edges_rejected_by_estimate() {
        let n = 200;
        let g = SparseGraph::undirected(n, 400, (1..n).map(|i| (i, i + 1))).unwrap();
        let r = Inflated(&g);
        let p = ToleranceParams::new(0.01, 0.05, 0.02).unwrap();
        let v = tolerant_test(&g, &r, &ExactTester { property: Property::Connected }, &p, 1).unwrap();
        assert!(!v.accept);
        assert!(!v.tester_ran);
    }

    #[test]
    fn identity_reconstruction_runs_tester() {
        let n = 50;
        let g = SparseGraph::undirected(n, 100, (1..n).map(|i| (i, i + 1))).unwrap();
        let r = Connected::new(&g, &ConnConfig::new(0.1, 1.0, 0.5, 0.1, 0)).unwrap();
        let p = ToleranceParams::new(0.01, 0.05, 0.02).unwrap();
        let v = tolerant_test(&g, &r, &ConnectivityTester::new(0.1), &p, 2).unwrap();
        assert!(v.accept && v.tester_ran);
    }
}
