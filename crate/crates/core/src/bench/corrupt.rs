use std::collections::{HashSet, VecDeque};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::exact::{connected_components, edge_connectivity, scc_decompose, Property};
use crate::graph::{SparseGraph, Vertex};

/// How to damage an instance that has a property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    /// Split into exactly `components` connected components.
    Components { components: usize },
    /// Create exactly `count` source and `count` sink components.
    SourcesSinks { count: usize },
    /// Push vertices down to degree `k − 1`, removing at most `max_removed` edges.
    KCuts { k: usize, max_removed: usize },
    /// Remove `spokes` edges between high- and low-degree vertices.
    Spokes { diameter: usize, spokes: usize },
}

impl Corruption {
    /// A corruption whose certified distance is at most `eps`.
    pub fn for_eps(property: Property, eps: f64, m_bound: usize) -> Corruption {
        let budget = (eps * m_bound as f64 + 1e-9).floor() as usize;
        match property {
            Property::Connected => Corruption::Components { components: budget + 1 },
            Property::StronglyConnected => Corruption::SourcesSinks { count: budget.max(1) },
            Property::KEdgeConnected(k) => Corruption::KCuts {
                k,
                max_removed: budget.max(1),
            },
            Property::DiameterAtMost(d) => Corruption::Spokes {
                diameter: d,
                spokes: budget.max(1),
            },
        }
    }

    pub fn property(&self) -> Property {
        match *self {
            Corruption::Components { .. } => Property::Connected,
            Corruption::SourcesSinks { .. } => Property::StronglyConnected,
            Corruption::KCuts { k, .. } => Property::KEdgeConnected(k),
            Corruption::Spokes { diameter, .. } => Property::DiameterAtMost(diameter),
        }
    }
}

/// Machine-checkable evidence of how far a corrupted instance is from its
/// property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// `connected`, `strong`, `kconn` or `diam`.
    pub property: String,
    /// `k` or `D` where relevant, else 0.
    pub parameter: usize,
    /// Distance to the property in differing pairs.
    pub distance_pairs: usize,
    /// Whether `distance_pairs` is exact or only an upper bound.
    pub exact: bool,
    pub m_bound: usize,
    /// Removed edges; adding them back restores the property.
    pub removed: Vec<(Vertex, Vertex)>,
}

fn tag(p: Property) -> (&'static str, usize) {
    match p {
        Property::Connected => ("connected", 0),
        Property::StronglyConnected => ("strong", 0),
        Property::KEdgeConnected(k) => ("kconn", k),
        Property::DiameterAtMost(d) => ("diam", d),
    }
}

impl Certificate {
    pub fn property(&self) -> Result<Property, BenchError> {
        Ok(match self.property.as_str() {
            "connected" => Property::Connected,
            "strong" => Property::StronglyConnected,
            "kconn" => Property::KEdgeConnected(self.parameter),
            "diam" => Property::DiameterAtMost(self.parameter),
            other => return Err(BenchError::Certificate(format!("unknown property {other}"))),
        })
    }

    /// Certified distance over `m_bound`.
    pub fn distance(&self) -> f64 {
        self.distance_pairs as f64 / self.m_bound as f64
    }

    /// Re-checks the certificate against the corrupted graph.
    pub fn validate(&self, g: &SparseGraph) -> Result<(), BenchError> {
        let fail = |msg: String| Err(BenchError::Certificate(msg));
        let property = self.property()?;
        if g.m_bound() != self.m_bound {
            return fail(format!("budget {} differs from {}", g.m_bound(), self.m_bound));
        }
        let restored = g.with_edges(self.removed.iter().copied())?;
        if !property.holds(&restored)? {
            return fail("re-adding the removed edges does not restore the property".into());
        }
        match property {
            Property::Connected => {
                let c = connected_components(g)?.count;
                if c - 1 != self.distance_pairs {
                    return fail(format!("{c} components, certificate says {}", self.distance_pairs + 1));
                }
            }
            Property::StronglyConnected => {
                let scc = scc_decompose(g)?;
                if scc.sources() != self.distance_pairs || scc.sinks() != self.distance_pairs {
                    return fail(format!(
                        "{} sources and {} sinks, certificate says {}",
                        scc.sources(),
                        scc.sinks(),
                        self.distance_pairs
                    ));
                }
            }
            Property::KEdgeConnected(k) => {
                let lambda = edge_connectivity(g)?;
                if lambda + 1 != k {
                    return fail(format!("edge connectivity {lambda}, expected {}", k - 1));
                }
                if self.distance_pairs != self.removed.len() {
                    return fail("distance bound must equal the removed edge count".into());
                }
            }
            Property::DiameterAtMost(_) => {
                if property.holds(g)? {
                    return fail("corrupted graph still has the property".into());
                }
                if self.distance_pairs != self.removed.len() {
                    return fail("distance bound must equal the removed edge count".into());
                }
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), BenchError> {
        let text = toml::to_string(self).map_err(|e| BenchError::Certificate(e.to_string()))?;
        std::fs::write(path, text).map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| BenchError::Certificate(e.to_string()))
    }
}

fn certificate(p: Property, g: &SparseGraph, removed: Vec<(Vertex, Vertex)>, distance_pairs: usize, exact: bool) -> Certificate {
    let (name, parameter) = tag(p);
    Certificate {
        property: name.into(),
        parameter,
        distance_pairs,
        exact,
        m_bound: g.m_bound(),
        removed,
    }
}

fn split_components(g: &SparseGraph, j: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(Vertex, Vertex)>, BenchError> {
    let n = g.n();
    if j == 0 || j > n {
        return Err(BenchError::Corruption(format!("cannot make {j} components from {n} vertices")));
    }
    // BFS spanning tree from a random root
    let root = rng.random_range(1..=n);
    let mut parent = vec![0; n + 1];
    let mut seen = vec![false; n + 1];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    while let Some(x) = queue.pop_front() {
        let mut nb = g.neighbors(x).to_vec();
        nb.shuffle(rng);
        for y in nb {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                tree.push(y);
                queue.push_back(y);
            }
        }
    }
    if tree.len() + 1 != n {
        return Err(BenchError::Corruption("input is not connected".into()));
    }
    tree.shuffle(rng);
    let cut: HashSet<Vertex> = tree[..j - 1].iter().copied().collect();
    // part label: nearest cut ancestor (or the root)
    let mut label = vec![0; n + 1];
    label[root] = root;
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &y in g.neighbors(x) {
            if parent[y] == x && y != root && label[y] == 0 {
                label[y] = if cut.contains(&y) { y } else { label[x] };
                order.push(y);
            }
        }
    }
    Ok(g.edges().filter(|&(u, v)| label[u] != label[v]).collect())
}

/// Greedily isolates source and sink singletons, keeping a candidate only if
/// the condensation then has exactly the intended number of each.
fn sources_sinks(g: &SparseGraph, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(Vertex, Vertex)>, BenchError> {
    let n = g.n();
    if count == 0 || 2 * count > n {
        return Err(BenchError::Corruption(format!("cannot make {count} sources and sinks from {n} vertices")));
    }
    let removed_for = |sources: &HashSet<Vertex>, sinks: &HashSet<Vertex>| -> Vec<(Vertex, Vertex)> {
        g.edges()
            .filter(|&(u, v)| sources.contains(&v) || sinks.contains(&u))
            .collect()
    };
    // a single greedy pass can get stuck on sparse graphs, so retry with fresh orders
    for _ in 0..8 {
        let mut order: Vec<Vertex> = (1..=n).collect();
        order.shuffle(rng);
        let mut sources: HashSet<Vertex> = HashSet::new();
        let mut sinks: HashSet<Vertex> = HashSet::new();
        for v in order {
            if sources.len() == count && sinks.len() == count {
                break;
            }
            let as_source = sources.len() <= sinks.len() && sources.len() < count || sinks.len() == count;
            if as_source {
                sources.insert(v);
            } else {
                sinks.insert(v);
            }
            let h = g.without_edges(&removed_for(&sources, &sinks));
            let scc = scc_decompose(&h)?;
            if scc.sources() != sources.len().max(1) || scc.sinks() != sinks.len().max(1) {
                if as_source {
                    sources.remove(&v);
                } else {
                    sinks.remove(&v);
                }
            }
        }
        if sources.len() == count && sinks.len() == count {
            return Ok(removed_for(&sources, &sinks));
        }
    }
    Err(BenchError::Corruption(format!("no arc removal produced exactly {count} sources and sinks")))
}

fn k_cuts(g: &SparseGraph, k: usize, budget: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(Vertex, Vertex)>, BenchError> {
    if k == 0 {
        return Err(BenchError::Corruption("k must be positive".into()));
    }
    for _ in 0..16 {
        let mut deg: Vec<usize> = (0..=g.n()).map(|v| if v == 0 { 0 } else { g.degree(v) }).collect();
        let mut removed: HashSet<(Vertex, Vertex)> = HashSet::new();
        let mut touched: HashSet<Vertex> = HashSet::new();
        let mut order: Vec<Vertex> = (1..=g.n()).collect();
        order.shuffle(rng);
        for v in order {
            if removed.len() >= budget {
                break;
            }
            if touched.contains(&v) || deg[v] < k {
                continue;
            }
            let need = deg[v] + 1 - k;
            let mut drop: Vec<Vertex> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| deg[w] > k && !touched.contains(&w))
                .collect();
            if drop.len() < need || removed.len() + need > budget {
                continue;
            }
            drop.shuffle(rng);
            for &w in &drop[..need] {
                removed.insert((v.min(w), v.max(w)));
                deg[w] -= 1;
                deg[v] -= 1;
            }
            touched.insert(v);
            touched.extend(g.neighbors(v));
        }
        if removed.is_empty() {
            break;
        }
        let mut removed: Vec<(Vertex, Vertex)> = removed.into_iter().collect();
        removed.sort_unstable();
        let h = g.without_edges(&removed);
        if edge_connectivity(&h)? + 1 == k {
            return Ok(removed);
        }
    }
    Err(BenchError::Corruption(format!("could not bring edge connectivity down to exactly {}", k - 1)))
}

fn spokes(g: &SparseGraph, count: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let mut candidates: Vec<(usize, usize, (Vertex, Vertex))> = g
        .edges()
        .map(|(u, v)| {
            let (lo, hi) = if g.degree(u) <= g.degree(v) { (u, v) } else { (v, u) };
            (g.degree(lo), usize::MAX - g.degree(hi), (u, v))
        })
        .collect();
    candidates.shuffle(rng);
    candidates.sort_by_key(|&(a, b, _)| (a, b));
    let mut removed = Vec::new();
    let mut used = HashSet::new();
    for (_, _, (u, v)) in candidates {
        if removed.len() == count {
            break;
        }
        // at most one spoke per low endpoint keeps the certificate tight
        let low = if g.degree(u) <= g.degree(v) { u } else { v };
        if used.insert(low) {
            removed.push((u, v));
        }
    }
    removed.sort_unstable();
    removed
}

/// Removes edges from `g` (which must have the corruption's property) and
/// returns the damaged graph with a validated certificate.
pub fn corrupt(g: &SparseGraph, how: Corruption, seed: u64) -> Result<(SparseGraph, Certificate), BenchError> {
    let property = how.property();
    if property.is_directed() != g.is_directed() {
        return Err(BenchError::Corruption("graph kind does not match the property".into()));
    }
    if !property.holds(g)? {
        return Err(BenchError::Corruption("input does not have the property".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (removed, distance, exact) = match how {
        Corruption::Components { components } => (split_components(g, components, &mut rng)?, components - 1, true),
        Corruption::SourcesSinks { count } => (sources_sinks(g, count, &mut rng)?, count, true),
        Corruption::KCuts { k, max_removed } => {
            let r = k_cuts(g, k, max_removed, &mut rng)?;
            let d = r.len();
            (r, d, false)
        }
        Corruption::Spokes { spokes: count, .. } => {
            let r = spokes(g, count, &mut rng);
            let d = r.len();
            (r, d, false)
        }
    };
    let h = g.without_edges(&removed);
    let cert = certificate(property, g, removed, distance, exact);
    cert.validate(&h)?;
    Ok((h, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{generate, GraphKind};

    #[test]
    fn components_exact() {
        let g = generate(GraphKind::Connected, 1000, 2000, 500, 3).unwrap();
        let how = Corruption::for_eps(Property::Connected, 0.05, 2000);
        assert_eq!(how, Corruption::Components { components: 101 });
        let (h, cert) = corrupt(&g, how, 4).unwrap();
        assert_eq!(connected_components(&h).unwrap().count, 101);
        assert_eq!(cert.distance_pairs, 100);
        assert!(cert.exact);
    }

    #[test]
    fn sources_and_sinks() {
        let g = generate(GraphKind::StronglyConnected, 200, 400, 200, 5).unwrap();
        let (h, cert) = corrupt(&g, Corruption::SourcesSinks { count: 5 }, 6).unwrap();
        let scc = scc_decompose(&h).unwrap();
        assert_eq!((scc.sources(), scc.sinks()), (5, 5));
        assert!((cert.distance() - 5.0 / 400.0).abs() < 1e-12);
    }

    #[test]
    fn bridge_for_k_two() {
        let g = generate(GraphKind::KConnected { k: 2 }, 60, 120, 10, 7).unwrap();
        let (h, cert) = corrupt(&g, Corruption::KCuts { k: 2, max_removed: 1 }, 8).unwrap();
        assert_eq!(edge_connectivity(&h).unwrap(), 1);
        assert_eq!(cert.removed.len(), 1);
    }

    #[test]
    fn spokes_break_diameter() {
        let g = generate(GraphKind::LowDiameter { diameter: 3 }, 100, 300, 20, 9).unwrap();
        let (h, cert) = corrupt(&g, Corruption::Spokes { diameter: 3, spokes: 5 }, 1).unwrap();
        assert!(!Property::DiameterAtMost(3).holds(&h).unwrap());
        assert_eq!(cert.removed.len(), 5);
    }

    #[test]
    fn certificate_round_trip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let g = generate(GraphKind::Connected, 50, 100, 10, 1).unwrap();
        let (h, cert) = corrupt(&g, Corruption::Components { components: 4 }, 2).unwrap();
        let path = dir.path().join("c.cert");
        cert.save(&path).unwrap();
        let back = Certificate::load(&path).unwrap();
        assert_eq!(back, cert);
        back.validate(&h).unwrap();
        let mut bad = cert.clone();
        bad.distance_pairs = 2;
        assert!(bad.validate(&h).is_err());
        assert!(cert.validate(&g).is_err());
    }
}
