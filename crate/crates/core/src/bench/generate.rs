use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BenchError;
use crate::exact::Property;
use crate::graph::{SparseGraph, Vertex};

/// Family of generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// Random spanning tree plus random edges.
    Connected,
    /// Ring of width `⌈k/2⌉` over a random order plus random chords.
    KConnected { k: usize },
    /// Random Hamiltonian cycle plus random arcs.
    StronglyConnected,
    /// Hub clique with spokes (`D ≥ 3`), a star (`D = 2`) or a complete
    /// graph (`D = 1`), plus random edges.
    LowDiameter { diameter: usize },
}

impl GraphKind {
    pub fn property(&self) -> Property {
        match *self {
            GraphKind::Connected => Property::Connected,
            GraphKind::KConnected { k } => Property::KEdgeConnected(k),
            GraphKind::StronglyConnected => Property::StronglyConnected,
            GraphKind::LowDiameter { diameter } => Property::DiameterAtMost(diameter),
        }
    }

    pub fn is_directed(&self) -> bool {
        matches!(self, GraphKind::StronglyConnected)
    }
}

/// Number of hubs used for low-diameter instances with `D ≥ 3`.
pub(crate) fn hub_count(n: usize) -> usize {
    ((n as f64).sqrt() / 2.0).ceil().max(2.0).min(n as f64) as usize
}

/// Number of edges the skeleton of `kind` has on `n` vertices.
pub fn skeleton_size(kind: GraphKind, n: usize) -> usize {
    match kind {
        GraphKind::Connected => n.saturating_sub(1),
        GraphKind::KConnected { k } => {
            let s = k.div_ceil(2);
            if n >= 2 * s + 1 {
                n * s
            } else {
                0
            }
        }
        GraphKind::StronglyConnected => n,
        GraphKind::LowDiameter { diameter } => match diameter {
            0 => 0,
            1 => n * n.saturating_sub(1) / 2,
            2 => n.saturating_sub(1),
            _ => {
                let h = hub_count(n);
                h * (h - 1) / 2 + (n - h)
            }
        },
    }
}

fn skeleton(kind: GraphKind, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(Vertex, Vertex)>, BenchError> {
    let mut perm: Vec<Vertex> = (1..=n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    match kind {
        GraphKind::Connected => {
            for i in 1..n {
                let parent = perm[rng.random_range(0..i)];
                edges.push((perm[i], parent));
            }
        }
        GraphKind::KConnected { k } => {
            let s = k.div_ceil(2);
            if k == 0 || n < 2 * s + 1 {
                return Err(BenchError::Generation(format!("a {k}-connected ring needs n ≥ {}", 2 * s + 1)));
            }
            let mut seen = HashSet::new();
            for i in 0..n {
                for d in 1..=s {
                    let (a, b) = (perm[i], perm[(i + d) % n]);
                    if seen.insert((a.min(b), a.max(b))) {
                        edges.push((a, b));
                    }
                }
            }
        }
        GraphKind::StronglyConnected => {
            if n < 2 {
                return Err(BenchError::Generation("a cycle needs two vertices".into()));
            }
            for i in 0..n {
                edges.push((perm[i], perm[(i + 1) % n]));
            }
        }
        GraphKind::LowDiameter { diameter } => match diameter {
            0 => return Err(BenchError::Generation("diameter must be at least 1".into())),
            1 => {
                for a in 1..=n {
                    for b in a + 1..=n {
                        edges.push((a, b));
                    }
                }
            }
            2 => {
                for &v in &perm[1..] {
                    edges.push((perm[0], v));
                }
            }
            _ => {
                let h = hub_count(n);
                for i in 0..h {
                    for j in i + 1..h {
                        edges.push((perm[i], perm[j]));
                    }
                }
                for i in h..n {
                    edges.push((perm[i], perm[i % h]));
                }
            }
        },
    }
    Ok(edges)
}

fn add_random(
    edges: &mut Vec<(Vertex, Vertex)>,
    n: usize,
    directed: bool,
    extra: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), BenchError> {
    let key = |a: Vertex, b: Vertex| if directed { (a, b) } else { (a.min(b), a.max(b)) };
    let mut seen: HashSet<(Vertex, Vertex)> = edges.iter().map(|&(a, b)| key(a, b)).collect();
    let capacity = if directed { n * (n - 1) } else { n * (n - 1) / 2 };
    if seen.len() + extra > capacity {
        return Err(BenchError::Generation(format!("{extra} extra edges do not fit on {n} vertices")));
    }
    let mut added = 0;
    while added < extra {
        let a = rng.random_range(1..=n);
        let b = rng.random_range(1..=n);
        if a != b && seen.insert(key(a, b)) {
            edges.push((a, b));
            added += 1;
        }
    }
    Ok(())
}

/// Generates an instance of `kind` with `extra` random edges on top of its
/// skeleton. The property is verified exactly before returning; a few
/// reseeded attempts are made before giving up.
pub fn generate(kind: GraphKind, n: usize, m_bound: usize, extra: usize, seed: u64) -> Result<SparseGraph, BenchError> {
    if n == 0 {
        return Err(BenchError::Generation("empty vertex set".into()));
    }
    const ATTEMPTS: u64 = 4;
    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
        let mut edges = skeleton(kind, n, &mut rng)?;
        if edges.len() + extra > m_bound {
            return Err(BenchError::Generation(format!(
                "{} skeleton edges plus {extra} extra exceed the budget {m_bound}",
                edges.len()
            )));
        }
        add_random(&mut edges, n, kind.is_directed(), extra, &mut rng)?;
        let g = if kind.is_directed() {
            SparseGraph::directed(n, m_bound, edges)?
        } else {
            SparseGraph::undirected(n, m_bound, edges)?
        };
        if kind.property().holds(&g)? {
            return Ok(g);
        }
    }
    Err(BenchError::Generation(format!("no valid {kind:?} instance after {ATTEMPTS} attempts")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{connected_components, edge_connectivity, exact_diameter};

    #[test]
    fn kinds_have_their_property() {
        let g = generate(GraphKind::Connected, 100, 200, 30, 1).unwrap();
        assert_eq!(connected_components(&g).unwrap().count, 1);
        assert_eq!(g.edge_count(), 99 + 30);
        for (kind, n) in [
            (GraphKind::KConnected { k: 3 }, 40),
            (GraphKind::StronglyConnected, 30),
            (GraphKind::LowDiameter { diameter: 3 }, 50),
            (GraphKind::LowDiameter { diameter: 1 }, 9),
        ] {
            let g = generate(kind, n, 2000, 0, 5).unwrap();
            assert_eq!(g.edge_count(), skeleton_size(kind, n), "{kind:?}");
        }
        let g = generate(GraphKind::KConnected { k: 3 }, 60, 200, 20, 2).unwrap();
        assert!(edge_connectivity(&g).unwrap() >= 3);
        for d in 1..=4 {
            let extra = if d == 1 { 0 } else { 5 };
            let g = generate(GraphKind::LowDiameter { diameter: d }, 30, 500, extra, 3).unwrap();
            assert!(exact_diameter(&g).unwrap().unwrap() <= d);
        }
        let g = generate(GraphKind::StronglyConnected, 50, 100, 10, 4).unwrap();
        assert!(Property::StronglyConnected.holds(&g).unwrap());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate(GraphKind::Connected, 80, 200, 40, 9).unwrap();
        let b = generate(GraphKind::Connected, 80, 200, 40, 9).unwrap();
        let c = generate(GraphKind::Connected, 80, 200, 40, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(generate(GraphKind::Connected, 100, 50, 0, 1).is_err());
        assert!(generate(GraphKind::KConnected { k: 4 }, 4, 100, 0, 1).is_err());
    }
}
