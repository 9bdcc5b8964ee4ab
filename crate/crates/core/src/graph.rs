//! Adjacency-list graphs with an explicit edge budget.
//!
//! Vertices are the integers `1..=n`. Every neighbor list is kept strictly
//! ascending, so "the i-th neighbor" is well defined and the text format
//! round-trips byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::GraphError;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseGraph {
    n: usize,
    m_bound: usize,
    directed: bool,
    // index 0 is unused so that vertex ids index directly
    out: Vec<Vec<Vertex>>,
    // empty unless directed
    inc: Vec<Vec<Vertex>>,
    edges: usize,
}

impl SparseGraph {
    /// Empty graph on `n` vertices.
    pub fn empty(n: usize, m_bound: usize, directed: bool) -> Self {
        SparseGraph {
            n,
            m_bound,
            directed,
            out: vec![Vec::new(); n + 1],
            inc: if directed {
                vec![Vec::new(); n + 1]
            } else {
                Vec::new()
            },
            edges: 0,
        }
    }

    pub fn undirected(
        n: usize,
        m_bound: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        Self::build(n, m_bound, false, edges)
    }

    pub fn directed(
        n: usize,
        m_bound: usize,
        arcs: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        Self::build(n, m_bound, true, arcs)
    }

    fn build(
        n: usize,
        m_bound: usize,
        directed: bool,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::empty(n, m_bound, directed);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.out[u].push(v);
            if directed {
                g.inc[v].push(u);
            } else {
                g.out[v].push(u);
            }
        }
        let mut count = 0;
        for v in 1..=n {
            g.out[v].sort_unstable();
            if let Some(w) = g.out[v].windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::ParallelEdge(v, w[0]));
            }
            count += g.out[v].len();
            if directed {
                g.inc[v].sort_unstable();
            }
        }
        g.edges = if directed { count } else { count / 2 };
        if g.edges > m_bound {
            return Err(GraphError::OverBudget {
                edges: g.edges,
                m_bound,
            });
        }
        Ok(g)
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_bound(&self) -> usize {
        self.m_bound
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    /// Neighbors of `v` (out-neighbors for directed graphs), ascending.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out[v]
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out[v]
    }

    /// In-neighbors of `v`. Equals [`neighbors`](Self::neighbors) for undirected graphs.
    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        if self.directed {
            &self.inc[v]
        } else {
            &self.out[v]
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.out[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u >= 1 && u <= self.n && self.out[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs; undirected edges are reported once with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let directed = self.directed;
        (1..=self.n).flat_map(move |u| {
            self.out[u]
                .iter()
                .copied()
                .filter(move |&v| directed || u < v)
                .map(move |v| (u, v))
        })
    }

    /// Same vertex set and budget with `extra` edges added (duplicates ignored).
    pub fn with_edges(
        &self,
        extra: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut all: Vec<(Vertex, Vertex)> = self.edges().collect();
        for (u, v) in extra {
            if !self.has_edge(u, v) && (self.directed || !self.has_edge(v, u)) {
                all.push(if self.directed || u < v { (u, v) } else { (v, u) });
            }
        }
        all.sort_unstable();
        all.dedup();
        Self::build(self.n, self.m_bound.max(all.len()), self.directed, all)
    }

    /// Same vertex set and budget with `removed` edges deleted.
    pub fn without_edges(&self, removed: &[(Vertex, Vertex)]) -> Self {
        let mut g = self.clone();
        for &(u, v) in removed {
            if let Ok(i) = g.out[u].binary_search(&v) {
                g.out[u].remove(i);
                if g.directed {
                    let j = g.inc[v].binary_search(&u).expect("in-list mirrors out-list");
                    g.inc[v].remove(j);
                } else {
                    let j = g.out[v].binary_search(&u).expect("symmetric adjacency");
                    g.out[v].remove(j);
                }
                g.edges -= 1;
            }
        }
        g
    }

    /// Copy of the graph with a different edge budget.
    pub fn with_m_bound(&self, m_bound: usize) -> Result<Self, GraphError> {
        if self.edges > m_bound {
            return Err(GraphError::OverBudget {
                edges: self.edges,
                m_bound,
            });
        }
        let mut g = self.clone();
        g.m_bound = m_bound;
        Ok(g)
    }

    /// Serializes to the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n * 8 + self.edges * 6);
        let _ = writeln!(s, "{} {} {}", self.n, self.m_bound, u8::from(self.directed));
        for v in 1..=self.n {
            let _ = write!(s, "{v}:");
            for &w in &self.out[v] {
                let _ = write!(s, " {w}");
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let perr = |line: usize, message: String| GraphError::Parse { line, message };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| perr(1, "missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(perr(1, format!("expected `n m_bound d`, got `{header}`")));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| perr(1, format!("`{s}` is not a non-negative integer")))
        };
        let n = num(fields[0])?;
        let m_bound = num(fields[1])?;
        let directed = match fields[2] {
            "0" => false,
            "1" => true,
            other => return Err(perr(1, format!("directedness flag must be 0 or 1, got `{other}`"))),
        };

        let mut g = Self::empty(n, m_bound, directed);
        let mut entries = 0usize;
        for v in 1..=n {
            let lineno = v + 1;
            let line = lines
                .next()
                .ok_or_else(|| perr(lineno, format!("missing adjacency line for vertex {v}")))?;
            let (label, rest) = line
                .split_once(':')
                .ok_or_else(|| perr(lineno, "expected `v: neighbors`".into()))?;
            if label.trim().parse::<usize>().ok() != Some(v) {
                return Err(perr(lineno, format!("expected label {v}, got `{}`", label.trim())));
            }
            let mut prev = 0usize;
            for tok in rest.split_whitespace() {
                let w: usize = tok
                    .parse()
                    .map_err(|_| perr(lineno, format!("`{tok}` is not a vertex")))?;
                if w == 0 || w > n {
                    return Err(perr(lineno, format!("neighbor {w} outside 1..={n}")));
                }
                if w == v {
                    return Err(perr(lineno, format!("self-loop at {v}")));
                }
                if w <= prev {
                    return Err(perr(lineno, "neighbor list is not strictly ascending".into()));
                }
                prev = w;
                g.out[v].push(w);
                entries += 1;
            }
        }
        if let Some((i, extra)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
            return Err(perr(n + 2 + i, format!("unexpected trailing content `{extra}`")));
        }

        if directed {
            for u in 1..=n {
                for idx in 0..g.out[u].len() {
                    let w = g.out[u][idx];
                    g.inc[w].push(u);
                }
            }
            g.edges = entries;
        } else {
            for u in 1..=n {
                for &w in &g.out[u] {
                    if g.out[w].binary_search(&u).is_err() {
                        return Err(perr(
                            u + 1,
                            format!("edge ({u}, {w}) is missing from vertex {w}'s list"),
                        ));
                    }
                }
            }
            g.edges = entries / 2;
        }
        if g.edges > m_bound {
            return Err(perr(
                1,
                format!("{} edges exceed the declared edge budget {m_bound}", g.edges),
            ));
        }
        Ok(g)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, GraphError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| GraphError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), GraphError> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|source| GraphError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Distance between two graphs over the same vertex set: the number of
/// unordered pairs that are an edge in exactly one of them, over `m_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphDistance {
    pub differing_pairs: usize,
    pub m_bound: usize,
}

impl GraphDistance {
    pub fn value(&self) -> f64 {
        self.differing_pairs as f64 / self.m_bound as f64
    }

    pub fn is_zero(&self) -> bool {
        self.differing_pairs == 0
    }
}

pub fn graph_distance(a: &SparseGraph, b: &SparseGraph) -> Result<GraphDistance, GraphError> {
    if a.n != b.n || a.m_bound != b.m_bound || a.directed != b.directed {
        return Err(GraphError::Incompatible(format!(
            "(n, m_bound, directed) = ({}, {}, {}) vs ({}, {}, {})",
            a.n, a.m_bound, a.directed, b.n, b.m_bound, b.directed
        )));
    }
    let mut differing = 0;
    for v in 1..=a.n {
        differing += sorted_symmetric_difference(&a.out[v], &b.out[v]);
    }
    // each undirected pair was seen from both endpoints
    if !a.directed {
        differing /= 2;
    }
    Ok(GraphDistance {
        differing_pairs: differing,
        m_bound: a.m_bound,
    })
}

fn sorted_symmetric_difference(x: &[Vertex], y: &[Vertex]) -> usize {
    let (mut i, mut j, mut d) = (0, 0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => {
                d += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                d += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    d + (x.len() - i) + (y.len() - j)
}
