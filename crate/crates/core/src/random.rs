//! Seeded, stateless randomness.
//!
//! Every random quantity a reconstructor uses (vertex ranks, edge weights,
//! MIS coins) is a keyed hash of `(seed, namespace, arguments)`, so any
//! query can recompute it without shared state and repeated runs agree.

use std::cmp::Ordering;

use crate::graph::Vertex;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Kind of stream a [`RandomSource`] produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    Rank,
    EdgeWeight,
    MisCoin,
    Sampling,
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Rank => 0x52414e4b,
            Stream::EdgeWeight => 0x57454947,
            Stream::MisCoin => 0x4d495343,
            Stream::Sampling => 0x53414d50,
        }
    }
}

/// A namespaced pseudorandom function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSource {
    seed: u64,
    stream: Stream,
    level: u32,
    key: u64,
}

/// Value in (0, 1] paired with the vertex id; ordered lexicographically,
/// so distinct vertices never tie.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank {
    pub value: f64,
    pub vertex: Vertex,
}

impl Eq for Rank {}

impl PartialOrd for Rank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rank {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.vertex.cmp(&other.vertex))
    }
}

impl RandomSource {
    pub fn new(seed: u64, stream: Stream) -> Self {
        Self::at_level(seed, stream, 0)
    }

    /// A stream tagged with a recursion level (fresh per level).
    pub fn at_level(seed: u64, stream: Stream, level: u32) -> Self {
        let key = mix64(mix64(seed ^ GOLDEN) ^ mix64(stream.tag().wrapping_add(GOLDEN)))
            ^ mix64(u64::from(level).wrapping_mul(GOLDEN).wrapping_add(0x1234_5678));
        RandomSource {
            seed,
            stream,
            level,
            key: mix64(key),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> Stream {
        self.stream
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// 64 pseudorandom bits determined by `args`.
    pub fn word(&self, args: &[u64]) -> u64 {
        let mut h = self.key;
        for &a in args {
            h = mix64(h ^ mix64(a.wrapping_add(GOLDEN)));
        }
        h
    }

    /// Uniform-looking value in (0, 1] (53-bit resolution).
    pub fn unit(&self, args: &[u64]) -> f64 {
        ((self.word(args) >> 11) + 1) as f64 / (1u64 << 53) as f64
    }

    pub fn rank(&self, v: Vertex) -> Rank {
        Rank {
            value: self.unit(&[v as u64]),
            vertex: v,
        }
    }
}
