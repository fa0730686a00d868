//! Undirected simple graphs, linear arrangements and the degree/length
//! statistics the moment formulas are built from.
//!
//! Vertices are labelled `1..=n` and positions also run over `1..=n`, so an
//! edge `{u, v}` placed by an arrangement has length `|pos(u) - pos(v)|`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{ratio, ExactScalar};

/// Undirected simple graph on vertices `1..=n`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    /// Canonical `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
}

/// The three integers every moment formula depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphStats {
    pub n: u64,
    pub m: u64,
    /// Σ k_i², the n-scaled second moment of degree (defined for n = 0).
    pub sum_k2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndependentPairs {
    /// Unordered pairs of distinct edges, C(m, 2).
    pub q1: u64,
    /// Unordered pairs of edges sharing a vertex, Σ C(k_i, 2).
    pub q2: u64,
    /// Unordered pairs of edges sharing no vertex.
    pub q: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialGraph {
    Empty,
    SingleEdge,
    LinearTree,
    StarTree,
    Complete,
}

impl SpecialGraph {
    pub const ALL: [SpecialGraph; 5] = [
        SpecialGraph::Empty,
        SpecialGraph::SingleEdge,
        SpecialGraph::LinearTree,
        SpecialGraph::StarTree,
        SpecialGraph::Complete,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialGraph::Empty => "empty",
            SpecialGraph::SingleEdge => "single_edge",
            SpecialGraph::LinearTree => "linear_tree",
            SpecialGraph::StarTree => "star_tree",
            SpecialGraph::Complete => "complete",
        }
    }

    /// Smallest `n` for which the graph can be built.
    pub fn min_vertices(self) -> usize {
        match self {
            SpecialGraph::Empty | SpecialGraph::Complete => 0,
            SpecialGraph::LinearTree | SpecialGraph::StarTree => 1,
            SpecialGraph::SingleEdge => 2,
        }
    }
}

impl fmt::Display for SpecialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Graph {
    /// Builds a graph, canonicalizing every pair to `u < v`.
    ///
    /// Rejects self-loops, endpoints outside `1..=n` and repeated edges
    /// (in either orientation), reporting the offending pair.
    pub fn new<I>(n: usize, edge_list: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        let mut degrees = vec![0; n];
        for (u, v) in edge_list {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(u, v));
            }
            degrees[u - 1] += 1;
            degrees[v - 1] += 1;
            edges.push(e);
        }
        edges.sort_unstable();
        Ok(Graph { n, edges, degrees })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            degrees: vec![0; n],
        }
    }

    /// Canonical instances: the linear tree is the path `1-2-...-n` and the
    /// star's hub is vertex 1.
    pub fn special(kind: SpecialGraph, n: usize) -> Result<Self> {
        if n < kind.min_vertices() {
            return Err(Error::domain(format!(
                "{kind} needs at least {} vertices, got {n}",
                kind.min_vertices()
            )));
        }
        let edges: Vec<(usize, usize)> = match kind {
            SpecialGraph::Empty => Vec::new(),
            SpecialGraph::SingleEdge => vec![(1, 2)],
            SpecialGraph::LinearTree => (1..n).map(|v| (v, v + 1)).collect(),
            SpecialGraph::StarTree => (2..=n).map(|v| (1, v)).collect(),
            SpecialGraph::Complete => (1..=n)
                .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
                .collect(),
        };
        Graph::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree of vertex `v` (1-based).
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v - 1]
    }

    /// Degrees indexed by `vertex - 1`.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn sum_k2(&self) -> u64 {
        self.degrees.iter().map(|&k| (k * k) as u64).sum()
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            n: self.n as u64,
            m: self.m() as u64,
            sum_k2: self.sum_k2(),
        }
    }

    /// ⟨k²⟩ = Σ k_i² / n. Undefined for the graph with no vertices.
    pub fn second_moment_degree(&self) -> Result<ExactScalar> {
        if self.n == 0 {
            return Err(Error::Undefined {
                what: "<k^2>",
                reason: "the graph has no vertices".into(),
            });
        }
        Ok(ratio(self.sum_k2(), self.n as u64))
    }

    pub fn degree_spectrum(&self) -> DegreeSpectrum {
        let mut counts = BTreeMap::new();
        for &k in &self.degrees {
            *counts.entry(k).or_insert(0) += 1;
        }
        DegreeSpectrum { counts }
    }

    pub fn independent_pairs(&self) -> IndependentPairs {
        let m = self.m() as u64;
        let q1 = m * m.saturating_sub(1) / 2;
        let q2: u64 = self
            .degrees
            .iter()
            .map(|&k| (k * k.saturating_sub(1) / 2) as u64)
            .sum();
        IndependentPairs { q1, q2, q: q1 - q2 }
    }

    /// Adjacency lists indexed by `vertex - 1`.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![1];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u - 1] {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.m() == self.n - 1 && self.is_connected()
    }

    fn check_arrangement(&self, a: &LinearArrangement) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::ArrangementSize {
                expected: self.n,
                got: a.len(),
            });
        }
        Ok(())
    }

    /// D, the sum over edges of `|pos(u) - pos(v)|`.
    pub fn sum_edge_lengths(&self, a: &LinearArrangement) -> Result<u64> {
        self.check_arrangement(a)?;
        Ok(self.sum_edge_lengths_unchecked(a.positions()))
    }

    /// D for a raw position vector (`positions[v - 1]` is the position of `v`).
    /// The caller guarantees it is a permutation of `1..=n`.
    pub(crate) fn sum_edge_lengths_unchecked(&self, positions: &[usize]) -> u64 {
        self.edges
            .iter()
            .map(|&(u, v)| positions[u - 1].abs_diff(positions[v - 1]) as u64)
            .sum()
    }

    pub fn length_spectrum(&self, a: &LinearArrangement) -> Result<LengthSpectrum> {
        self.check_arrangement(a)?;
        let mut counts = BTreeMap::new();
        for &(u, v) in &self.edges {
            let d = a.position(u).abs_diff(a.position(v));
            *counts.entry(d).or_insert(0) += 1;
        }
        Ok(LengthSpectrum { counts })
    }
}

/// A bijection from vertices `1..=n` onto positions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearArrangement {
    position: Vec<usize>,
}

impl LinearArrangement {
    /// `positions[i]` is the position of vertex `i + 1`.
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        let n = positions.len();
        let mut used = vec![false; n];
        for (i, &p) in positions.iter().enumerate() {
            if p == 0 || p > n {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("vertex {} has position {p}", i + 1),
                });
            }
            if std::mem::replace(&mut used[p - 1], true) {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("position {p} is used twice"),
                });
            }
        }
        Ok(LinearArrangement { position: positions })
    }

    pub fn identity(n: usize) -> Self {
        LinearArrangement {
            position: (1..=n).collect(),
        }
    }

    /// Builds the arrangement from the sequence of vertices read left to right.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("vertex {v} out of range"),
                });
            }
            if position[v - 1] != 0 {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("vertex {v} appears twice"),
                });
            }
            position[v - 1] = i + 1;
        }
        Ok(LinearArrangement { position })
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v - 1]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }
}

/// n(k): number of vertices of each degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeSpectrum {
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeSpectrum {
    pub fn vertex_count(&self) -> usize {
        self.counts.values().sum()
    }

    /// Σ k·n(k) = 2m.
    pub fn degree_sum(&self) -> u64 {
        self.counts.iter().map(|(&k, &c)| (k * c) as u64).sum()
    }

    pub fn sum_k2(&self) -> u64 {
        self.counts.iter().map(|(&k, &c)| (k * k * c) as u64).sum()
    }

    pub fn second_moment(&self) -> Result<ExactScalar> {
        match self.vertex_count() {
            0 => Err(Error::Undefined {
                what: "<k^2>",
                reason: "the spectrum has no vertices".into(),
            }),
            n => Ok(ratio(self.sum_k2(), n as u64)),
        }
    }
}

/// m(d): number of edges of each length under one arrangement.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LengthSpectrum {
    pub counts: BTreeMap<usize, usize>,
}

impl LengthSpectrum {
    pub fn edge_count(&self) -> usize {
        self.counts.values().sum()
    }

    /// Σ d·m(d) = D.
    pub fn total_length(&self) -> u64 {
        self.counts.iter().map(|(&d, &c)| (d * c) as u64).sum()
    }
}
