//! Dense graphs over vertex set 0..n with bit-row adjacency.
//!
//! Invariants: adjacency is symmetric and irreflexive. Constructors and
//! parsers check both before returning a graph; mutation goes through
//! [`Graph::add_edge`] / [`Graph::remove_edge`], which preserve them.

use crate::bits::VertexSet;
use crate::rng::rng_from_seed;
use rand::RngCore;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("operation undefined on the empty graph")]
    EmptyGraph,
    #[error("operation undefined on an empty vertex set")]
    EmptySet,
    #[error("vertex {0} out of range for graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("sets must be disjoint")]
    NotDisjoint,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<VertexSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, rows: vec![VertexSet::new(n); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        g.assert_valid();
        Ok(g)
    }

    #[inline]
    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange(v, self.n))
        }
    }

    /// Full symmetry + irreflexivity scan; cheap at the sizes this crate
    /// works with, so constructors and parsers run it unconditionally.
    pub fn assert_valid(&self) {
        for v in 0..self.n {
            assert!(!self.rows[v].contains(v), "self-loop at {}", v);
            for u in self.rows[v].iter() {
                assert!(self.rows[u].contains(v), "asymmetric edge {}-{}", v, u);
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at {}", u);
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].remove(v);
        self.rows[v].remove(u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.rows[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Vertex of maximum degree and its degree; ties go to the smallest
    /// vertex index.
    pub fn max_degree(&self) -> Result<(usize, usize), GraphError> {
        if self.n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut best = (0, self.degree(0));
        for v in 1..self.n {
            let d = self.degree(v);
            if d > best.1 {
                best = (v, d);
            }
        }
        Ok(best)
    }

    /// Companion to [`Graph::max_degree`], same tie-break.
    pub fn min_degree(&self) -> Result<(usize, usize), GraphError> {
        if self.n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut best = (0, self.degree(0));
        for v in 1..self.n {
            let d = self.degree(v);
            if d < best.1 {
                best = (v, d);
            }
        }
        Ok(best)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for v in 0..self.n {
            let mut row = self.rows[v].complement();
            row.remove(v);
            g.rows[v] = row;
        }
        g.assert_valid();
        g
    }

    /// Subgraph induced on `s`, relabelled to 0..|s| in increasing vertex
    /// order. Returns the graph and the map position -> original vertex.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let verts = s.to_vec();
        if let Some(&v) = verts.iter().find(|&&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        let mut g = Graph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g.assert_valid();
        Ok((g, verts))
    }

    /// No edge between `a` and `b`. Requires `a`, `b` disjoint and nonempty.
    pub fn are_anticomplete(&self, a: &VertexSet, b: &VertexSet) -> Result<bool, GraphError> {
        if a.is_empty() || b.is_empty() {
            return Err(GraphError::EmptySet);
        }
        if !a.is_disjoint(b) {
            return Err(GraphError::NotDisjoint);
        }
        Ok(!self.neighborhood_of_set(a).intersects(b))
    }

    /// Union of open neighbourhoods over `x`; may intersect `x` itself.
    pub fn neighborhood_of_set(&self, x: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n);
        for v in x.iter() {
            out.union_with(&self.rows[v]);
        }
        out
    }

    /// Erdos-Renyi sample: each pair independently an edge with probability
    /// `p`, pairs visited in lexicographic order ("gnp-v1" layout, chacha8
    /// stream). Same (n, p, seed) always gives the same graph.
    pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
        assert!((0.0..=1.0).contains(&p), "p must lie in [0,1]");
        let mut rng = rng_from_seed(seed);
        let threshold = (p * (u64::MAX as f64 + 1.0)) as u128;
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if (rng.next_u64() as u128) < threshold {
                    g.add_edge(u, v);
                }
            }
        }
        g.assert_valid();
        g
    }

    /// Deletes vertex `v`; remaining vertices are relabelled downward in
    /// order. Returns the map new position -> old vertex.
    pub fn delete_vertex(&self, v: usize) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_vertex(v)?;
        if self.n == 1 {
            return Ok((Graph::empty(0), Vec::new()));
        }
        let mut keep = VertexSet::full(self.n);
        keep.remove(v);
        self.induced_subgraph(&keep)
    }

    // Small named families used by tests, examples, and pattern parsing.

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.add_edge(n - 1, 0);
        g
    }

    /// Star with `leaves` leaves; vertex 0 is the centre.
    pub fn star(leaves: usize) -> Graph {
        let mut g = Graph::empty(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    /// Path 0-1-2-3 with a pendant leaf 4 at the third vertex.
    pub fn chair() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap()
    }

    /// True if acyclic (what pattern validation in the certifier needs).
    pub fn is_forest(&self) -> bool {
        let mut seen = vec![false; self.n];
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            // BFS with parent tracking; a revisit means a cycle.
            let mut queue = std::collections::VecDeque::from([(start, usize::MAX)]);
            seen[start] = true;
            while let Some((v, parent)) = queue.pop_front() {
                for u in self.rows[v].iter() {
                    if u == parent {
                        continue;
                    }
                    if seen[u] {
                        return false;
                    }
                    seen[u] = true;
                    queue.push_back((u, v));
                }
            }
        }
        true
    }

    /// Stable content hash (FNV-1a over n and the adjacency words).
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01B3);
            }
        };
        eat(self.n as u64);
        for v in 0..self.n {
            for u in self.rows[v].iter() {
                eat((v as u64) << 32 | u as u64);
            }
        }
        h
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}
