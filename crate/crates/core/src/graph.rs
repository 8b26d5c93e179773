//! Small undirected simple graphs stored as one `u32` adjacency row per vertex.
//!
//! Every search state in the crate is a [`Graph`] of at most [`MAX_N`]
//! vertices, so all set operations on neighbourhoods are single machine-word
//! operations. Graphs are `Copy` values and never mutated in place.

use std::fmt;

use thiserror::Error;

/// Largest supported order.
pub const MAX_N: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("order {order} exceeds the maximum of {max}", max = MAX_N)]
    OrderTooLarge { order: usize },
    #[error("edge ({u}, {v}) has an endpoint outside 0..{order}")]
    EndpointOutOfRange { u: usize, v: usize, order: usize },
    #[error("loop ({v}, {v}) is not allowed in a simple graph")]
    Loop { v: usize },
    #[error("capacity exceeded: result would need {needed} vertices (max {max})", max = MAX_N)]
    Capacity { needed: usize },
    #[error("vertex set {set:#x} is not contained in 0..{order}")]
    SetOutOfRange { set: u32, order: usize },
    #[error("not a permutation of 0..{order}: {reason}")]
    NotAPermutation { order: usize, reason: String },
    #[error("cycle length must be at least 3, got {n}")]
    CycleTooShort { n: usize },
    #[error("blow-up multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("adjacency invariant violated: {0}")]
    Invariant(String),
}

/// A subset of `0..MAX_N` as a bitmask; bit `v` set means vertex `v` is a member.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_bits(bits: u32) -> Self {
        VertexSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_N);
        VertexSet(1 << v)
    }

    /// `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_N);
        if n >= 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << n) - 1)
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        vs.into_iter().fold(VertexSet::EMPTY, |s, v| s.with(v))
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_N && self.0 >> v & 1 == 1
    }

    #[inline]
    #[must_use]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    #[inline]
    #[must_use]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, v) in self.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Members;
    fn into_iter(self) -> Members {
        Members(self.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_vertices(iter)
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// An undirected simple graph on vertices `0..order`.
///
/// Invariants: rows are symmetric, irreflexive, and carry no bits at
/// positions `>= order`. Every constructor upholds them.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    order: u8,
    adj: [u32; MAX_N],
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_N {
            return Err(GraphError::OrderTooLarge { order: n });
        }
        Ok(Graph { order: n as u8, adj: [0; MAX_N] })
    }

    /// Builds a graph from a list of unordered vertex pairs. Duplicate pairs are
    /// harmless; loops and out-of-range endpoints are rejected.
    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(order)?;
        for &(u, v) in edges {
            if u >= order || v >= order {
                return Err(GraphError::EndpointOutOfRange { u, v, order });
            }
            if u == v {
                return Err(GraphError::Loop { v });
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        Ok(g)
    }

    /// Builds a graph directly from adjacency rows, checking every invariant.
    pub fn from_rows(rows: &[u32]) -> Result<Self, GraphError> {
        if rows.len() > MAX_N {
            return Err(GraphError::OrderTooLarge { order: rows.len() });
        }
        let mut adj = [0; MAX_N];
        adj[..rows.len()].copy_from_slice(rows);
        let g = Graph { order: rows.len() as u8, adj };
        g.validate()?;
        Ok(g)
    }

    /// Trusted constructor for rows already known to be valid.
    #[inline]
    pub(crate) fn from_rows_unchecked(order: usize, adj: [u32; MAX_N]) -> Self {
        let g = Graph { order: order as u8, adj };
        debug_assert!(g.validate().is_ok(), "{:?}", g.validate());
        g
    }

    /// Re-checks symmetry, irreflexivity and the high-bit invariant.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.order();
        let mask = VertexSet::full(n).bits();
        for u in 0..MAX_N {
            let row = self.adj[u];
            if u >= n {
                if row != 0 {
                    return Err(GraphError::Invariant(format!("row {u} set beyond order {n}")));
                }
                continue;
            }
            if row & !mask != 0 {
                return Err(GraphError::Invariant(format!("row {u} has bits beyond order {n}")));
            }
            if row >> u & 1 == 1 {
                return Err(GraphError::Invariant(format!("loop at {u}")));
            }
            for v in VertexSet::from_bits(row) {
                if self.adj[v] >> u & 1 == 0 {
                    return Err(GraphError::Invariant(format!("asymmetric pair ({u}, {v})")));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order as usize
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.order())
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    /// Adjacency rows `0..order`.
    #[inline]
    pub fn rows(&self) -> &[u32] {
        &self.adj[..self.order()]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Sorted (descending) degree sequence.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.order()).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order())
            .flat_map(move |u| VertexSet(self.adj[u] & !((2u64 << u) - 1) as u32).iter().map(move |v| (u, v)))
    }

    /// Degree of `v` inside `s`.
    #[inline]
    pub fn degree_in(&self, v: usize, s: VertexSet) -> usize {
        (self.adj[v] & s.0).count_ones() as usize
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges().all(|(u, v)| self.adj[u] & self.adj[v] == 0)
    }

    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| self.adj[v] & s.0 == 0)
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let full = VertexSet::full(n).bits();
        let mut adj = [0; MAX_N];
        for (v, row) in adj.iter_mut().enumerate().take(n) {
            *row = full & !self.adj[v] & !(1 << v);
        }
        Graph::from_rows_unchecked(n, adj)
    }

    /// Calls `f` on every independent set, the empty set included, in
    /// ascending order of bitmask value.
    pub fn for_each_independent_set<F: FnMut(VertexSet)>(&self, mut f: F) {
        fn rec<F: FnMut(VertexSet)>(adj: &[u32], top: usize, chosen: u32, f: &mut F) {
            if top == 0 {
                f(VertexSet(chosen));
                return;
            }
            let v = top - 1;
            // Excluding the highest undecided vertex first yields ascending values.
            rec(adj, v, chosen, f);
            if adj[v] & chosen == 0 {
                rec(adj, v, chosen | 1 << v, f);
            }
        }
        rec(&self.adj, self.order(), 0, &mut f);
    }

    pub fn independent_sets(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        self.for_each_independent_set(|s| out.push(s));
        out
    }

    /// Appends a vertex adjacent to exactly `s`. The new vertex gets index `order`.
    pub fn add_vertex(&self, s: VertexSet) -> Result<Graph, GraphError> {
        let n = self.order();
        if n >= MAX_N {
            return Err(GraphError::Capacity { needed: n + 1 });
        }
        if !s.is_subset(self.vertices()) {
            return Err(GraphError::SetOutOfRange { set: s.0, order: n });
        }
        let mut adj = self.adj;
        adj[n] = s.0;
        for v in s {
            adj[v] |= 1 << n;
        }
        Ok(Graph::from_rows_unchecked(n + 1, adj))
    }

    /// The subgraph induced by `s`, relabelled `0..|s|` in ascending original index.
    pub fn induced_subgraph(&self, s: VertexSet) -> Graph {
        let s = s.intersection(self.vertices());
        let verts = s.to_vec();
        let mut adj = [0; MAX_N];
        for (new_u, &u) in verts.iter().enumerate() {
            let mut row = 0u32;
            for (new_v, &v) in verts.iter().enumerate() {
                if self.adj[u] >> v & 1 == 1 {
                    row |= 1 << new_v;
                }
            }
            adj[new_u] = row;
        }
        Graph::from_rows_unchecked(verts.len(), adj)
    }

    /// Relabels vertex `u` as `pi[u]`.
    pub fn permute(&self, pi: &[usize]) -> Result<Graph, GraphError> {
        let n = self.order();
        if pi.len() != n {
            return Err(GraphError::NotAPermutation {
                order: n,
                reason: format!("length {} differs from order", pi.len()),
            });
        }
        let mut seen = 0u32;
        for &p in pi {
            if p >= n || seen >> p & 1 == 1 {
                return Err(GraphError::NotAPermutation {
                    order: n,
                    reason: format!("image {p} is out of range or repeated"),
                });
            }
            seen |= 1 << p;
        }
        Ok(self.relabel(pi))
    }

    /// `permute` without the bijection check.
    #[inline]
    pub(crate) fn relabel(&self, pi: &[usize]) -> Graph {
        let n = self.order();
        let mut adj = [0; MAX_N];
        for u in 0..n {
            let mut row = 0u32;
            for v in VertexSet(self.adj[u]) {
                row |= 1 << pi[v];
            }
            adj[pi[u]] = row;
        }
        Graph::from_rows_unchecked(n, adj)
    }

    /// `K_{p,l}` with parts `0..p` and `p..p+l`.
    pub fn complete_bipartite(p: usize, l: usize) -> Result<Graph, GraphError> {
        let n = p + l;
        if n > MAX_N {
            return Err(GraphError::Capacity { needed: n });
        }
        let left = VertexSet::full(p).bits();
        let right = VertexSet::full(n).bits() & !left;
        let mut adj = [0; MAX_N];
        for (v, row) in adj.iter_mut().enumerate().take(n) {
            *row = if v < p { right } else { left };
        }
        Ok(Graph::from_rows_unchecked(n, adj))
    }

    /// The cycle `0-1-..-(n-1)-0`.
    pub fn cycle(n: usize) -> Result<Graph, GraphError> {
        if n < 3 {
            return Err(GraphError::CycleTooShort { n });
        }
        if n > MAX_N {
            return Err(GraphError::Capacity { needed: n });
        }
        let edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// The path `0-1-..-(n-1)`.
    pub fn path(n: usize) -> Result<Graph, GraphError> {
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Lexicographic product with the edgeless graph on `t` vertices: vertex
    /// `v` becomes the independent block `v*t .. v*t+t`, and two blocks are
    /// fully joined exactly when their originals are adjacent.
    pub fn blow_up(&self, t: usize) -> Result<Graph, GraphError> {
        if t == 0 {
            return Err(GraphError::ZeroMultiplicity);
        }
        let n = self.order() * t;
        if n > MAX_N {
            return Err(GraphError::Capacity { needed: n });
        }
        let block = |v: usize| VertexSet::full(t).bits() << (v * t);
        let mut adj = [0; MAX_N];
        for v in 0..self.order() {
            let row = VertexSet(self.adj[v]).iter().fold(0u32, |acc, u| acc | block(u));
            for copy in 0..t {
                adj[v * t + copy] = row;
            }
        }
        Ok(Graph::from_rows_unchecked(n, adj))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.order())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}
