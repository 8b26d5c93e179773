//! Canonical labelling for isomorphism rejection.
//!
//! The canonical form of a graph is the relabelling, among all leaves of an
//! individualization-refinement search tree, whose row-major upper-triangular
//! adjacency bit string is lexicographically smallest. The tree:
//!
//! * root: the partition of the vertices by degree, refined to an equitable
//!   ordered partition (cells split by their neighbour counts in each cell);
//! * children: individualize each vertex of the first non-singleton cell, then
//!   refine again;
//! * leaves: discrete partitions, read as labellings (vertex -> position).
//!
//! Refinement never looks at vertex names, so the set of leaf encodings is an
//! isomorphism invariant and so is its minimum. Automorphisms discovered when
//! two leaves encode the same graph prune sibling branches in the same orbit
//! and let the search jump back to the divergence point.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, MAX_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("empty key")]
    Empty,
    #[error("key declares order {0}, above the maximum of {max}", max = MAX_N)]
    OrderTooLarge(usize),
    #[error("key for order {order} must be {expected} bytes, got {got}")]
    Length { order: usize, expected: usize, got: usize },
    #[error("key has non-zero padding bits")]
    Padding,
}

/// Isomorphism-class identity: one byte of order followed by the row-major
/// upper-triangular adjacency bits of the canonical relabelling, packed
/// most-significant bit first. Byte-wise ordering is the ordering used to pick
/// the canonical leaf.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonKey(Vec<u8>);

const fn key_len(order: usize) -> usize {
    1 + (order * order.saturating_sub(1) / 2).div_ceil(8)
}

impl CanonKey {
    /// Encodes `g` exactly as labelled (no canonicalization).
    pub fn encode_labelled(g: &Graph) -> CanonKey {
        let n = g.order();
        let mut bytes = vec![0u8; key_len(n)];
        bytes[0] = n as u8;
        let mut bit = 0usize;
        for u in 0..n {
            for v in u + 1..n {
                if g.has_edge(u, v) {
                    bytes[1 + bit / 8] |= 0x80 >> (bit % 8);
                }
                bit += 1;
            }
        }
        CanonKey(bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<CanonKey, CanonError> {
        let key = CanonKey(bytes.to_vec());
        key.decode()?;
        Ok(key)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0[0] as usize
    }

    /// The labelled graph this key encodes.
    pub fn decode(&self) -> Result<Graph, CanonError> {
        let &n = self.0.first().ok_or(CanonError::Empty)?;
        let n = n as usize;
        if n > MAX_N {
            return Err(CanonError::OrderTooLarge(n));
        }
        let expected = key_len(n);
        if self.0.len() != expected {
            return Err(CanonError::Length { order: n, expected, got: self.0.len() });
        }
        let mut edges = Vec::new();
        let mut bit = 0usize;
        for u in 0..n {
            for v in u + 1..n {
                if self.0[1 + bit / 8] & (0x80 >> (bit % 8)) != 0 {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        let used = n * n.saturating_sub(1) / 2;
        if !used.is_multiple_of(8) && self.0[expected - 1] & (0xFFu8 >> (used % 8)) != 0 {
            return Err(CanonError::Padding);
        }
        Ok(Graph::from_edges(n, &edges).expect("decoded pairs are in range and loop-free"))
    }
}

impl fmt::Debug for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonKey({})", hex::encode(&self.0))
    }
}

/// Canonical key of `g`; equal for two graphs iff they are isomorphic.
pub fn canonical_form(g: &Graph) -> CanonKey {
    CanonKey::encode_labelled(&canonical_graph(g))
}

/// `g` relabelled canonically.
pub fn canonical_graph(g: &Graph) -> Graph {
    let lab = canonical_labeling(g);
    g.relabel(&lab)
}

/// The canonical labelling: vertex `v` of `g` goes to position `lab[v]`.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let n = g.order();
    if n <= 1 {
        return (0..n).collect();
    }
    let mut search = Search::new(g);
    let root = degree_partition(g);
    let mut path = Vec::with_capacity(n);
    search.explore(root, &mut path);
    let best = search.best.expect("search visits at least one leaf");
    best.lab[..n].iter().map(|&p| p as usize).collect()
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.order() == h.order() && g.edge_count() == h.edge_count() && canonical_form(g) == canonical_form(h)
}

/// Cells of vertices with equal degree, ordered by ascending degree.
fn degree_partition(g: &Graph) -> Vec<u32> {
    let mut by_degree = [0u32; MAX_N + 1];
    for v in 0..g.order() {
        by_degree[g.degree(v)] |= 1 << v;
    }
    by_degree.iter().copied().filter(|&c| c != 0).collect()
}

/// Splits cells until every vertex of a cell has the same number of
/// neighbours in every cell. Sub-cells are ordered by ascending count.
fn refine(rows: &[u32], cells: &mut Vec<u32>) {
    let mut scratch = Vec::with_capacity(rows.len());
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            let splitter = cells[s];
            scratch.clear();
            for &cell in cells.iter() {
                if cell & (cell - 1) == 0 {
                    scratch.push(cell);
                    continue;
                }
                let mut groups = [0u32; MAX_N + 1];
                let mut lo = usize::MAX;
                let mut hi = 0;
                let mut rest = cell;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let c = (rows[v] & splitter).count_ones() as usize;
                    groups[c] |= 1 << v;
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
                if lo == hi {
                    scratch.push(cell);
                } else {
                    changed = true;
                    scratch.extend(groups[lo..=hi].iter().copied().filter(|&g| g != 0));
                }
            }
            std::mem::swap(cells, &mut scratch);
            s += 1;
        }
        if !changed {
            break;
        }
    }
}

/// True when every pair of cells is either fully joined or fully disjoint
/// (a cell with itself: a clique or independent). Every leaf below such a
/// partition then encodes the same graph.
fn is_homogeneous(rows: &[u32], cells: &[u32]) -> bool {
    cells.iter().all(|&a| {
        let v = a.trailing_zeros() as usize;
        cells.iter().all(|&b| {
            let c = (rows[v] & b).count_ones();
            let full = if a == b { b.count_ones() - 1 } else { b.count_ones() };
            c == 0 || c == full
        })
    })
}

#[derive(Clone)]
struct Leaf {
    /// Per position: the upper part of its permuted row, bit-reversed so that
    /// numeric order of the array is lexicographic order of the bit string.
    key: [u32; MAX_N],
    lab: [u8; MAX_N],
    path: Vec<u8>,
}

struct Search<'a> {
    rows: &'a [u32],
    n: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    /// Automorphisms found so far, as vertex maps.
    generators: Vec<[u8; MAX_N]>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph) -> Self {
        Search { rows: g.rows(), n: g.order(), first: None, best: None, generators: Vec::new() }
    }

    /// Returns `Some(depth)` when the caller chain should unwind to `depth`.
    fn explore(&mut self, mut cells: Vec<u32>, path: &mut Vec<u8>) -> Option<usize> {
        refine(self.rows, &mut cells);
        if cells.len() == self.n || is_homogeneous(self.rows, &cells) {
            return self.leaf(&cells, path);
        }
        let depth = path.len();
        let (target_idx, &target) = cells
            .iter()
            .enumerate()
            .find(|(_, c)| c.count_ones() > 1)
            .expect("non-discrete partition has a non-singleton cell");
        let mut explored = 0u32;
        let mut rest = target;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if explored != 0 && self.same_orbit_as_explored(path, w, explored) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target_idx]);
            child.push(1 << w);
            child.push(target & !(1 << w));
            child.extend_from_slice(&cells[target_idx + 1..]);
            path.push(w as u8);
            let jump = self.explore(child, path);
            path.pop();
            explored |= 1 << w;
            if let Some(to) = jump {
                if to < depth {
                    return Some(to);
                }
            }
        }
        None
    }

    fn same_orbit_as_explored(&self, path: &[u8], w: usize, explored: u32) -> bool {
        let mut parent: [u8; MAX_N] = std::array::from_fn(|i| i as u8);
        fn find(parent: &mut [u8; MAX_N], mut x: usize) -> usize {
            while parent[x] as usize != x {
                parent[x] = parent[parent[x] as usize];
                x = parent[x] as usize;
            }
            x
        }
        let mut any = false;
        for gamma in &self.generators {
            if path.iter().all(|&p| gamma[p as usize] == p) {
                any = true;
                for (x, &gx) in gamma.iter().enumerate().take(self.n) {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, gx as usize));
                    if a != b {
                        parent[a] = b as u8;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, w);
        let mut rest = explored;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if find(&mut parent, e) == root {
                return true;
            }
        }
        false
    }

    fn leaf(&mut self, cells: &[u32], path: &[u8]) -> Option<usize> {
        let n = self.n;
        let mut lab = [0u8; MAX_N];
        let mut pos = 0u8;
        for &cell in cells {
            let mut rest = cell;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                lab[v] = pos;
                pos += 1;
            }
        }
        let mut prow = [0u32; MAX_N];
        for u in 0..n {
            let mut row = 0u32;
            let mut rest = self.rows[u];
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                row |= 1 << lab[v];
            }
            prow[lab[u] as usize] = row;
        }
        let mut key = [0u32; MAX_N];
        for (u, k) in key.iter_mut().enumerate().take(n) {
            let upper = if u >= 31 { 0 } else { (1u32 << (31 - u)) - 1 };
            *k = prow[u].reverse_bits() & upper;
        }
        let leaf = Leaf { key, lab, path: path.to_vec() };
        let Some(first) = &self.first else {
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return None;
        };
        if leaf.key[..n] == first.key[..n] {
            let gamma = automorphism(&first.lab, &leaf.lab, n);
            self.generators.push(gamma);
            return Some(common_prefix(&first.path, path));
        }
        let best = self.best.as_ref().expect("best is set with first");
        match leaf.key[..n].cmp(&best.key[..n]) {
            std::cmp::Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            std::cmp::Ordering::Equal => {
                let gamma = automorphism(&best.lab, &leaf.lab, n);
                let back = common_prefix(&best.path, path);
                self.generators.push(gamma);
                Some(back)
            }
            std::cmp::Ordering::Greater => None,
        }
    }
}

/// The map `v -> earlier^-1(later(v))`, an automorphism when both labellings
/// produce the same graph.
fn automorphism(earlier: &[u8; MAX_N], later: &[u8; MAX_N], n: usize) -> [u8; MAX_N] {
    let mut inv = [0u8; MAX_N];
    for v in 0..n {
        inv[earlier[v] as usize] = v as u8;
    }
    let mut gamma: [u8; MAX_N] = std::array::from_fn(|i| i as u8);
    for v in 0..n {
        gamma[v] = inv[later[v] as usize];
    }
    gamma
}

fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}
