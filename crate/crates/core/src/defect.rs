//! k-sparse and k-dense sets.
//!
//! A set is k-sparse when it induces maximum degree at most `k`, and k-dense
//! when every member misses at most `k` other members. Both searches share one
//! branch-and-bound engine; dense sets are found as sparse sets of the
//! complement.

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefectError {
    #[error("graph contains a triangle; the dense-set cap only holds for triangle-free graphs")]
    NotTriangleFree,
}

/// A set certified k-sparse in the graph it was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SparseWitness {
    pub set: VertexSet,
    pub k: usize,
}

/// A set certified k-dense in the graph it was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DenseWitness {
    pub set: VertexSet,
    pub k: usize,
}

pub fn is_k_sparse_set(g: &Graph, s: VertexSet, k: usize) -> bool {
    s.iter().all(|v| g.degree_in(v, s) <= k)
}

pub fn is_k_dense_set(g: &Graph, s: VertexSet, k: usize) -> bool {
    let need = s.len().saturating_sub(1 + k);
    s.iter().all(|v| g.degree_in(v, s) >= need)
}

/// Depth-first search for a `target`-set that contains `required`, draws the
/// rest from `pool`, and induces maximum degree at most `k` over `rows`.
///
/// Vertices are tried lowest index first and included before excluded, so the
/// first hit is the lexicographically smallest qualifying vertex sequence.
pub(crate) fn find_sparse(rows: &[u32], required: u32, pool: u32, k: usize, target: usize) -> Option<u32> {
    let have = required.count_ones() as usize;
    if have > target || !is_sparse_bits(rows, required, k) {
        return None;
    }
    if have == target {
        return Some(required);
    }
    let cand = admissible(rows, required, pool & !required, k);
    descend(rows, required, cand, k, target)
}

#[inline]
fn is_sparse_bits(rows: &[u32], set: u32, k: usize) -> bool {
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (rows[v] & set).count_ones() as usize > k {
            return false;
        }
    }
    true
}

/// Members of `cand` that can join `chosen` without pushing any degree past `k`.
#[inline]
fn admissible(rows: &[u32], chosen: u32, cand: u32, k: usize) -> u32 {
    let mut blocked = 0u32;
    let mut rest = chosen;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (rows[u] & chosen).count_ones() as usize >= k {
            blocked |= rows[u];
        }
    }
    let mut out = cand & !blocked;
    let mut rest = out;
    while rest != 0 {
        let x = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (rows[x] & chosen).count_ones() as usize > k {
            out &= !(1 << x);
        }
    }
    out
}

fn descend(rows: &[u32], chosen: u32, mut cand: u32, k: usize, target: usize) -> Option<u32> {
    let have = chosen.count_ones() as usize;
    while cand != 0 {
        if have + (cand.count_ones() as usize) < target {
            return None;
        }
        let w = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        let next = chosen | 1 << w;
        if have + 1 == target {
            return Some(next);
        }
        let next_cand = admissible(rows, next, cand, k);
        if let Some(found) = descend(rows, next, next_cand, k, target) {
            return Some(found);
        }
    }
    None
}

fn complement_rows(g: &Graph) -> Vec<u32> {
    g.complement().rows().to_vec()
}

/// Some k-sparse `j`-set of `g`, the lexicographically smallest one.
pub fn has_k_sparse_set(g: &Graph, k: usize, j: usize) -> Option<SparseWitness> {
    find_sparse(g.rows(), 0, g.vertices().bits(), k, j).map(|set| SparseWitness { set: VertexSet::from_bits(set), k })
}

/// Some k-dense `i`-set of `g`.
pub fn has_k_dense_set(g: &Graph, k: usize, i: usize) -> Option<DenseWitness> {
    find_sparse(&complement_rows(g), 0, g.vertices().bits(), k, i)
        .map(|set| DenseWitness { set: VertexSet::from_bits(set), k })
}

/// A k-sparse `j`-set through vertex `v`, if one exists.
pub fn has_k_sparse_set_containing(g: &Graph, v: usize, k: usize, j: usize) -> Option<SparseWitness> {
    if v >= g.order() {
        return None;
    }
    find_sparse(g.rows(), 1 << v, g.vertices().bits(), k, j)
        .map(|set| SparseWitness { set: VertexSet::from_bits(set), k })
}

/// A k-dense `i`-set through vertex `v`, if one exists.
pub fn has_k_dense_set_containing(g: &Graph, v: usize, k: usize, i: usize) -> Option<DenseWitness> {
    if v >= g.order() {
        return None;
    }
    find_sparse(&complement_rows(g), 1 << v, g.vertices().bits(), k, i)
        .map(|set| DenseWitness { set: VertexSet::from_bits(set), k })
}

/// Size of a largest k-sparse set, with one witness of that size.
pub fn alpha_k(g: &Graph, k: usize) -> (usize, SparseWitness) {
    let mut best = SparseWitness { set: VertexSet::EMPTY, k };
    for j in 1..=g.order() {
        match has_k_sparse_set(g, k, j) {
            Some(w) => best = w,
            None => break,
        }
    }
    (best.set.len(), best)
}

/// `ceil(n / ceil((Δ+1)/(k+1)))`, the guaranteed size of a largest colour class.
pub fn recoloring_bound(order: usize, max_degree: usize, k: usize) -> usize {
    let colors = (max_degree + 1).div_ceil(k + 1);
    order.div_ceil(colors.max(1))
}

/// Final state of the local recolouring pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recoloring {
    pub colors: usize,
    /// Colour of each vertex.
    pub coloring: Vec<usize>,
    pub steps: usize,
}

/// Colours `g` with `ceil((Δ+1)/(k+1))` colours, starting from `v mod c`, and
/// repeatedly moves the lowest-index vertex with more than `k` same-coloured
/// neighbours to the lowest colour appearing at most `k` times around it.
/// Each move strictly lowers the number of monochromatic edges, so the loop
/// ends with every colour class k-sparse.
pub fn recolor(g: &Graph, k: usize) -> Recoloring {
    let n = g.order();
    let colors = (g.max_degree() + 1).div_ceil(k + 1).max(1);
    let mut coloring: Vec<usize> = (0..n).map(|v| v % colors).collect();
    let mut classes = vec![0u32; colors];
    for (v, &c) in coloring.iter().enumerate() {
        classes[c] |= 1 << v;
    }
    let mut steps = 0;
    loop {
        let violator = (0..n).find(|&v| (g.rows()[v] & classes[coloring[v]]).count_ones() as usize > k);
        let Some(v) = violator else { break };
        let row = g.rows()[v];
        let target = (0..colors)
            .find(|&c| (row & classes[c]).count_ones() as usize <= k)
            .expect("a colour with at most k occurrences exists whenever d(v) <= Δ");
        classes[coloring[v]] &= !(1 << v);
        classes[target] |= 1 << v;
        coloring[v] = target;
        steps += 1;
    }
    Recoloring { colors, coloring, steps }
}

/// A k-sparse set of size at least `recoloring_bound(n, Δ, k)`: the largest
/// colour class left by [`recolor`] (lowest colour on ties).
pub fn sparse_bound_witness(g: &Graph, k: usize) -> SparseWitness {
    let rc = recolor(g, k);
    let mut classes = vec![VertexSet::EMPTY; rc.colors];
    for (v, &c) in rc.coloring.iter().enumerate() {
        classes[c] = classes[c].with(v);
    }
    let set = classes.iter().copied().fold(VertexSet::EMPTY, |best, c| if c.len() > best.len() { c } else { best });
    SparseWitness { set, k }
}

/// `true` iff `g` has no k-dense `(2k+3)`-set. For triangle-free input this
/// always holds; a `false` would expose a bug in the dense predicate.
pub fn dense_cap_check(g: &Graph, k: usize) -> Result<bool, DefectError> {
    if !g.is_triangle_free() {
        return Err(DefectError::NotTriangleFree);
    }
    Ok(has_k_dense_set(g, k, 2 * k + 3).is_none())
}
