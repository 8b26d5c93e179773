//! Brute-force ground truth for small orders.
//!
//! Nothing here calls the canonical labelling or the pruned witness search;
//! isomorphism is decided by trying permutations and forbidden sets are found
//! by scanning every vertex subset.

use std::collections::HashMap;

use thiserror::Error;

use crate::canon::CanonKey;
use crate::enumerator::{level_step_with, LevelSet, ProblemSpec, StepError, StepOptions};
use crate::graph::{Graph, VertexSet};

/// Largest order for the labelled sweep.
pub const MAX_SWEEP_ORDER: usize = 8;
/// Largest order for permutation-based isomorphism.
pub const MAX_ISO_ORDER: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("order {order} is above the oracle limit of {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error(transparent)]
    Step(#[from] StepError),
}

fn check_order(order: usize, max: usize) -> Result<(), OracleError> {
    if order > max {
        return Err(OracleError::OrderTooLarge { order, max });
    }
    Ok(())
}

/// Every subset of size `size` of `0..n` as a bitmask.
fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = VertexSet> {
    (0u32..1 << n).filter(move |m| m.count_ones() as usize == size).map(VertexSet::from_bits)
}

pub fn brute_has_sparse(g: &Graph, k: usize, j: usize) -> bool {
    subsets_of_size(g.order(), j).any(|s| s.iter().all(|v| g.degree_in(v, s) <= k))
}

pub fn brute_has_dense(g: &Graph, k: usize, i: usize) -> bool {
    subsets_of_size(g.order(), i).any(|s| s.iter().all(|v| g.degree_in(v, s) + 1 + k >= i))
}

pub fn brute_triangle_free(g: &Graph) -> bool {
    let n = g.order();
    (0..n).all(|a| (a + 1..n).all(|b| (b + 1..n).all(|c| !(g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)))))
}

pub fn brute_membership(g: &Graph, spec: &ProblemSpec) -> bool {
    brute_triangle_free(g)
        && !brute_has_sparse(g, spec.k(), spec.j())
        && spec.i().is_none_or(|i| !brute_has_dense(g, spec.k(), i))
}

/// Whether some permutation maps `g` onto `h`. Different orders give `false`.
pub fn brute_isomorphic(g: &Graph, h: &Graph) -> Result<bool, OracleError> {
    check_order(g.order(), MAX_ISO_ORDER)?;
    check_order(h.order(), MAX_ISO_ORDER)?;
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    let mut image = vec![usize::MAX; g.order()];
    Ok(extend_map(g, h, &mut image, 0, 0))
}

/// Tries every image for vertex `u`, rejecting partial maps that already
/// disagree on an edge between mapped vertices.
fn extend_map(g: &Graph, h: &Graph, image: &mut [usize], u: usize, used: u32) -> bool {
    if u == g.order() {
        return true;
    }
    for x in 0..h.order() {
        if used >> x & 1 == 1 || g.degree(u) != h.degree(x) {
            continue;
        }
        if (0..u).all(|w| g.has_edge(u, w) == h.has_edge(x, image[w])) {
            image[u] = x;
            if extend_map(g, h, image, u + 1, used | 1 << x) {
                return true;
            }
        }
    }
    false
}

/// Visits every labelled triangle-free graph on `n` vertices. Pairs are
/// decided in column-major order and an edge is refused when its endpoints
/// already share a neighbour.
fn for_each_labelled_triangle_free<F: FnMut(&Graph)>(n: usize, mut f: F) {
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let mut rows = vec![0u32; n];
    sweep(&pairs, 0, &mut rows, &mut f);
}

fn sweep<F: FnMut(&Graph)>(pairs: &[(usize, usize)], at: usize, rows: &mut [u32], f: &mut F) {
    let Some(&(u, v)) = pairs.get(at) else {
        f(&Graph::from_rows(rows).expect("rows stay symmetric"));
        return;
    };
    sweep(pairs, at + 1, rows, f);
    if rows[u] & rows[v] == 0 {
        rows[u] |= 1 << v;
        rows[v] |= 1 << u;
        sweep(pairs, at + 1, rows, f);
        rows[u] &= !(1 << v);
        rows[v] &= !(1 << u);
    }
}

/// Sorted `(degree, sorted neighbour degrees)` per vertex.
type Invariant = Vec<(usize, Vec<usize>)>;

fn invariant(g: &Graph) -> Invariant {
    let mut inv: Vec<_> = (0..g.order())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    inv.sort_unstable();
    inv
}

/// One representative per isomorphism class among the labelled graphs
/// accepted by `keep`. The representative is the class member with the
/// smallest labelled encoding; output is sorted by that encoding.
fn classes<P: FnMut(&Graph) -> bool>(n: usize, mut keep: P) -> Vec<Graph> {
    let mut buckets: HashMap<Invariant, Vec<(CanonKey, Graph)>> = HashMap::new();
    for_each_labelled_triangle_free(n, |g| {
        if !keep(g) {
            return;
        }
        let key = CanonKey::encode_labelled(g);
        let bucket = buckets.entry(invariant(g)).or_default();
        match bucket.iter_mut().find(|(_, rep)| brute_isomorphic(rep, g).expect("order checked")) {
            Some(slot) => {
                if key < slot.0 {
                    *slot = (key, *g);
                }
            }
            None => bucket.push((key, *g)),
        }
    });
    let mut reps: Vec<(CanonKey, Graph)> = buckets.into_values().flatten().collect();
    reps.sort_by(|a, b| a.0.cmp(&b.0));
    reps.into_iter().map(|(_, g)| g).collect()
}

/// One graph per isomorphism class of triangle-free graphs on `n` vertices.
pub fn enumerate_all_triangle_free(n: usize) -> Result<Vec<Graph>, OracleError> {
    check_order(n, MAX_SWEEP_ORDER)?;
    Ok(classes(n, |_| true))
}

/// Isomorphism classes of order `n` avoiding the forbidden sets of `spec`.
pub fn oracle_level(n: usize, spec: &ProblemSpec) -> Result<Vec<Graph>, OracleError> {
    check_order(n, MAX_SWEEP_ORDER)?;
    Ok(classes(n, |g| brute_membership(g, spec)))
}

/// Smallest labelled encoding over all `n!` relabellings.
pub fn permutation_minimum_key(g: &Graph) -> Result<CanonKey, OracleError> {
    check_order(g.order(), MAX_SWEEP_ORDER)?;
    let mut pi: Vec<usize> = (0..g.order()).collect();
    let mut best = CanonKey::encode_labelled(g);
    permutations(&mut pi, 0, &mut |p| {
        let key = CanonKey::encode_labelled(&g.permute(p).expect("valid permutation"));
        if key < best {
            best = key;
        }
    });
    Ok(best)
}

fn permutations<F: FnMut(&[usize])>(pi: &mut [usize], at: usize, f: &mut F) {
    if at == pi.len() {
        f(pi);
        return;
    }
    for x in at..pi.len() {
        pi.swap(at, x);
        permutations(pi, at + 1, f);
        pi.swap(at, x);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub order: usize,
    pub oracle_count: usize,
    pub enumerator_count: usize,
    /// Oracle classes the enumerator did not produce.
    pub missing: Vec<Graph>,
    /// Enumerator graphs with no oracle class, or duplicating one.
    pub extra: Vec<Graph>,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.oracle_count == self.enumerator_count
    }
}

/// Runs the enumerator up to order `n` and matches each level against the
/// oracle under brute-force isomorphism.
pub fn compare_levels(n: usize, spec: &ProblemSpec, opts: &StepOptions) -> Result<Vec<Comparison>, OracleError> {
    check_order(n, MAX_SWEEP_ORDER)?;
    let mut level = LevelSet::initial();
    let mut out = Vec::new();
    for order in 1..=n {
        if order > 1 {
            level = level_step_with(&level, spec, opts)?;
        }
        out.push(compare_one(&level, &oracle_level(order, spec)?));
    }
    Ok(out)
}

fn compare_one(level: &LevelSet, oracle: &[Graph]) -> Comparison {
    let mut matched = vec![false; oracle.len()];
    let mut extra = Vec::new();
    for g in level.graphs() {
        let hit =
            oracle.iter().enumerate().find(|(idx, o)| !matched[*idx] && brute_isomorphic(o, g).expect("order checked"));
        match hit {
            Some((idx, _)) => matched[idx] = true,
            None => extra.push(*g),
        }
    }
    let missing = oracle.iter().zip(&matched).filter(|(_, m)| !**m).map(|(g, _)| *g).collect();
    Comparison { order: level.order(), oracle_count: oracle.len(), enumerator_count: level.len(), missing, extra }
}
