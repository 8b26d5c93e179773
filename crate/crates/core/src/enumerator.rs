//! One-vertex extension of sub-extremal graphs, level by level.
//!
//! A level holds every triangle-free graph of one order (up to isomorphism)
//! with no forbidden set. Each member is extended by a new vertex joined to
//! an independent set, which keeps the child triangle-free; since the parent
//! had no forbidden set, only sets through the new vertex need checking.
//! Children are keyed by canonical form and deduplicated on insertion.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::canon::{canonical_graph, CanonKey};
use crate::defect::{find_sparse, has_k_dense_set, has_k_sparse_set};
use crate::graph::{Graph, GraphError, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("sparse-set size j must be at least 2, got {0}")]
    SparseSize(usize),
    #[error("dense-set size i must be at least 2, got {0}")]
    DenseSize(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("level of order {order} exceeded the cardinality cap of {cap}")]
    CardinalityExceeded { order: usize, cap: usize },
    #[error("could not build a worker pool: {0}")]
    Pool(String),
}

/// Which forbidden sets apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Only k-sparse `j`-sets are forbidden: the threshold `T_k(j)`.
    Threshold,
    /// k-dense `i`-sets are forbidden too: the defective Ramsey number.
    Ramsey { i: usize },
}

/// Parameters `(k, i, j)` of one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProblemSpec {
    k: usize,
    j: usize,
    mode: Mode,
}

impl ProblemSpec {
    pub fn threshold(k: usize, j: usize) -> Result<Self, SpecError> {
        if j < 2 {
            return Err(SpecError::SparseSize(j));
        }
        Ok(ProblemSpec { k, j, mode: Mode::Threshold })
    }

    pub fn ramsey(k: usize, i: usize, j: usize) -> Result<Self, SpecError> {
        if i < 2 {
            return Err(SpecError::DenseSize(i));
        }
        let mut spec = Self::threshold(k, j)?;
        spec.mode = Mode::Ramsey { i };
        Ok(spec)
    }

    /// `threshold` when `i` is absent, `ramsey` otherwise.
    pub fn new(k: usize, i: Option<usize>, j: usize) -> Result<Self, SpecError> {
        match i {
            Some(i) => Self::ramsey(k, i, j),
            None => Self::threshold(k, j),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn i(&self) -> Option<usize> {
        match self.mode {
            Mode::Threshold => None,
            Mode::Ramsey { i } => Some(i),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            Mode::Threshold => write!(f, "T_{}({})", self.k, self.j),
            Mode::Ramsey { i } => write!(f, "R_{}({},{})", self.k, i, self.j),
        }
    }
}

/// All sub-extremal graphs of one order, keyed and sorted by canonical form.
/// Members are stored in their canonical labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    order: usize,
    members: Vec<(CanonKey, Graph)>,
}

impl LevelSet {
    /// The starting level `{K1}`.
    pub fn initial() -> Self {
        let k1 = Graph::empty(1).expect("order 1 fits");
        LevelSet::from_graphs(1, [k1])
    }

    /// Canonicalizes, deduplicates and sorts.
    pub fn from_graphs<I: IntoIterator<Item = Graph>>(order: usize, graphs: I) -> Self {
        let mut members: Vec<(CanonKey, Graph)> = graphs
            .into_iter()
            .map(|g| {
                debug_assert_eq!(g.order(), order);
                let c = canonical_graph(&g);
                (CanonKey::encode_labelled(&c), c)
            })
            .collect();
        members.sort_by(|a, b| a.0.cmp(&b.0));
        members.dedup_by(|a, b| a.0 == b.0);
        LevelSet { order, members }
    }

    pub fn empty(order: usize) -> Self {
        LevelSet { order, members: Vec::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[(CanonKey, Graph)] {
        &self.members
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Graph> {
        self.members.iter().map(|(_, g)| g)
    }
}

/// Full check: triangle-free, no k-sparse `j`-set, and in Ramsey mode no
/// k-dense `i`-set.
pub fn verify_membership(g: &Graph, spec: &ProblemSpec) -> bool {
    g.is_triangle_free()
        && has_k_sparse_set(g, spec.k, spec.j).is_none()
        && spec.i().is_none_or(|i| has_k_dense_set(g, spec.k, i).is_none())
}

/// Whether a forbidden set passes through vertex `v`. `comp` holds the
/// complement rows, needed only in Ramsey mode.
#[inline]
fn has_forbidden_through(g: &Graph, comp: &[u32], v: usize, spec: &ProblemSpec) -> bool {
    let all = g.vertices().bits();
    if find_sparse(g.rows(), 1 << v, all, spec.k, spec.j).is_some() {
        return true;
    }
    match spec.mode {
        Mode::Threshold => false,
        Mode::Ramsey { i } => find_sparse(comp, 1 << v, all, spec.k, i).is_some(),
    }
}

/// Calls `keep` for each child of `g` (new vertex joined to an independent
/// set) that has no forbidden set through the new vertex, in ascending order
/// of the independent set's bitmask.
fn for_each_child<F: FnMut(Graph)>(g: &Graph, spec: &ProblemSpec, mut keep: F) -> Result<(), GraphError> {
    let n = g.order();
    if n >= crate::graph::MAX_N {
        return Err(GraphError::Capacity { needed: n + 1 });
    }
    let mut comp = [0u32; crate::graph::MAX_N];
    if let Mode::Ramsey { .. } = spec.mode {
        let full = VertexSet::full(n + 1).bits();
        for (u, c) in comp.iter_mut().enumerate().take(n) {
            // complement rows of the parent, extended below per child
            *c = full & !g.rows()[u] & !(1 << u);
        }
    }
    let mut result = Ok(());
    g.for_each_independent_set(|s| {
        if result.is_err() {
            return;
        }
        let child = match g.add_vertex(s) {
            Ok(c) => c,
            Err(e) => {
                result = Err(e);
                return;
            }
        };
        let mut crow = comp;
        if let Mode::Ramsey { .. } = spec.mode {
            let full = VertexSet::full(n + 1).bits();
            for u in s {
                crow[u] &= !(1 << n);
            }
            crow[n] = full & !s.bits() & !(1 << n);
        }
        if !has_forbidden_through(&child, &crow[..n + 1], n, spec) {
            keep(child);
        }
    });
    result
}

/// Children of `g` that survive the forbidden-set check, in deterministic
/// order. Isomorphic duplicates are kept.
pub fn extend_graph(g: &Graph, spec: &ProblemSpec) -> Result<Vec<Graph>, GraphError> {
    let mut out = Vec::new();
    for_each_child(g, spec, |c| out.push(c))?;
    Ok(out)
}

/// How to run a level step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOptions {
    /// Worker threads; 1 runs sequentially. Ignored without the `parallel` feature.
    pub workers: usize,
    /// Abort once the next level would hold more than this many graphs.
    pub max_cardinality: usize,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions { workers: default_workers(), max_cardinality: usize::MAX }
    }
}

/// Available hardware parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// The next level with default options.
pub fn level_step(level: &LevelSet, spec: &ProblemSpec) -> Result<LevelSet, StepError> {
    level_step_with(level, spec, &StepOptions::default())
}

/// Extends every member, deduplicates by canonical key and sorts. The result
/// does not depend on the worker count.
pub fn level_step_with(level: &LevelSet, spec: &ProblemSpec, opts: &StepOptions) -> Result<LevelSet, StepError> {
    #[cfg(feature = "parallel")]
    if opts.workers > 1 {
        return parallel::step(level, spec, opts);
    }
    sequential_step(level, spec, opts)
}

fn finish(order: usize, mut members: Vec<(CanonKey, Graph)>) -> LevelSet {
    members.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    LevelSet { order, members }
}

fn keyed(child: &Graph) -> (CanonKey, Graph) {
    let c = canonical_graph(child);
    (CanonKey::encode_labelled(&c), c)
}

/// Single-threaded level step.
pub fn sequential_step(level: &LevelSet, spec: &ProblemSpec, opts: &StepOptions) -> Result<LevelSet, StepError> {
    let order = level.order + 1;
    let mut seen: HashMap<CanonKey, Graph> = HashMap::new();
    for g in level.graphs() {
        for_each_child(g, spec, |child| {
            let (key, canon) = keyed(&child);
            seen.entry(key).or_insert(canon);
        })?;
        if seen.len() > opts.max_cardinality {
            return Err(StepError::CardinalityExceeded { order, cap: opts.max_cardinality });
        }
    }
    Ok(finish(order, seen.into_iter().collect()))
}

#[cfg(feature = "parallel")]
mod parallel {
    use std::sync::atomic::{AtomicBool, Ordering};

    use dashmap::DashMap;
    use rayon::prelude::*;

    use super::*;

    pub(super) fn step(level: &LevelSet, spec: &ProblemSpec, opts: &StepOptions) -> Result<LevelSet, StepError> {
        let order = level.order + 1;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| StepError::Pool(e.to_string()))?;
        let seen: DashMap<CanonKey, Graph> = DashMap::new();
        let over = AtomicBool::new(false);
        pool.install(|| {
            level.members.par_iter().try_for_each(|(_, g)| {
                if over.load(Ordering::Relaxed) {
                    return Ok(());
                }
                for_each_child(g, spec, |child| {
                    let (key, canon) = keyed(&child);
                    seen.entry(key).or_insert(canon);
                })?;
                if seen.len() > opts.max_cardinality {
                    over.store(true, Ordering::Relaxed);
                }
                Ok::<(), StepError>(())
            })
        })?;
        if over.load(Ordering::Relaxed) || seen.len() > opts.max_cardinality {
            return Err(StepError::CardinalityExceeded { order, cap: opts.max_cardinality });
        }
        Ok(finish(order, seen.into_iter().collect()))
    }
}
