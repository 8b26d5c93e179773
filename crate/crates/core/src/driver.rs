//! Runs level steps from `K1` until a level comes out empty.
//!
//! The first empty level's order is the computed number; the level before it
//! holds every extremal graph. Completed levels can be persisted as level
//! files and a run can be resumed from any of them.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use crate::canon::are_isomorphic;
use crate::enumerator::{
    default_workers, level_step_with, verify_membership, LevelSet, ProblemSpec, StepError, StepOptions,
};
use crate::formats::level::{self, LevelFileError};
use crate::graph::{Graph, MAX_N};

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Step(StepError),
    #[error(transparent)]
    LevelFile(#[from] LevelFileError),
    #[error("checkpoint member {index} fails membership for {spec}: {reason}")]
    Integrity { index: usize, spec: String, reason: String },
    #[error("could not write checkpoint {path}: {source}")]
    Checkpoint { path: PathBuf, source: std::io::Error },
    #[error("invalid limits: {0}")]
    Limits(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLimits {
    /// Largest level order the run may compute.
    pub max_order: usize,
    pub max_level_cardinality: usize,
    pub workers: usize,
    /// When set, every completed level is written here.
    pub checkpoint_dir: Option<PathBuf>,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits {
            max_order: MAX_N,
            max_level_cardinality: usize::MAX,
            workers: default_workers(),
            checkpoint_dir: None,
        }
    }
}

impl RunLimits {
    fn check(&self) -> Result<(), DriverError> {
        if self.max_order == 0 || self.max_order > MAX_N {
            return Err(DriverError::Limits(format!("max_order must be in 1..={MAX_N}")));
        }
        if self.max_level_cardinality == 0 || self.workers == 0 {
            return Err(DriverError::Limits("cardinality cap and worker count must be positive".into()));
        }
        Ok(())
    }

    fn step_options(&self) -> StepOptions {
        StepOptions { workers: self.workers, max_cardinality: self.max_level_cardinality }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapReason {
    MaxOrder {
        max_order: usize,
    },
    Cardinality {
        order: usize,
        cap: usize,
    },
    /// Resumed from an empty level without the level before it.
    MissingPriorLevel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    /// Stopped early; `last_complete` is the highest fully computed level.
    Capped {
        reason: CapReason,
        last_complete: usize,
    },
    /// Completed after resuming from the level of this order.
    ResumedFrom {
        order: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub spec: ProblemSpec,
    /// `T_k(j)` or `R_k(i, j)`; `None` when capped before an empty level.
    pub value: Option<usize>,
    pub extremal_count: Option<usize>,
    /// Extremal graphs in canonical labelling, sorted by canonical key.
    pub extremal: Vec<Graph>,
    pub per_level_counts: BTreeMap<usize, usize>,
    /// Seconds spent producing each level.
    pub wall_times: BTreeMap<usize, f64>,
    pub status: RunStatus,
}

impl RunReport {
    pub fn is_complete(&self) -> bool {
        !matches!(self.status, RunStatus::Capped { .. })
    }
}

/// Called once per finished level with `(order, count, seconds)`.
pub type Progress<'a> = &'a mut dyn FnMut(usize, usize, f64);

pub fn compute_number(spec: &ProblemSpec, limits: &RunLimits) -> Result<RunReport, DriverError> {
    compute_number_with(spec, limits, &mut |_, _, _| {})
}

pub fn compute_number_with(
    spec: &ProblemSpec,
    limits: &RunLimits,
    progress: Progress<'_>,
) -> Result<RunReport, DriverError> {
    limits.check()?;
    let start = LevelSet::initial();
    persist(limits, spec, &start)?;
    let mut run = Run::new(*spec);
    run.record(&start, 0.0, progress);
    run.continue_from(start, None, limits, progress, RunStatus::Completed)
}

/// Continues a run from a checkpointed level. Every member is re-verified.
pub fn checkpoint_resume(spec: &ProblemSpec, checkpoint: &Path, limits: &RunLimits) -> Result<RunReport, DriverError> {
    checkpoint_resume_with(spec, checkpoint, limits, &mut |_, _, _| {})
}

pub fn checkpoint_resume_with(
    spec: &ProblemSpec,
    checkpoint: &Path,
    limits: &RunLimits,
    progress: Progress<'_>,
) -> Result<RunReport, DriverError> {
    limits.check()?;
    let file = std::fs::File::open(checkpoint).map_err(LevelFileError::Io)?;
    let level = level::read_level_for(std::io::BufReader::new(file), spec)?;
    for (index, g) in level.graphs().enumerate() {
        if !g.is_triangle_free() {
            return Err(integrity(index, spec, "contains a triangle"));
        }
        if !verify_membership(g, spec) {
            return Err(integrity(index, spec, "contains a forbidden set"));
        }
    }
    let order = level.order();
    let dir = checkpoint.parent().unwrap_or(Path::new("."));
    let mut run = Run::new(*spec);
    // Earlier levels of the same run, when present beside the checkpoint.
    for earlier in 1..order {
        if let Ok((l, s)) = level::read_level_file(&level::level_path(dir, spec, earlier)) {
            if &s == spec && l.order() == earlier {
                run.per_level_counts.insert(earlier, l.len());
            }
        }
    }
    let prior = if level.is_empty() && order > 1 {
        match level::read_level_file(&level::level_path(dir, spec, order - 1)) {
            Ok((l, s)) if &s == spec && l.order() == order - 1 => {
                for (index, g) in l.graphs().enumerate() {
                    if !verify_membership(g, spec) {
                        return Err(integrity(index, spec, "prior level member contains a forbidden set"));
                    }
                }
                run.per_level_counts.insert(order - 1, l.len());
                Some(l)
            }
            _ => None,
        }
    } else {
        None
    };
    if level.is_empty() && prior.is_none() {
        run.per_level_counts.insert(order, 0);
        return Ok(RunReport {
            spec: *spec,
            value: Some(order),
            extremal_count: None,
            extremal: Vec::new(),
            per_level_counts: run.per_level_counts,
            wall_times: run.wall_times,
            status: RunStatus::Capped { reason: CapReason::MissingPriorLevel, last_complete: order },
        });
    }
    run.record(&level, 0.0, progress);
    run.continue_from(level, prior, limits, progress, RunStatus::ResumedFrom { order })
}

fn integrity(index: usize, spec: &ProblemSpec, reason: &str) -> DriverError {
    DriverError::Integrity { index, spec: spec.to_string(), reason: reason.into() }
}

fn persist(limits: &RunLimits, spec: &ProblemSpec, level: &LevelSet) -> Result<(), DriverError> {
    if let Some(dir) = &limits.checkpoint_dir {
        let path = level::level_path(dir, spec, level.order());
        level::write_level_file(&path, level, spec).map_err(|source| DriverError::Checkpoint { path, source })?;
    }
    Ok(())
}

struct Run {
    spec: ProblemSpec,
    per_level_counts: BTreeMap<usize, usize>,
    wall_times: BTreeMap<usize, f64>,
}

impl Run {
    fn new(spec: ProblemSpec) -> Self {
        Run { spec, per_level_counts: BTreeMap::new(), wall_times: BTreeMap::new() }
    }

    fn record(&mut self, level: &LevelSet, secs: f64, progress: Progress<'_>) {
        self.per_level_counts.insert(level.order(), level.len());
        self.wall_times.insert(level.order(), secs);
        progress(level.order(), level.len(), secs);
    }

    fn continue_from(
        mut self,
        mut level: LevelSet,
        mut prior: Option<LevelSet>,
        limits: &RunLimits,
        progress: Progress<'_>,
        done: RunStatus,
    ) -> Result<RunReport, DriverError> {
        let spec = self.spec;
        loop {
            if level.is_empty() {
                let extremal: Vec<Graph> = prior.map(|p| p.graphs().copied().collect()).unwrap_or_default();
                return Ok(RunReport {
                    spec,
                    value: Some(level.order()),
                    extremal_count: Some(extremal.len()),
                    extremal,
                    per_level_counts: self.per_level_counts,
                    wall_times: self.wall_times,
                    status: done,
                });
            }
            if level.order() >= limits.max_order {
                return Ok(self.capped(CapReason::MaxOrder { max_order: limits.max_order }, level.order()));
            }
            let t0 = Instant::now();
            let next = match level_step_with(&level, &spec, &limits.step_options()) {
                Ok(next) => next,
                Err(StepError::CardinalityExceeded { order, cap }) => {
                    return Ok(self.capped(CapReason::Cardinality { order, cap }, level.order()));
                }
                Err(e) => return Err(DriverError::Step(e)),
            };
            let secs = t0.elapsed().as_secs_f64();
            persist(limits, &spec, &next)?;
            self.record(&next, secs, progress);
            prior = Some(std::mem::replace(&mut level, next));
        }
    }

    fn capped(self, reason: CapReason, last_complete: usize) -> RunReport {
        RunReport {
            spec: self.spec,
            value: None,
            extremal_count: None,
            extremal: Vec::new(),
            per_level_counts: self.per_level_counts,
            wall_times: self.wall_times,
            status: RunStatus::Capped { reason, last_complete },
        }
    }
}

/// One cell of the `T_k(k+i) = k+2i-1` probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub k: usize,
    pub i: usize,
    /// `k + 2i - 1`.
    pub predicted: usize,
    pub value: Option<usize>,
    pub extremal_count: Option<usize>,
    /// Some extremal graph is `K_{i-1, k+i-1}`.
    pub bipartite_witness_found: bool,
    pub status: RunStatus,
}

impl ProbeRow {
    pub fn agrees(&self) -> bool {
        self.value == Some(self.predicted) && self.bipartite_witness_found
    }
}

/// Computes `T_k(k+i)` for every `2 <= i <= k` with `k` in `ks` and compares
/// against the predicted value and bipartite extremal graph.
pub fn probe_conjecture(ks: RangeInclusive<usize>, limits: &RunLimits) -> Result<Vec<ProbeRow>, DriverError> {
    let mut rows = Vec::new();
    for k in ks {
        for i in 2..=k {
            rows.push(probe_cell(k, i, limits)?);
        }
    }
    Ok(rows)
}

pub fn probe_cell(k: usize, i: usize, limits: &RunLimits) -> Result<ProbeRow, DriverError> {
    let spec = ProblemSpec::threshold(k, k + i).expect("k + i >= 2");
    let report = compute_number(&spec, limits)?;
    let bipartite = Graph::complete_bipartite(i - 1, k + i - 1).ok();
    let found = bipartite.is_some_and(|b| report.extremal.iter().any(|g| are_isomorphic(g, &b)));
    Ok(ProbeRow {
        k,
        i,
        predicted: k + 2 * i - 1,
        value: report.value,
        extremal_count: report.extremal_count,
        bipartite_witness_found: found,
        status: report.status,
    })
}
