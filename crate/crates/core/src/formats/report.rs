//! Run reports as TOML.
//!
//! ```toml
//! [spec]
//! mode = "ramsey"        # or "threshold"; `i` is absent in threshold mode
//! k = 1
//! i = 4
//! j = 4
//!
//! [result]
//! status = "completed"   # "completed" | "resumed" | "capped"
//! value = 6
//! extremal_count = 1
//! extremal = ["DLo"]     # graph6, sorted by canonical key
//! # resumed_from = 5                       (status = "resumed")
//! # cap = "max-order" | "cardinality" | "missing-prior-level"
//! # cap_order, cap_limit, last_complete   (status = "capped")
//!
//! [[levels]]
//! order = 1
//! count = 1
//! seconds = 0.0          # omitted when timing is not rendered
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::graph6::{self, Graph6Error};
use crate::driver::{CapReason, RunReport, RunStatus};
use crate::enumerator::{ProblemSpec, SpecError};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed report: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("could not render report: {0}")]
    Render(#[from] toml::ser::Error),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("extremal graph {index}: {source}")]
    Graph6 { index: usize, source: Graph6Error },
    #[error("inconsistent report: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    pub extremal: bool,
    /// Per-level seconds; off when output must be reproducible byte for byte.
    pub timing: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { extremal: true, timing: true }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    spec: SpecDoc,
    result: ResultDoc,
    #[serde(default)]
    levels: Vec<LevelDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpecDoc {
    mode: String,
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    j: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct ResultDoc {
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extremal_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    resumed_from: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap_limit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    last_complete: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extremal: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LevelDoc {
    order: usize,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

pub fn render(report: &RunReport, opts: RenderOptions) -> Result<String, ReportError> {
    let spec = SpecDoc {
        mode: if report.spec.i().is_some() { "ramsey" } else { "threshold" }.into(),
        k: report.spec.k(),
        i: report.spec.i(),
        j: report.spec.j(),
    };
    let mut result = ResultDoc {
        status: String::new(),
        value: report.value,
        extremal_count: report.extremal_count,
        resumed_from: None,
        cap: None,
        cap_order: None,
        cap_limit: None,
        last_complete: None,
        extremal: opts.extremal.then(|| report.extremal.iter().map(graph6::encode).collect()),
    };
    match &report.status {
        RunStatus::Completed => result.status = "completed".into(),
        RunStatus::ResumedFrom { order } => {
            result.status = "resumed".into();
            result.resumed_from = Some(*order);
        }
        RunStatus::Capped { reason, last_complete } => {
            result.status = "capped".into();
            result.last_complete = Some(*last_complete);
            match reason {
                CapReason::MaxOrder { max_order } => {
                    result.cap = Some("max-order".into());
                    result.cap_limit = Some(*max_order);
                }
                CapReason::Cardinality { order, cap } => {
                    result.cap = Some("cardinality".into());
                    result.cap_order = Some(*order);
                    result.cap_limit = Some(*cap);
                }
                CapReason::MissingPriorLevel => result.cap = Some("missing-prior-level".into()),
            }
        }
    }
    let levels = report
        .per_level_counts
        .iter()
        .map(|(&order, &count)| LevelDoc {
            order,
            count,
            seconds: if opts.timing { report.wall_times.get(&order).copied() } else { None },
        })
        .collect();
    Ok(toml::to_string(&Document { spec, result, levels })?)
}

fn missing(field: &str, status: &str) -> ReportError {
    ReportError::Inconsistent(format!("`{field}` is required when status is `{status}`"))
}

/// Parses a rendered report. The extremal list is empty when it was not rendered.
pub fn parse(text: &str) -> Result<RunReport, ReportError> {
    let doc: Document = toml::from_str(text)?;
    let spec = match doc.spec.mode.as_str() {
        "threshold" if doc.spec.i.is_none() => ProblemSpec::threshold(doc.spec.k, doc.spec.j)?,
        "ramsey" => {
            let i = doc.spec.i.ok_or_else(|| missing("i", "ramsey"))?;
            ProblemSpec::ramsey(doc.spec.k, i, doc.spec.j)?
        }
        other => return Err(ReportError::Inconsistent(format!("unknown mode `{other}` or stray `i`"))),
    };
    let r = &doc.result;
    let status = match r.status.as_str() {
        "completed" => RunStatus::Completed,
        "resumed" => {
            RunStatus::ResumedFrom { order: r.resumed_from.ok_or_else(|| missing("resumed_from", "resumed"))? }
        }
        "capped" => {
            let last_complete = r.last_complete.ok_or_else(|| missing("last_complete", "capped"))?;
            let reason = match r.cap.as_deref() {
                Some("max-order") => {
                    CapReason::MaxOrder { max_order: r.cap_limit.ok_or_else(|| missing("cap_limit", "capped"))? }
                }
                Some("cardinality") => CapReason::Cardinality {
                    order: r.cap_order.ok_or_else(|| missing("cap_order", "capped"))?,
                    cap: r.cap_limit.ok_or_else(|| missing("cap_limit", "capped"))?,
                },
                Some("missing-prior-level") => CapReason::MissingPriorLevel,
                _ => return Err(missing("cap", "capped")),
            };
            RunStatus::Capped { reason, last_complete }
        }
        other => return Err(ReportError::Inconsistent(format!("unknown status `{other}`"))),
    };
    let extremal = r
        .extremal
        .iter()
        .flatten()
        .enumerate()
        .map(|(index, line)| graph6::decode(line).map_err(|source| ReportError::Graph6 { index, source }))
        .collect::<Result<Vec<_>, _>>()?;
    if r.extremal.is_some() && r.extremal_count.is_some_and(|c| c != extremal.len()) {
        return Err(ReportError::Inconsistent("extremal_count differs from the extremal list".into()));
    }
    let mut per_level_counts = BTreeMap::new();
    let mut wall_times = BTreeMap::new();
    for l in &doc.levels {
        per_level_counts.insert(l.order, l.count);
        if let Some(s) = l.seconds {
            wall_times.insert(l.order, s);
        }
    }
    Ok(RunReport {
        spec,
        value: r.value,
        extremal_count: r.extremal_count,
        extremal,
        per_level_counts,
        wall_times,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::{compute_number, RunLimits};

    fn limits() -> RunLimits {
        RunLimits { workers: 1, ..RunLimits::default() }
    }

    #[test]
    fn round_trip_completed() {
        let report = compute_number(&ProblemSpec::ramsey(1, 4, 4).unwrap(), &limits()).unwrap();
        let text = render(&report, RenderOptions::default()).unwrap();
        assert!(text.contains("value = 6"));
        assert!(text.contains("extremal = [\"DLo\"]"));
        assert_eq!(parse(&text).unwrap(), report);
    }

    #[test]
    fn reproducible_without_timing() {
        let spec = ProblemSpec::threshold(1, 4).unwrap();
        let a = render(&compute_number(&spec, &limits()).unwrap(), RenderOptions { extremal: true, timing: false })
            .unwrap();
        let b = render(&compute_number(&spec, &limits()).unwrap(), RenderOptions { extremal: true, timing: false })
            .unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("seconds"));
    }

    #[test]
    fn round_trip_capped() {
        let l = RunLimits { max_order: 4, ..limits() };
        let report = compute_number(&ProblemSpec::threshold(1, 4).unwrap(), &l).unwrap();
        let text = render(&report, RenderOptions::default()).unwrap();
        assert!(text.contains("status = \"capped\""));
        assert!(!text.contains("value ="));
        assert_eq!(parse(&text).unwrap(), report);
    }

    #[test]
    fn rejects_inconsistent() {
        let text = "[spec]\nmode = \"threshold\"\nk = 1\nj = 3\n[result]\nstatus = \"capped\"\n";
        assert!(matches!(parse(text), Err(ReportError::Inconsistent(_))));
        let text = "[spec]\nmode = \"threshold\"\nk = 1\nj = 3\n[result]\nstatus = \"completed\"\nextremal_count = 2\nextremal = [\"@\"]\n";
        assert!(matches!(parse(text), Err(ReportError::Inconsistent(_))));
    }
}
