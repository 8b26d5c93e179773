//! Exhaustive computation of defective Ramsey numbers for triangle-free graphs.
//!
//! A set is k-sparse when it induces maximum degree at most `k` and k-dense
//! when each member misses at most `k` others of the set. `T_k(j)` is the
//! least order at which every triangle-free graph has a k-sparse `j`-set;
//! `R_k(i, j)` also accepts a k-dense `i`-set. Both are computed by growing
//! all admissible graphs one vertex at a time, up to isomorphism, until none
//! remain.
//!
//! ```
//! use trisparse::{compute_number, ProblemSpec, RunLimits};
//!
//! let spec = ProblemSpec::ramsey(1, 4, 4).unwrap();
//! let report = compute_number(&spec, &RunLimits::default()).unwrap();
//! assert_eq!(report.value, Some(6));
//! assert_eq!(report.extremal_count, Some(1));
//! ```

pub mod canon;
pub mod defect;
pub mod driver;
pub mod enumerator;
pub mod formats;
pub mod graph;
pub mod oracle;

pub use canon::{are_isomorphic, canonical_form, CanonKey};
pub use driver::{checkpoint_resume, compute_number, probe_conjecture, RunLimits, RunReport, RunStatus};
pub use enumerator::{level_step, verify_membership, LevelSet, ProblemSpec};
pub use graph::{Graph, GraphError, VertexSet, MAX_N};
