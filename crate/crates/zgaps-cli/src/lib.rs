//! Sweep engine and report commands behind the `zgaps` binary.
//!
//! A sweep walks an index range of zeta zeros in fixed shards of
//! [`sweep::SHARD`] gaps, computes each shard independently (in parallel),
//! and appends rows in index order through one writer. Output therefore does
//! not depend on the degree of parallelism, and a run resumed from a
//! checkpoint produces the same bytes as an uninterrupted one.


// `!(x < tol)` counts NaN as a failure
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod config;
pub mod error;
pub mod report;
pub mod sweep;

pub use config::{Format, Precision, Route, SweepConfig};
pub use error::{Category, CliError};
