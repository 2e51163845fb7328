//! Zeros, normalized gaps and argument branches of the Riemann zeta
//! function and of Dirichlet L-functions of small modulus.
//!
//! The pieces, bottom up:
//!
//! * [`special_fn`]: Riemann-Siegel theta, Lambert W.
//! * [`zeta_engine`]: Hardy Z, ζ off the line, zero scanning and counting.
//! * [`arg_tracker`]: a(t) by horizontal continuation, branch numbers.
//! * [`zero_solver`]: t_n from θ(t) + a(t) = (n − 3/2)π.
//! * [`gap_stats`]: normalized gaps, the inequality chain, sweep summaries.
//! * [`euler_arg`] and [`primes`]: a(t) from a truncated Euler product.
//! * [`lfunc`]: Dirichlet characters and L-functions, ingested zero files.
//! * [`extended`]: slow 128-bit evaluators for spot checks.

// `!(x > 0.0)` style guards are meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference values are quoted to full published precision
#![allow(clippy::excessive_precision)]

pub mod arg_tracker;
pub mod error;
pub mod euler_arg;
pub mod extended;
pub mod gap_stats;
pub mod lfunc;
pub mod primes;
pub mod special_fn;
pub mod zero_solver;
pub mod zeta_engine;

pub use error::{Error, Result};
