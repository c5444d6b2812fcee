//! Fair combinatorial optimization under the Generalized Gini Index (GGI).
//!
//! The crate maximizes the GGI of per-component values over assignment and
//! perfect-matching problems. It provides
//!
//! * GGI evaluation and weight schemes ([`ggi`]),
//! * instance generation and file I/O ([`instance`]),
//! * exact max-weight subsolvers ([`subsolvers`]),
//! * projection onto the dual-weight polytope ([`projection`]),
//! * the primal-dual Lagrangian heuristic ([`solver`]),
//! * brute-force optima and LP export ([`oracle`]),
//! * a benchmark harness ([`bench`]).

pub mod bench;
pub mod error;
pub mod ggi;
pub mod instance;
pub mod oracle;
pub mod projection;
pub mod solver;
pub mod subsolvers;

pub use error::{Error, Result};
pub use ggi::{WeightScheme, WeightVector};
pub use instance::{Instance, ProblemKind, Solution};
pub use solver::{solve, InitStrategy, SolverConfig, SolverReport, SubgradientSign};
