//! Proximal operators of sorted nonconvex penalties.
//!
//! A sorted penalty applies a scalar penalty to the magnitudes of a vector
//! sorted in decreasing order, with non-increasing weights:
//! `Psi(x) = sum_i psi(|x|_(i); lam_i)`. With `psi(z; lam) = lam * z` this is
//! SLOPE. This crate provides
//!
//! - [`penalty`]: scalar penalties (l1, MCP, SCAD, log-sum, lq), their
//!   thresholds and scalar prox;
//! - [`isotonic`]: the pool-adjacent-violators engine with pluggable pooling;
//! - [`prox`]: the vector prox, D-PAV for nonconvex penalties and a
//!   local-minimizer verifier;
//! - [`oracle`]: brute-force references;
//! - [`solver`]: proximal gradient and majorization-minimization solvers;
//! - [`experiments`]: data generators, metrics and experiment runners behind
//!   the `sortedprox` binary.

pub mod error;
pub mod experiments;
pub mod isotonic;
pub mod oracle;
pub mod penalty;
pub mod prox;
pub mod solver;

pub use error::{Error, Result};
pub use penalty::{PenaltyFamily, ScalarProxResult};
pub use prox::{prox, ProxResult, SortedPenalty};
