//! Classical workbench for variational amplitude amplification.
//!
//! Combinatorial cost functions are encoded as diagonal phase oracles
//! `exp(i p_s C(x))` and pushed through the oracle/diffusion loop. The crate
//! covers the whole pipeline: problem families ([`problems`]), exhaustive
//! solution spaces ([`spectrum`]), exact simulation ([`engine`]), sampled
//! estimates of the scale parameter ([`estimator`]), peak and correlation
//! mapping over p_s ([`sweep`]), the quantum/greedy hybrid solver
//! ([`hybrid`]) and gate-level oracle circuits ([`circuits`]).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod circuits;
pub mod engine;
pub mod error;
pub mod estimator;
pub mod hybrid;
pub mod problems;
pub mod rng;
pub mod spectrum;
pub mod sweep;

pub use error::{Error, Result};
pub use problems::{Assignment, Edge, Problem, ProblemKind};
pub use spectrum::{Direction, SolutionSpace};
