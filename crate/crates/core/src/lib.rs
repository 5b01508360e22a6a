//! Parallelized greedy submodular maximization over information graphs.
//!
//! The crate is organised around the pieces of the problem:
//!
//! * [`objective`] holds exact set functions (tabular, weighted cover and the
//!   closed-form witness families) together with exhaustive axiom and total
//!   curvature checks.
//! * [`structure`] covers iteration assignments, information graphs, the
//!   earliest-iteration schedule and the optimal / Turán constructions.
//! * [`graphmetrics`] computes exact graph invariants (clique, independence and
//!   clique cover numbers, sibling conditions, pseudo-independence).
//! * [`greedy`] runs the generalized greedy algorithm with controllable tie
//!   resolution and computes brute-force optima.
//! * [`adversarial`] builds instances whose greedy ratio meets an upper bound.
//! * [`bounds`] holds the closed-form ratio bounds and the certification
//!   harness that checks them against enumeration.
//!
//! All objective values are exact rationals ([`Rational`]); nothing in the
//! core touches floating point.

pub mod adversarial;
pub mod bounds;
pub mod cli;
mod error;
pub mod graphmetrics;
pub mod greedy;
pub mod io;
pub mod objective;
pub mod rational;
mod set;
pub mod structure;
pub mod suites;

pub use error::{Error, Result};
pub use rational::Rational;
pub use set::ElementSet;

/// Size limits for the exhaustive procedures.
///
/// Every exact search in the crate refuses inputs above its limit with
/// [`Error::Capacity`] instead of truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest ground set accepted by the axiom and curvature scans.
    pub ground: usize,
    /// Largest vertex count accepted by the exact graph invariants.
    pub graph: usize,
    /// Node budget for the greedy tie tree.
    pub tie_nodes: u64,
    /// Largest number of action profiles enumerated by the brute-force optimum.
    pub profiles: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ground: 16,
            graph: 20,
            tie_nodes: 1_000_000,
            profiles: 10_000_000,
        }
    }
}
