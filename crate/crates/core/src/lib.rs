//! Root counts and solution structure for algebraic Kuramoto systems.
//!
//! The crate derives complex root counts of coupled-oscillator equilibrium
//! equations from network combinatorics (adjacency-polytope volumes, coupling
//! strata, balanced subnetworks), constructs positive-dimensional solution
//! orbits in closed form, and verifies every count numerically with a
//! polyhedral homotopy continuation solver.

pub mod algsys;
pub mod census;
pub mod error;
pub mod homotopy;
pub mod network;
pub mod numeric;
pub mod polytope;
pub mod report;

pub use error::{Error, Result};
pub use network::{parse_network, Network};
