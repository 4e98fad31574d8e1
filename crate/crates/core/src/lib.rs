//! Warm-started QAOA for Max-Cut with custom mixers.
//!
//! * [`graphs`]: instances, cut oracles, generators and edge-list IO.
//! * [`warmstart`]: relaxation solvers, projections, rotations, Bloch mapping
//!   and hyperplane rounding.
//! * [`simulator`]: exact statevector and phase-damped density-matrix QAOA,
//!   plus dense spectral checks of the mixer and interpolated Hamiltonian.
//! * [`optimizer`]: variational parameter search and grid sweeps.
//! * [`harness`]: the experiment protocol behind the `qwm` command line.
//!
//! Qubit `j` is bit `j` of a basis index (qubit 0 is least significant).

pub mod config;
pub mod error;
pub mod graphs;
pub mod harness;
pub mod optimizer;
pub mod seeding;
pub mod simulator;
pub mod warmstart;

pub use error::{Error, Result};
