//! Numerical tolerances and problem-size caps shared by every module.

use crate::error::{Error, Result};

/// Environment variable that overrides every qubit cap at once.
pub const MAX_QUBITS_ENV: &str = "QWM_MAX_QUBITS";

/// Tolerance constants used for invariant checks.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Allowed deviation of a state norm or density-matrix trace from one.
    pub norm: f64,
    /// Entry-wise threshold for "is this matrix entry zero / negative".
    pub entry: f64,
    /// Allowed deviation of a relaxation vector's length from one.
    pub unit_vector: f64,
    /// Lowest eigenvalue accepted when checking positive semidefiniteness.
    pub psd: f64,
}

pub const TOL: Tolerances = Tolerances {
    norm: 1e-9,
    entry: 1e-12,
    unit_vector: 1e-9,
    psd: -1e-8,
};

/// Size caps for the exponential-cost code paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub statevector: usize,
    pub density: usize,
    pub dense: usize,
    pub brute_force: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            statevector: 20,
            density: 10,
            dense: 12,
            brute_force: 24,
        }
    }
}

impl Limits {
    /// Default caps, all replaced by `QWM_MAX_QUBITS` when it is set.
    pub fn from_env() -> Self {
        match std::env::var(MAX_QUBITS_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            Some(cap) => Limits {
                statevector: cap,
                density: cap,
                dense: cap,
                brute_force: cap,
            },
            None => Limits::default(),
        }
    }
}

pub(crate) fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::Capacity { what, n, cap })
    } else {
        Ok(())
    }
}
