//! Exact simulation of the warm-started QAOA circuit.
//!
//! Basis index bit `j` is qubit `j` (qubit 0 least significant). The circuit is
//! `e^{-iβ_p H_B} e^{-iγ_p H_C} ⋯ e^{-iβ_1 H_B} e^{-iγ_1 H_C} |s_0⟩` with
//! `H_C = ½ Σ w_ij (1 - Z_i Z_j)` (diagonal: the cut value of each basis
//! state) and `H_B = Σ_j n̂_j · σ_j`.

mod density;
mod spectral;
mod statevector;

pub use density::{phase_damping_channel, run_qaoa_noisy, DensityMatrix};
pub use spectral::{
    eigen_gap, hermitian_eigenvalues, interpolated_hamiltonian, is_irreducible, is_stoquastic,
    mixer_matrix, DenseMatrix,
};
pub use statevector::{
    apply_cost, apply_mixer, cost_diagonal, cut_distribution, expectation_cut, prepare_separable,
    run_qaoa, sample_cuts, QaoaCircuit, Statevector,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{invalid, Error, Result};
use crate::warmstart::BlochAngles;

/// Per-qubit rotation axes of the mixer `H_B = Σ_j (x_j X_j + y_j Y_j + z_j Z_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixerSpec {
    axes: Vec<[f64; 3]>,
}

impl MixerSpec {
    pub fn new(axes: Vec<[f64; 3]>) -> Result<Self> {
        for (j, a) in axes.iter().enumerate() {
            let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            if (norm - 1.0).abs() > TOL.unit_vector {
                return invalid(format!("mixer axis {j} has norm {norm}"));
            }
        }
        Ok(MixerSpec { axes })
    }

    /// The transverse-field mixer `Σ_j X_j`.
    pub fn standard(n: usize) -> Self {
        MixerSpec {
            axes: vec![[1.0, 0.0, 0.0]; n],
        }
    }

    pub fn axes(&self) -> &[[f64; 3]] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    /// `e^{-iβ n̂·σ} = cos β I - i sin β (n̂·σ)` for qubit `j`, row-major.
    pub(crate) fn unitary(&self, j: usize, beta: f64) -> [Complex64; 4] {
        let [x, y, z] = self.axes[j];
        let (s, c) = beta.sin_cos();
        [
            Complex64::new(c, -s * z),
            Complex64::new(-s * y, -s * x),
            Complex64::new(s * y, -s * x),
            Complex64::new(c, s * z),
        ]
    }
}

/// Custom mixer whose axes are the Bloch vectors of the initial state.
pub fn mixer_from_state(s: &BlochAngles) -> MixerSpec {
    MixerSpec {
        axes: s.points().iter().map(|p| p.cartesian()).collect(),
    }
}

/// Variational angles of a depth-`p` circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.len() != beta.len() {
            return Err(Error::DimensionMismatch {
                expected: gamma.len(),
                found: beta.len(),
            });
        }
        Ok(QaoaParams { gamma, beta })
    }

    pub fn zeros(p: usize) -> Self {
        QaoaParams {
            gamma: vec![0.0; p],
            beta: vec![0.0; p],
        }
    }

    pub fn depth(&self) -> usize {
        self.gamma.len()
    }

    /// Appends `(γ, β) = (0, 0)` layers up to depth `p`; these leave the
    /// output state unchanged.
    pub fn padded(&self, p: usize) -> Self {
        let mut out = self.clone();
        out.gamma.resize(p.max(self.depth()), 0.0);
        out.beta.resize(p.max(self.depth()), 0.0);
        out
    }

    /// `[γ_1..γ_p, β_1..β_p]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub fn from_flat(flat: &[f64]) -> Self {
        let p = flat.len() / 2;
        QaoaParams {
            gamma: flat[..p].to_vec(),
            beta: flat[p..2 * p].to_vec(),
        }
    }
}

/// Cost Hamiltonian diagonal: entry `b` is the cut value of bitstring `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostDiagonal {
    n: usize,
    values: Vec<f64>,
}

impl CostDiagonal {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}
