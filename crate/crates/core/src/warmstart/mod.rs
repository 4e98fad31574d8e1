//! Classical warm-starts: relaxed Max-Cut solutions, their projections and
//! rotations, the map to single-qubit Bloch angles, and hyperplane rounding.

mod bloch;
mod relax;
mod rotation;
mod rounding;
mod select;

pub use bloch::{
    averaged_flip_probability, depth0_expected_cut, single_cut_epsilon_state, to_bloch,
};
pub use relax::{bm_local_solve, bm_objective, sdp_rank, sdp_solve, BmConfig, BmSolution};
pub use rotation::{rotate_uniform, rotate_vertex_at_top};
pub use rounding::{
    hyperplane_expected_cut, hyperplane_round, project_to_subspace, two_step_round,
};
pub use select::{
    select_warmstart, RotationScheme, Warmstart, WarmstartConfig, WarmstartMethod,
    WarmstartReport,
};

use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{invalid, Error, Result};
use crate::graphs::WeightedGraph;

/// `n` unit vectors in `R^rank`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxedSolution {
    rank: usize,
    data: Vec<f64>,
}

impl RelaxedSolution {
    /// Validates that every vector has unit length (within `TOL.unit_vector`).
    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return invalid("relaxed solution needs at least one vector");
        };
        let rank = first.len();
        if rank == 0 {
            return invalid("rank must be at least 1");
        }
        let mut data = Vec::with_capacity(rank * vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: v.len(),
                });
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > TOL.unit_vector {
                return invalid(format!("vector {i} has norm {norm}"));
            }
            data.extend_from_slice(v);
        }
        Ok(RelaxedSolution { rank, data })
    }

    /// Rescales each row to unit length. Rows must be nonzero.
    pub(crate) fn from_rows_normalized(rank: usize, mut data: Vec<f64>) -> Self {
        for row in data.chunks_mut(rank) {
            normalize(row);
        }
        RelaxedSolution { rank, data }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.data[i * self.rank..(i + 1) * self.rank]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.rank)
    }

    /// Inner product of vectors `i` and `j`, clamped to `[-1, 1]`.
    pub fn dot(&self, i: usize, j: usize) -> f64 {
        dot(self.vector(i), self.vector(j)).clamp(-1.0, 1.0)
    }

    /// Pairwise inner products.
    pub fn gram(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = dot(self.vector(i), self.vector(j));
            }
        }
        out
    }

    /// Same vectors zero-padded to a larger rank.
    pub fn padded(&self, rank: usize) -> Self {
        assert!(rank >= self.rank);
        let mut data = Vec::with_capacity(rank * self.len());
        for v in self.vectors() {
            data.extend_from_slice(v);
            data.extend(std::iter::repeat_n(0.0, rank - self.rank));
        }
        RelaxedSolution { rank, data }
    }

    pub(crate) fn check_graph(&self, g: &WeightedGraph) -> Result<()> {
        if self.len() != g.n() {
            return Err(Error::DimensionMismatch {
                expected: g.n(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    for a in v.iter_mut() {
        *a /= norm;
    }
    norm
}

/// A qubit position on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    /// Polar angle in `[0, π]`.
    pub theta: f64,
    /// Azimuth in `[0, 2π)`.
    pub phi: f64,
}

impl BlochPoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        BlochPoint { theta, phi }
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Per-qubit Bloch angles of a separable initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlochAngles(pub Vec<BlochPoint>);

impl BlochAngles {
    /// Every qubit at `θ = π/2, φ = 0`, i.e. `|+⟩^⊗n`.
    pub fn plus_state(n: usize) -> Self {
        BlochAngles(vec![BlochPoint::new(std::f64::consts::FRAC_PI_2, 0.0); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> &[BlochPoint] {
        &self.0
    }

    /// True when some qubit sits at a pole, where the azimuth is undefined
    /// and the custom mixer commutes with the cost Hamiltonian on that qubit.
    pub fn has_polar_qubit(&self) -> bool {
        self.0
            .iter()
            .any(|p| p.theta.sin().abs() < 1e-12)
    }

    /// Copy with every azimuth set to zero.
    pub fn dephased(&self) -> Self {
        BlochAngles(self.0.iter().map(|p| BlochPoint::new(p.theta, 0.0)).collect())
    }

    /// Checks the angle ranges.
    pub fn validate(&self) -> Result<()> {
        use std::f64::consts::PI;
        for (j, p) in self.0.iter().enumerate() {
            if !(0.0..=PI).contains(&p.theta) || !(0.0..2.0 * PI).contains(&p.phi) {
                return invalid(format!("qubit {j}: angles ({}, {}) out of range", p.theta, p.phi));
            }
        }
        Ok(())
    }
}
