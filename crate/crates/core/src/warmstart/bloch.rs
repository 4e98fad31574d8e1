//! Bloch-sphere map, depth-0 expectations and the single-cut ε-state.

use std::f64::consts::{PI, TAU};

use super::{BlochAngles, BlochPoint, RelaxedSolution};
use crate::error::{invalid, Error, Result};
use crate::graphs::{Cut, WeightedGraph};

/// Rank 3: `(a, b, c) ↦ (arccos c, atan2(b, a) mod 2π)`.
/// Rank 2: `(a, b)` is placed on the xz great circle as `(a, 0, b)`.
pub fn to_bloch(x: &RelaxedSolution) -> Result<BlochAngles> {
    let points = match x.rank() {
        3 => x
            .vectors()
            .map(|v| {
                let phi = v[1].atan2(v[0]).rem_euclid(TAU);
                // rem_euclid can round up to exactly 2π.
                let phi = if phi >= TAU { 0.0 } else { phi };
                BlochPoint::new(v[2].clamp(-1.0, 1.0).acos(), phi)
            })
            .collect(),
        2 => x
            .vectors()
            .map(|v| {
                let phi = if v[0] >= 0.0 { 0.0 } else { PI };
                BlochPoint::new(v[1].clamp(-1.0, 1.0).acos(), phi)
            })
            .collect(),
        k => return invalid(format!("Bloch map needs rank 2 or 3, got {k}")),
    };
    Ok(BlochAngles(points))
}

/// Rotation-averaged probability that two rank-`k` vectors at angle `theta`
/// land on different sides after measurement: `(1 - cos θ / k) / 2`.
pub fn averaged_flip_probability(k: usize, theta: f64) -> Result<f64> {
    if !(k == 2 || k == 3) {
        return invalid(format!("k must be 2 or 3, got {k}"));
    }
    if !(0.0..=PI).contains(&theta) {
        return invalid(format!("angle {theta} outside [0, π]"));
    }
    Ok(0.5 * (1.0 - theta.cos() / k as f64))
}

/// Exact expected cut from measuring a separable state in the computational
/// basis: `Σ w_ij (1 - cos θ_i cos θ_j) / 2`.
pub fn depth0_expected_cut(g: &WeightedGraph, s: &BlochAngles) -> Result<f64> {
    if s.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: s.len(),
        });
    }
    let cos: Vec<f64> = s.points().iter().map(|p| p.theta.cos()).collect();
    Ok(g.edges()
        .iter()
        .map(|e| 0.5 * e.w * (1.0 - cos[e.u] * cos[e.v]))
        .sum())
}

/// Places side-0 vertices at polar angle `ε` and side-1 vertices at `π - ε`
/// (azimuth 0). `ε = 0` puts every qubit on a pole; check
/// [`BlochAngles::has_polar_qubit`] before relying on convergence.
pub fn single_cut_epsilon_state(c: &Cut, epsilon: f64) -> Result<BlochAngles> {
    if !(0.0..=PI / 2.0).contains(&epsilon) {
        return invalid(format!("epsilon {epsilon} outside [0, π/2]"));
    }
    Ok(BlochAngles(
        c.bits()
            .iter()
            .map(|&b| BlochPoint::new(if b { PI - epsilon } else { epsilon }, 0.0))
            .collect(),
    ))
}
