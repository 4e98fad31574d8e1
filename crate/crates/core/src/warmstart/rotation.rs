//! Global isometries applied to rank-2 and rank-3 solutions before the
//! Bloch-sphere map.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::RelaxedSolution;
use crate::error::{invalid, Error, Result};

type Mat3 = [[f64; 3]; 3];

fn apply3(r: &Mat3, v: &[f64]) -> [f64; 3] {
    [
        r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
        r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
        r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
    ]
}

fn rotate_all3(x: &RelaxedSolution, r: &Mat3) -> RelaxedSolution {
    let data = x.vectors().flat_map(|v| apply3(r, v)).collect();
    RelaxedSolution { rank: 3, data }
}

fn rotate_all2(x: &RelaxedSolution, angle: f64) -> RelaxedSolution {
    let (s, c) = angle.sin_cos();
    let data = x
        .vectors()
        .flat_map(|v| [c * v[0] - s * v[1], s * v[0] + c * v[1]])
        .collect();
    RelaxedSolution { rank: 2, data }
}

/// Rotation matrix of a unit quaternion `(w, x, y, z)`.
fn quaternion_matrix([w, x, y, z]: [f64; 4]) -> Mat3 {
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// Haar-random rotation for rank 3 (normalized Gaussian quaternion); a
/// uniform planar rotation for rank 2.
pub fn rotate_uniform<R: Rng + ?Sized>(x: &RelaxedSolution, rng: &mut R) -> Result<RelaxedSolution> {
    match x.rank() {
        2 => Ok(rotate_all2(x, rng.random_range(0.0..std::f64::consts::TAU))),
        3 => {
            let q = loop {
                let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
                let norm = q.iter().map(|a| a * a).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    break q.map(|a| a / norm);
                }
            };
            Ok(rotate_all3(x, &quaternion_matrix(q)))
        }
        k => invalid(format!("uniform rotation needs rank 2 or 3, got {k}")),
    }
}

/// Rotation taking unit vector `a` to `(0, 0, 1)`.
fn to_north_pole(a: &[f64]) -> Mat3 {
    // Rodrigues with axis a × e_z = (a1, -a0, 0), sin = |axis|, cos = a2.
    let (kx, ky) = (a[1], -a[0]);
    let s2 = kx * kx + ky * ky;
    let c = a[2];
    if s2 < 1e-30 {
        return if c > 0.0 {
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        } else {
            [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]
        };
    }
    let f = (1.0 - c) / s2;
    // K = [[0, 0, ky], [0, 0, -kx], [-ky, kx, 0]]; R = I + K + f K².
    [
        [1.0 - f * ky * ky, f * kx * ky, ky],
        [f * kx * ky, 1.0 - f * kx * kx, -kx],
        [-ky, kx, 1.0 - f * s2],
    ]
}

/// Isometry placing vertex `v` at the pole: `(0, 0, 1)` for rank 3 and
/// `(0, 1)` for rank 2 (the Bloch north pole after the xz embedding).
pub fn rotate_vertex_at_top(x: &RelaxedSolution, v: usize) -> Result<RelaxedSolution> {
    if v >= x.len() {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} out of range for {} vectors",
            x.len()
        )));
    }
    let mut out = match x.rank() {
        2 => {
            let a = x.vector(v);
            rotate_all2(x, std::f64::consts::FRAC_PI_2 - a[1].atan2(a[0]))
        }
        3 => rotate_all3(x, &to_north_pole(x.vector(v))),
        k => return invalid(format!("vertex-at-top rotation needs rank 2 or 3, got {k}")),
    };
    let rank = out.rank;
    let pole = &mut out.data[v * rank..(v + 1) * rank];
    pole.fill(0.0);
    pole[rank - 1] = 1.0;
    Ok(out)
}
