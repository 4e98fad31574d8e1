//! Instance generators: Erdős–Rényi and Karloff's Johnson-scheme graphs.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::WeightedGraph;
use crate::error::{invalid, Result};
use crate::seeding;

/// Upper bound on the number of vertices `generate_karloff` will build.
pub const KARLOFF_VERTEX_CAP: usize = 10_000;

/// Edge-weight distribution for random instances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightLaw {
    Unit,
    Uniform(f64, f64),
}

/// G(n, p) with weights drawn from `law`; deterministic for a given seed.
pub fn generate_erdos_renyi(
    n: usize,
    edge_prob: f64,
    law: WeightLaw,
    seed: u64,
) -> Result<WeightedGraph> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return invalid(format!("edge probability {edge_prob} outside [0, 1]"));
    }
    if let WeightLaw::Uniform(a, b) = law {
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return invalid(format!("uniform weight bounds ({a}, {b}) are not an interval"));
        }
    }
    let mut rng = seeding::rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < edge_prob {
                let w = match law {
                    WeightLaw::Unit => 1.0,
                    WeightLaw::Uniform(a, b) => a + (b - a) * rng.random::<f64>(),
                };
                edges.push((u, v, w));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

/// Binomial coefficient, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> Result<i128> {
    if n < 0 {
        return invalid(format!("binomial top argument {n} is negative"));
    }
    if k < 0 || k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    Ok(acc)
}

/// `t`-subsets of `0..m` as bitmasks, in lexicographic order of their sorted
/// element lists.
fn subsets_lex(m: usize, t: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        out.push(idx.iter().fold(0u64, |acc, &i| acc | (1 << i)));
        let Some(i) = (0..t).rev().find(|&i| idx[i] < i + m - t) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Karloff's graph `J(m, t, b)`: vertices are the `t`-subsets of `0..m`,
/// adjacent when they share exactly `b` elements.
pub fn generate_karloff(m: usize, t: usize, b: usize) -> Result<WeightedGraph> {
    if m == 0 || !m.is_multiple_of(2) {
        return invalid(format!("m = {m} must be a positive even integer"));
    }
    if !(b <= t && t <= m) {
        return invalid(format!("need 0 <= b <= t <= m, got m={m} t={t} b={b}"));
    }
    if m > 63 {
        return invalid("m above 63 is not supported");
    }
    let count = binomial(m as i64, t as i64)?;
    if count > KARLOFF_VERTEX_CAP as i128 {
        return invalid(format!(
            "J({m},{t},{b}) has {count} vertices, above the cap of {KARLOFF_VERTEX_CAP}"
        ));
    }
    let verts = if t == 0 { vec![0] } else { subsets_lex(m, t) };
    let mut edges = Vec::new();
    for (i, &s) in verts.iter().enumerate() {
        for (j, &r) in verts.iter().enumerate().skip(i + 1) {
            if (s & r).count_ones() as usize == b {
                edges.push((i, j, 1.0));
            }
        }
    }
    WeightedGraph::new(verts.len(), edges)
}

/// Expected hyperplane-rounding ratio on `J(m, m/2, b)`:
/// `(arccos(4b/m - 1) / π) / (1 - 2b/m)`, valid for `0 <= b < m/4`.
pub fn karloff_gw_ratio(m: usize, b: usize) -> Result<f64> {
    if m == 0 || !m.is_multiple_of(2) {
        return invalid(format!("m = {m} must be a positive even integer"));
    }
    if 4 * b >= m {
        return invalid(format!("b = {b} must satisfy b < m/4 = {}", m as f64 / 4.0));
    }
    let (m, b) = (m as f64, b as f64);
    Ok(((4.0 * b / m - 1.0).acos() / std::f64::consts::PI) / (1.0 - 2.0 * b / m))
}

/// Eigenvalue `β_s` of the adjacency matrix of `J(m, t, b)`:
/// `Σ_{r=0}^{s} (-1)^{s-r} C(s,r) C(t-r, t-b) C(m-t-s+r, m-2t+b)`.
pub fn johnson_eigenvalue(m: usize, t: usize, b: usize, s: usize) -> Result<f64> {
    if t > m || b >= t || s > t {
        return invalid(format!(
            "need 0 <= s <= t <= m and b < t, got m={m} t={t} b={b} s={s}"
        ));
    }
    let (m, t, b, s) = (m as i64, t as i64, b as i64, s as i64);
    let mut total: i128 = 0;
    for r in 0..=s {
        let sign = if (s - r) % 2 == 0 { 1 } else { -1 };
        total += sign
            * binomial(s, r)?
            * binomial(t - r, t - b)?
            * binomial(m - t - s + r, m - 2 * t + b)?;
    }
    Ok(total as f64)
}
