//! Weighted graphs, cuts and exact small-instance oracles.

mod generate;
mod io;

pub use generate::{
    binomial, generate_erdos_renyi, generate_karloff, johnson_eigenvalue, karloff_gw_ratio,
    WeightLaw, KARLOFF_VERTEX_CAP,
};
pub use io::{parse_edge_list, parse_edge_list_with, serialize_edge_list, Indexing};

use serde::{Deserialize, Serialize};

use crate::config::check_cap;
use crate::error::{invalid, Error, Result};

/// An undirected weighted edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Max-Cut instance. Edges are canonical: `u < v`, sorted, no duplicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples. Endpoints may be given in
    /// either order; self-loops, duplicates and non-finite weights are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return invalid("graph must have at least one vertex");
        }
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return invalid(format!("edge ({a}, {b}) out of range for n = {n}"));
            }
            if a == b {
                return invalid(format!("self-loop at vertex {a}"));
            }
            if !w.is_finite() {
                return invalid(format!("edge ({a}, {b}) has non-finite weight"));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            out.push(Edge { u, v, w });
        }
        out.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = out.windows(2).find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v)) {
            return invalid(format!("duplicate edge ({}, {})", pair[0].u, pair[0].v));
        }
        Ok(WeightedGraph { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of absolute edge weights (W̄ in the termination rule).
    pub fn total_abs_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w.abs()).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.edges.iter().all(|e| e.w >= 0.0)
    }

    /// Degree of every vertex (unweighted).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Adjacency lists of `(neighbour, weight)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        adj
    }
}

/// A two-sided partition. Bit `j` is the side of vertex `j`; side 0 is `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    bits: Vec<bool>,
}

impl Cut {
    pub fn new(bits: Vec<bool>) -> Self {
        Cut { bits }
    }

    /// Bit `j` of `mask` becomes the side of vertex `j`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Cut {
            bits: (0..n).map(|j| (mask >> j) & 1 == 1).collect(),
        }
    }

    pub fn to_mask(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |m, (j, &b)| if b { m | (1 << j) } else { m })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn complement(&self) -> Cut {
        Cut {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

impl std::fmt::Display for Cut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Cut {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => invalid(format!("cut string contains {c:?}")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Cut::new)
    }
}

/// Exact extremes of the cut function with witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutExtremes {
    pub max_cut: f64,
    pub min_cut: f64,
    pub max_witness: Cut,
    pub min_witness: Cut,
}

/// Total weight of edges whose endpoints lie on different sides.
pub fn cut_value(g: &WeightedGraph, c: &Cut) -> Result<f64> {
    if c.len() != g.n {
        return Err(Error::DimensionMismatch {
            expected: g.n,
            found: c.len(),
        });
    }
    Ok(g.edges
        .iter()
        .filter(|e| c.bits[e.u] != c.bits[e.v])
        .map(|e| e.w)
        .sum())
}

/// Cut value of a bitmask assignment, summed in edge order like [`cut_value`].
pub(crate) fn mask_cut_value(g: &WeightedGraph, mask: u64) -> f64 {
    g.edges
        .iter()
        .filter(|e| ((mask >> e.u) ^ (mask >> e.v)) & 1 == 1)
        .map(|e| e.w)
        .sum()
}

/// Exact max and min cut by enumeration, with `n` capped at `cap`.
///
/// Vertex 0 is pinned to side 0 (complement symmetry) and the remaining
/// `2^(n-1)` assignments are walked in Gray-code order with incremental
/// updates. Candidates near the running extreme are re-evaluated with
/// [`cut_value`]'s summation order so the reported values are exact.
pub fn brute_force_extremes_capped(g: &WeightedGraph, cap: usize) -> Result<CutExtremes> {
    check_cap("brute-force enumeration", g.n, cap.min(63))?;
    let n = g.n;
    let adj = g.adjacency();
    let slack = 1e-7 * (1.0 + g.total_abs_weight());

    let mut mask = 0u64;
    let mut value = 0.0f64;
    let (mut best_max, mut arg_max) = (0.0f64, 0u64);
    let (mut best_min, mut arg_min) = (0.0f64, 0u64);

    let steps: u64 = 1 << (n - 1);
    for k in 1..steps {
        // Gray code: flip vertex (1 + trailing zeros of k).
        let v = 1 + k.trailing_zeros() as usize;
        let side = (mask >> v) & 1;
        for &(u, w) in &adj[v] {
            if (mask >> u) & 1 == side {
                value += w;
            } else {
                value -= w;
            }
        }
        mask ^= 1 << v;
        if value > best_max - slack {
            let exact = mask_cut_value(g, mask);
            if exact > best_max {
                best_max = exact;
                arg_max = mask;
            }
        }
        if value < best_min + slack {
            let exact = mask_cut_value(g, mask);
            if exact < best_min {
                best_min = exact;
                arg_min = mask;
            }
        }
    }
    Ok(CutExtremes {
        max_cut: best_max,
        min_cut: best_min,
        max_witness: Cut::from_mask(arg_max, n),
        min_witness: Cut::from_mask(arg_min, n),
    })
}

/// [`brute_force_extremes_capped`] with the default cap (or `QWM_MAX_QUBITS`).
pub fn brute_force_extremes(g: &WeightedGraph) -> Result<CutExtremes> {
    brute_force_extremes_capped(g, crate::config::Limits::from_env().brute_force)
}

/// Normalized approximation ratio `(E - min) / (max - min)`.
pub fn approximation_ratio(expected_cut: f64, extremes: &CutExtremes) -> Result<f64> {
    let span = extremes.max_cut - extremes.min_cut;
    if span.is_nan() || span <= 0.0 {
        return Err(Error::DegenerateInstance(extremes.max_cut));
    }
    Ok((expected_cut - extremes.min_cut) / span)
}
