//! Edge-list text format.
//!
//! ```text
//! n m
//! u v w      (m lines, 0-indexed by default)
//! ```
//!
//! Blank lines are ignored. Weights are written with 17 significant digits
//! so every `f64` survives a round trip.

use super::WeightedGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Indexing {
    #[default]
    Zero,
    One,
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    parse_edge_list_with(text, Indexing::Zero)
}

pub fn parse_edge_list_with(text: &str, indexing: Indexing) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let Some((hline, header)) = lines.next() else {
        return parse_err(1, "missing header");
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = fields[..] else {
        return parse_err(hline, "header must be \"n m\"");
    };
    let n: usize = n
        .parse()
        .or_else(|_| parse_err(hline, format!("bad vertex count {n:?}")))?;
    let m: usize = m
        .parse()
        .or_else(|_| parse_err(hline, format!("bad edge count {m:?}")))?;
    if n == 0 {
        return parse_err(hline, "vertex count must be at least 1");
    }

    let offset = match indexing {
        Indexing::Zero => 0,
        Indexing::One => 1,
    };
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w] = fields[..] else {
            return parse_err(lineno, "expected \"u v w\"");
        };
        let index = |s: &str| -> Result<usize> {
            let raw: usize = s
                .parse()
                .or_else(|_| parse_err(lineno, format!("bad vertex index {s:?}")))?;
            if raw < offset || raw - offset >= n {
                return parse_err(lineno, format!("vertex index {raw} out of range"));
            }
            Ok(raw - offset)
        };
        let (u, v) = (index(u)?, index(v)?);
        let w: f64 = w
            .parse()
            .or_else(|_| parse_err(lineno, format!("bad weight {w:?}")))?;
        if !w.is_finite() {
            return parse_err(lineno, "weight is not finite");
        }
        if u == v {
            return parse_err(lineno, format!("self-loop at vertex {u}"));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return parse_err(lineno, format!("duplicate edge ({u}, {v})"));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return parse_err(hline, format!("header declares {m} edges, found {}", edges.len()));
    }
    WeightedGraph::new(n, edges)
}

/// Canonical text: edges sorted with `u < v`, weights in `{:.16e}`.
pub fn serialize_edge_list(g: &WeightedGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        out.push_str(&format!("{} {} {:.16e}\n", e.u, e.v, e.w));
    }
    out
}
