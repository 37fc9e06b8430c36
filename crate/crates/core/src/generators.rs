//! Seeded graph and workload generators.
//!
//! Every generator is a pure function of its arguments including an explicit
//! `u64` seed (ChaCha8 underneath, so streams are stable across platforms
//! and releases). Weights are drawn uniformly from a half-open `(lo, hi]`
//! range — the default `(0, 1]` — so they are always strictly positive.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynamic_matcher::EdgeOp;
use crate::graph::{DynamicGraph, NodeId, Weight};
use crate::suitor::BFunction;

/// Default weight range `(0, 1]`.
pub const DEFAULT_WEIGHT_RANGE: (f64, f64) = (0.0, 1.0);

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("invalid generator parameter: {0}")]
    InvalidParam(String),
    #[error("quadrant probabilities sum to {0}, expected 1")]
    InvalidProbs(f64),
    #[error("requested {requested} samples but only {available} candidates exist")]
    NotEnoughCandidates { requested: usize, available: usize },
}

fn check_weight_range(range: (f64, f64)) -> Result<(), GenError> {
    let (lo, hi) = range;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(GenError::InvalidParam(format!(
            "weight range ({lo}, {hi}] must satisfy 0 <= lo < hi < inf"
        )));
    }
    Ok(())
}

/// Uniform draw from `(lo, hi]`: `hi` is attainable, `lo` is not, so weights
/// stay strictly positive even for the default range.
#[inline]
fn draw_weight(rng: &mut ChaCha8Rng, range: (f64, f64)) -> Weight {
    let (lo, hi) = range;
    hi - rng.gen::<f64>() * (hi - lo)
}

/// Erdős–Rényi G(n, p): every unordered pair is an edge independently with
/// probability `p`.
pub fn gen_gnp(
    n: usize,
    p: f64,
    weight_range: (f64, f64),
    seed: u64,
) -> Result<DynamicGraph, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::InvalidParam(format!("p = {p} outside [0, 1]")));
    }
    check_weight_range(weight_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DynamicGraph::new(n);
    for u in 0..n as NodeId {
        for v in (u + 1)..n as NodeId {
            if rng.gen_bool(p) {
                let w = draw_weight(&mut rng, weight_range);
                g.add_edge(u, v, w).expect("pairs are unique by construction");
            }
        }
    }
    Ok(g)
}

/// Recursive-matrix quadrant probabilities. Must sum to 1 within 1e-9; the
/// constructor renormalizes exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmatProbs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RmatProbs {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GenError> {
        if [a, b, c, d].iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(GenError::InvalidParam(format!(
                "probabilities ({a}, {b}, {c}, {d}) must lie in [0, 1]"
            )));
        }
        let sum = a + b + c + d;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(GenError::InvalidProbs(sum));
        }
        Ok(RmatProbs { a: a / sum, b: b / sum, c: c / sum, d: d / sum })
    }

    /// Uniform quadrants: degree distribution close to G(n, p).
    pub fn er() -> Self {
        RmatProbs { a: 0.25, b: 0.25, c: 0.25, d: 0.25 }
    }

    /// Mildly skewed ("good" power law).
    pub fn skewed_g() -> Self {
        RmatProbs { a: 0.45, b: 0.15, c: 0.15, d: 0.25 }
    }

    /// Strongly skewed ("bad" power law, pronounced hubs).
    pub fn skewed_b() -> Self {
        RmatProbs { a: 0.55, b: 0.15, c: 0.15, d: 0.15 }
    }
}

/// One recursive quadrant descent: returns an ordered `(row, col)` pair in
/// `[0, 2^scale)^2`. May be a self loop; callers reject those.
fn rmat_draw_pair(rng: &mut ChaCha8Rng, scale: u32, probs: RmatProbs) -> (NodeId, NodeId) {
    let (mut u, mut v) = (0u32, 0u32);
    for _ in 0..scale {
        let r: f64 = rng.gen();
        let (bu, bv) = if r < probs.a {
            (0, 0)
        } else if r < probs.a + probs.b {
            (0, 1)
        } else if r < probs.a + probs.b + probs.c {
            (1, 0)
        } else {
            (1, 1)
        };
        u = (u << 1) | bu;
        v = (v << 1) | bv;
    }
    (u, v)
}

/// R-MAT graph on `2^scale` nodes targeting `edge_factor * 2^scale` distinct
/// edges. Self loops and duplicates are redrawn, up to 100 attempts per
/// target edge in total; if the quota cannot be met (heavily skewed
/// quadrants keep hitting the same cells) the graph is returned short.
pub fn gen_rmat(
    scale: u32,
    edge_factor: usize,
    probs: RmatProbs,
    weight_range: (f64, f64),
    seed: u64,
) -> Result<DynamicGraph, GenError> {
    if scale == 0 || scale > 30 {
        return Err(GenError::InvalidParam(format!("scale = {scale} outside 1..=30")));
    }
    check_weight_range(weight_range)?;
    let n = 1usize << scale;
    let target = edge_factor * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DynamicGraph::new(n);
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(target * 2);
    let max_attempts = target.saturating_mul(100);
    let mut attempts = 0usize;
    while g.edge_count() < target && attempts < max_attempts {
        attempts += 1;
        let (u, v) = rmat_draw_pair(&mut rng, scale, probs);
        if u == v {
            continue;
        }
        let key = if u < v { (u, v) } else { (v, u) };
        if !seen.insert(key) {
            continue;
        }
        let w = draw_weight(&mut rng, weight_range);
        g.add_edge(key.0, key.1, w).expect("deduplicated above");
    }
    Ok(g)
}

/// Draw `k` distinct non-edges of `g` with fresh weights. Rejection-samples
/// pairs and falls back to exhaustive enumeration if the graph is nearly
/// complete.
pub fn sample_insert_batch(
    g: &DynamicGraph,
    k: usize,
    weight_range: (f64, f64),
    seed: u64,
) -> Result<Vec<(NodeId, NodeId, Weight)>, GenError> {
    check_weight_range(weight_range)?;
    let n = g.node_count();
    let possible = n * n.saturating_sub(1) / 2 - g.edge_count();
    if k > possible {
        return Err(GenError::NotEnoughCandidates { requested: k, available: possible });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(k * 2);
    let mut out = Vec::with_capacity(k);
    let mut attempts = 0usize;
    let max_attempts = 100 * k + 1000;
    while out.len() < k && attempts < max_attempts {
        attempts += 1;
        let u = rng.gen_range(0..n) as NodeId;
        let v = rng.gen_range(0..n) as NodeId;
        if u == v {
            continue;
        }
        let key = if u < v { (u, v) } else { (v, u) };
        if g.has_edge(key.0, key.1) || !chosen.insert(key) {
            continue;
        }
        out.push((key.0, key.1, draw_weight(&mut rng, weight_range)));
    }
    // Dense graph: enumerate the remaining non-edges and fill up (the
    // precondition guarantees enough exist).
    if out.len() < k {
        let mut rest: Vec<(NodeId, NodeId)> = Vec::new();
        for u in 0..n as NodeId {
            for v in (u + 1)..n as NodeId {
                if !g.has_edge(u, v) && !chosen.contains(&(u, v)) {
                    rest.push((u, v));
                }
            }
        }
        while out.len() < k {
            let i = rng.gen_range(0..rest.len());
            let (u, v) = rest.swap_remove(i);
            out.push((u, v, draw_weight(&mut rng, weight_range)));
        }
    }
    Ok(out)
}

/// Draw `k` distinct existing edges of `g` (endpoints only), uniformly
/// without replacement.
pub fn sample_remove_batch(
    g: &DynamicGraph,
    k: usize,
    seed: u64,
) -> Result<Vec<(NodeId, NodeId)>, GenError> {
    let m = g.edge_count();
    if k > m {
        return Err(GenError::NotEnoughCandidates { requested: k, available: m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().iter().map(|e| e.pair()).collect();
    // Partial Fisher-Yates: the first k slots end up a uniform sample.
    for i in 0..k {
        let j = rng.gen_range(i..edges.len());
        edges.swap(i, j);
    }
    edges.truncate(k);
    Ok(edges)
}

/// Draw a sequence of `k` operations, each a 50/50 insert-or-remove that is
/// valid at its position (inserts target current non-edges, removals target
/// current edges, tracked against a working copy of the edge set).
pub fn sample_mixed_batch(
    g: &DynamicGraph,
    k: usize,
    weight_range: (f64, f64),
    seed: u64,
) -> Result<Vec<EdgeOp>, GenError> {
    check_weight_range(weight_range)?;
    let n = g.node_count();
    if n < 2 && k > 0 {
        return Err(GenError::NotEnoughCandidates { requested: k, available: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().iter().map(|e| e.pair()).collect();
    let mut present: HashSet<(NodeId, NodeId)> = edges.iter().copied().collect();
    let total_pairs = n * (n - 1) / 2;
    let mut ops = Vec::with_capacity(k);
    for _ in 0..k {
        let complete = edges.len() == total_pairs;
        let insert = if edges.is_empty() {
            true
        } else if complete {
            false
        } else {
            rng.gen_bool(0.5)
        };
        if insert {
            // Rejection sampling with an exhaustive fallback, as above.
            let mut pick: Option<(NodeId, NodeId)> = None;
            for _ in 0..1000 {
                let u = rng.gen_range(0..n) as NodeId;
                let v = rng.gen_range(0..n) as NodeId;
                if u == v {
                    continue;
                }
                let key = if u < v { (u, v) } else { (v, u) };
                if !present.contains(&key) {
                    pick = Some(key);
                    break;
                }
            }
            let (u, v) = match pick {
                Some(p) => p,
                None => {
                    let mut rest: Vec<(NodeId, NodeId)> = Vec::new();
                    for u in 0..n as NodeId {
                        for v in (u + 1)..n as NodeId {
                            if !present.contains(&(u, v)) {
                                rest.push((u, v));
                            }
                        }
                    }
                    rest[rng.gen_range(0..rest.len())]
                }
            };
            present.insert((u, v));
            edges.push((u, v));
            ops.push(EdgeOp::Insert { u, v, w: draw_weight(&mut rng, weight_range) });
        } else {
            let i = rng.gen_range(0..edges.len());
            let (u, v) = edges.swap_remove(i);
            present.remove(&(u, v));
            ops.push(EdgeOp::Remove { u, v });
        }
    }
    Ok(ops)
}

/// How per-node capacities are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BMode {
    /// `b(u) = c` for every node.
    Constant(u32),
    /// `b(u)` uniform in `lo..=hi` per node.
    Uniform(u32, u32),
}

/// Build a capacity function for `n` nodes.
pub fn gen_b_function(n: usize, mode: BMode, seed: u64) -> Result<BFunction, GenError> {
    match mode {
        BMode::Constant(c) => {
            if c < 1 {
                return Err(GenError::InvalidParam("b must be at least 1".into()));
            }
            Ok(BFunction::constant(n, c))
        }
        BMode::Uniform(lo, hi) => {
            if lo < 1 || hi < lo {
                return Err(GenError::InvalidParam(format!(
                    "uniform b range {lo}..={hi} must satisfy 1 <= lo <= hi"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(BFunction::from_vec(
                (0..n).map(|_| rng.gen_range(lo..=hi)).collect(),
            ))
        }
    }
}
