//! Exact reference oracles used to validate the matchers.
//!
//! `exact_mwbm` finds a true maximum-weight b-matching by exhaustive search
//! over edge subsets (branch and bound over a depth-first include/exclude
//! tree, with incremental degree counters and a remaining-weight cut). It is
//! intentionally limited to tiny instances; the half-approximation bound of
//! the static matcher is checked against it. `check_static_equivalence` is
//! the stronger oracle for dynamic updates: full queue-level equality with a
//! from-scratch static run on the current graph.

use thiserror::Error;

use crate::graph::{DynamicGraph, Edge};
use crate::static_matcher::run_static;
use crate::suitor::{BFunction, MatchingState};

/// Hard cap on the edge count accepted by `exact_mwbm`.
pub const EXACT_EDGE_BUDGET: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {m} edges; exact search accepts at most {budget}")]
    TooLarge { m: usize, budget: usize },
}

/// An optimal b-matching: its total weight and a witness edge set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatching {
    pub weight: f64,
    pub edges: Vec<Edge>,
}

/// Exhaustive maximum-weight b-matching for graphs with at most
/// `EXACT_EDGE_BUDGET` edges.
pub fn exact_mwbm(g: &DynamicGraph, b: &BFunction) -> Result<ExactMatching, OracleError> {
    let edges = g.edges();
    let m = edges.len();
    if m > EXACT_EDGE_BUDGET {
        return Err(OracleError::TooLarge { m, budget: EXACT_EDGE_BUDGET });
    }
    assert_eq!(b.node_count(), g.node_count(), "b function must cover every node");

    // Heaviest first makes the weight bound prune early.
    let mut sorted = edges;
    sorted.sort_by(|a, b| b.w.partial_cmp(&a.w).unwrap());
    // suffix[i] = total weight of sorted[i..].
    let mut suffix = vec![0.0; m + 1];
    for i in (0..m).rev() {
        suffix[i] = suffix[i + 1] + sorted[i].w;
    }

    struct Search<'a> {
        edges: &'a [Edge],
        suffix: &'a [f64],
        load: Vec<u32>,
        caps: &'a BFunction,
        chosen: u32,
        best_weight: f64,
        best_set: u32,
    }

    impl Search<'_> {
        fn dfs(&mut self, i: usize, weight: f64) {
            if weight > self.best_weight {
                self.best_weight = weight;
                self.best_set = self.chosen;
            }
            if i == self.edges.len() || weight + self.suffix[i] <= self.best_weight {
                return;
            }
            let e = self.edges[i];
            let (u, v) = (e.u as usize, e.v as usize);
            if self.load[u] < self.caps.b(e.u) && self.load[v] < self.caps.b(e.v) {
                self.load[u] += 1;
                self.load[v] += 1;
                self.chosen |= 1 << i;
                self.dfs(i + 1, weight + e.w);
                self.chosen &= !(1 << i);
                self.load[u] -= 1;
                self.load[v] -= 1;
            }
            self.dfs(i + 1, weight);
        }
    }

    let mut search = Search {
        edges: &sorted,
        suffix: &suffix,
        load: vec![0; g.node_count()],
        caps: b,
        chosen: 0,
        best_weight: 0.0,
        best_set: 0,
    };
    search.dfs(0, 0.0);

    let mut picked: Vec<Edge> = (0..m)
        .filter(|i| search.best_set & (1 << i) != 0)
        .map(|i| sorted[i])
        .collect();
    picked.sort_by_key(|e| e.pair());
    Ok(ExactMatching { weight: search.best_weight, edges: picked })
}

/// `true` iff the state's matching weight is at least half the optimum.
/// Compared as `2 * weight >= opt` (doubling is exact in binary floating
/// point, so no tolerance is involved).
pub fn check_half_approx(
    g: &DynamicGraph,
    b: &BFunction,
    state: &MatchingState,
) -> Result<bool, OracleError> {
    let opt = exact_mwbm(g, b)?;
    Ok(2.0 * state.matching_weight() >= opt.weight)
}

/// `true` iff `state` is exactly what a fresh static run on `g` produces:
/// every queue's contents (partners and weights) must agree, which is
/// strictly stronger than comparing matched edge sets.
pub fn check_static_equivalence(
    g: &DynamicGraph,
    b: &BFunction,
    state: &MatchingState,
) -> bool {
    let fresh = run_static(g, b);
    &fresh == state
}
