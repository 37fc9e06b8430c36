//! Static half-approximate maximum-weight b-matching.
//!
//! Work-queue form of the suitor algorithm: each node enters the queue once
//! per capacity slot and, when popped, proposes to its best acceptable
//! neighbour. A proposal lands in the *neighbour's* queue; if that evicts a
//! weaker suitor, the evicted node re-enters the work queue to propose
//! elsewhere. The result is independent of processing order and its weight
//! is at least half the optimum.

use std::collections::VecDeque;

use crate::graph::{entry_beats, DynamicGraph, NodeId, Weight};
use crate::suitor::{BFunction, MatchingState};

/// Best admissible partner for `u`: among neighbours that do not already
/// hold a standing proposal from `u`, pick the one maximizing the proposal
/// order at `u`, subject to the neighbour accepting (the offer must beat the
/// neighbour's queue minimum; an unsaturated queue accepts anything).
/// Returns the partner and the edge weight.
pub fn find_partner(
    g: &DynamicGraph,
    state: &MatchingState,
    u: NodeId,
) -> Option<(NodeId, Weight)> {
    let mut best: Option<(NodeId, Weight)> = None;
    for (v, w) in g.neighbors(u) {
        // Skip partners already holding u's proposal.
        if state.contains(v, u) {
            continue;
        }
        // Acceptance test at v: (v, u, w) must beat S(v)'s minimum.
        if !entry_beats((w, u), state.min_entry(v).map(|(p, pw)| (pw, p))) {
            continue;
        }
        // Maximize at u: weight, then smaller partner id.
        if best.is_none_or(|(bv, bw)| entry_beats((w, v), Some((bw, bv)))) {
            best = Some((v, w));
        }
    }
    best
}

/// Run the static matcher with the default ascending node order.
pub fn run_static(g: &DynamicGraph, b: &BFunction) -> MatchingState {
    let order: Vec<NodeId> = (0..g.node_count() as NodeId).collect();
    run_static_with_order(g, b, &order)
}

/// Run the static matcher processing nodes in the given order (a permutation
/// of `0..n`). `b(u)` consecutive work items are queued per node; evicted
/// suitors are appended as they occur. The final state does not depend on
/// the order.
pub fn run_static_with_order(
    g: &DynamicGraph,
    b: &BFunction,
    order: &[NodeId],
) -> MatchingState {
    let n = g.node_count();
    assert_eq!(b.node_count(), n, "b function must cover every node");
    assert_eq!(order.len(), n, "order must be a permutation of the nodes");
    debug_assert!(
        {
            let mut seen = vec![false; n];
            order.iter().all(|&u| {
                let fresh = !seen[u as usize];
                seen[u as usize] = true;
                fresh
            })
        },
        "order must not repeat nodes"
    );

    let mut state = MatchingState::new(b.clone());
    let mut queue: VecDeque<NodeId> =
        VecDeque::with_capacity(order.iter().map(|&u| b.b(u) as usize).sum());
    for &u in order {
        for _ in 0..b.b(u) {
            queue.push_back(u);
        }
    }

    while let Some(u) = queue.pop_front() {
        if let Some((p, w)) = find_partner(g, &state, u) {
            let evicted = state
                .insert(p, u, w)
                .expect("find_partner guarantees acceptance");
            if let Some((y, _)) = evicted {
                queue.push_back(y);
            }
        }
    }
    state
}
