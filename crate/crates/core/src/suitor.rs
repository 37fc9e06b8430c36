//! Per-node suitor queues: the entire state of the matcher.
//!
//! Every node `u` owns a queue `S(u)` holding at most `b(u)` standing
//! proposals, ordered by the proposal order at `u` (weight, then smaller
//! partner id on ties). The matched edge set is implicit: `{u, v}` is
//! matched iff `v ∈ S(u)` and `u ∈ S(v)`. A queue's `min()` is `None`
//! while the queue is unsaturated — an unsaturated node accepts any offer,
//! and every acceptance test in the matcher compares against `min()`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{entry_beats, DynamicGraph, Edge, NodeId, Proposal, Weight};

/// Per-node capacity function `b(u) >= 1`, fixed for the lifetime of a
/// matcher state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFunction(Vec<u32>);

impl BFunction {
    /// Constant capacity `c` for all `n` nodes.
    pub fn constant(n: usize, c: u32) -> Self {
        assert!(c >= 1, "b(u) must be at least 1");
        BFunction(vec![c; n])
    }

    /// Explicit per-node capacities; all entries must be >= 1.
    pub fn from_vec(b: Vec<u32>) -> Self {
        assert!(b.iter().all(|&c| c >= 1), "b(u) must be at least 1");
        BFunction(b)
    }

    pub fn node_count(&self) -> usize {
        self.0.len()
    }

    pub fn b(&self, u: NodeId) -> u32 {
        self.0[u as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueueError {
    #[error("partner {partner} already present in S({owner})")]
    AlreadyPresent { owner: NodeId, partner: NodeId },
    #[error("proposal from {partner} does not beat the minimum of saturated S({owner})")]
    WouldNotImprove { owner: NodeId, partner: NodeId },
    #[error("partner {partner} not present in S({owner})")]
    NotPresent { owner: NodeId, partner: NodeId },
}

/// One node's queue: a small array kept sorted worst-first, so `entries[0]`
/// is the eviction candidate. Capacities are small in practice, so inserts
/// and membership tests are plain linear scans.
#[derive(Debug, Clone, PartialEq)]
struct SuitorQueue {
    capacity: u32,
    /// `(partner, weight)` sorted ascending in the owner's proposal order.
    entries: Vec<(NodeId, Weight)>,
}

impl SuitorQueue {
    fn new(capacity: u32) -> Self {
        SuitorQueue {
            capacity,
            entries: Vec::with_capacity(capacity as usize),
        }
    }

    fn is_saturated(&self) -> bool {
        self.entries.len() == self.capacity as usize
    }

    /// Weakest entry if saturated, `None` otherwise (room left means any
    /// proposal is acceptable).
    fn min(&self) -> Option<(NodeId, Weight)> {
        if self.is_saturated() {
            self.entries.first().copied()
        } else {
            None
        }
    }

    fn contains(&self, partner: NodeId) -> bool {
        self.entries.iter().any(|&(p, _)| p == partner)
    }

    fn sorted_insert(&mut self, partner: NodeId, w: Weight) {
        let pos = self
            .entries
            .iter()
            .position(|&(p, pw)| entry_beats((pw, p), Some((w, partner))))
            .unwrap_or(self.entries.len());
        self.entries.insert(pos, (partner, w));
    }
}

/// Full matcher state: one suitor queue per node plus the capacity function.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingState {
    queues: Vec<SuitorQueue>,
    b: BFunction,
}

impl MatchingState {
    /// Fresh state with empty queues.
    pub fn new(b: BFunction) -> Self {
        let queues = b.values().iter().map(|&c| SuitorQueue::new(c)).collect();
        MatchingState { queues, b }
    }

    pub fn node_count(&self) -> usize {
        self.queues.len()
    }

    pub fn b(&self) -> &BFunction {
        &self.b
    }

    pub fn is_saturated(&self, owner: NodeId) -> bool {
        self.queues[owner as usize].is_saturated()
    }

    pub fn contains(&self, owner: NodeId, partner: NodeId) -> bool {
        self.queues[owner as usize].contains(partner)
    }

    /// Queue contents of `owner`, worst entry first.
    pub fn entries(&self, owner: NodeId) -> &[(NodeId, Weight)] {
        &self.queues[owner as usize].entries
    }

    /// The eviction candidate of a saturated queue as `(partner, weight)`;
    /// `None` while the queue still has room.
    pub fn min_entry(&self, owner: NodeId) -> Option<(NodeId, Weight)> {
        self.queues[owner as usize].min()
    }

    /// `min_entry` packaged as a `Proposal` at `owner`.
    pub fn queue_min(&self, owner: NodeId) -> Option<Proposal> {
        self.min_entry(owner).map(|(partner, w)| Proposal {
            owner,
            partner,
            w,
        })
    }

    /// Accept `partner`'s proposal at `owner`, evicting the saturated
    /// queue's minimum if necessary. Returns the evicted `(partner, weight)`
    /// entry, or `None` if there was room.
    ///
    /// Callers must only offer strict improvements (the acceptance test
    /// against `min_entry` happens before every call); a `WouldNotImprove`
    /// return therefore indicates a bug at the call site.
    pub fn insert(
        &mut self,
        owner: NodeId,
        partner: NodeId,
        w: Weight,
    ) -> Result<Option<(NodeId, Weight)>, QueueError> {
        let q = &mut self.queues[owner as usize];
        if q.contains(partner) {
            return Err(QueueError::AlreadyPresent { owner, partner });
        }
        let evicted = if q.is_saturated() {
            if !entry_beats((w, partner), q.min().map(|(p, pw)| (pw, p))) {
                return Err(QueueError::WouldNotImprove { owner, partner });
            }
            Some(q.entries.remove(0))
        } else {
            None
        };
        q.sorted_insert(partner, w);
        Ok(evicted)
    }

    /// Drop `partner`'s standing proposal at `owner`.
    pub fn remove(&mut self, owner: NodeId, partner: NodeId) -> Result<(), QueueError> {
        let q = &mut self.queues[owner as usize];
        match q.entries.iter().position(|&(p, _)| p == partner) {
            Some(pos) => {
                q.entries.remove(pos);
                Ok(())
            }
            None => Err(QueueError::NotPresent { owner, partner }),
        }
    }

    /// Matched edges: pairs with mutual standing proposals, sorted.
    pub fn matching_edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (u, q) in self.queues.iter().enumerate() {
            let u = u as NodeId;
            for &(v, w) in &q.entries {
                if u < v && self.contains(v, u) {
                    out.push(Edge { u, v, w });
                }
            }
        }
        out.sort_by_key(|e| e.pair());
        out
    }

    /// Total weight of the matched edges, recomputed on demand.
    pub fn matching_weight(&self) -> f64 {
        self.matching_edges().iter().map(|e| e.w).sum()
    }

    /// Structural health check: every queue entry is reciprocated, refers to
    /// a live graph edge, and carries that edge's weight. Holds whenever the
    /// matcher is at rest.
    pub fn check_s_invariant(&self, g: &DynamicGraph) -> bool {
        self.queues.iter().enumerate().all(|(u, q)| {
            let u = u as NodeId;
            q.entries
                .iter()
                .all(|&(v, w)| self.contains(v, u) && g.weight_of(u, v) == Some(w))
        })
    }

    /// Diagnostic dump, one line per node: `u: [p1:w1, p2:w2, ...]` in queue
    /// order (worst entry first).
    pub fn dump_queues(&self) -> String {
        let mut out = String::new();
        for (u, q) in self.queues.iter().enumerate() {
            let parts: Vec<String> = q
                .entries
                .iter()
                .map(|&(p, w)| format!("{p}:{w}"))
                .collect();
            let _ = writeln!(out, "{u}: [{}]", parts.join(", "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state2() -> MatchingState {
        MatchingState::new(BFunction::constant(8, 2))
    }

    #[test]
    fn min_is_none_until_saturated() {
        let mut s = state2();
        assert_eq!(s.min_entry(5), None);
        s.insert(5, 3, 4.0).unwrap();
        // One entry, capacity two: still accepts anything.
        assert_eq!(s.min_entry(5), None);
        s.insert(5, 4, 6.0).unwrap();
        assert_eq!(
            s.queue_min(5),
            Some(Proposal { owner: 5, partner: 3, w: 4.0 })
        );
    }

    #[test]
    fn saturated_insert_evicts_tie_broken_minimum() {
        // Owner 2 holds {1:1, 0:1}; the minimum is partner 1 because equal
        // weights prefer the smaller partner id. A heavy proposal evicts it.
        let mut s = state2();
        s.insert(2, 1, 1.0).unwrap();
        s.insert(2, 0, 1.0).unwrap();
        assert_eq!(s.queue_min(2).unwrap().partner, 1);
        let evicted = s.insert(2, 5, 10.0).unwrap();
        assert_eq!(evicted, Some((1, 1.0)));
        assert_eq!(s.entries(2), &[(0, 1.0), (5, 10.0)]);
    }

    #[test]
    fn insert_rejects_duplicates_and_non_improvements() {
        let mut s = state2();
        s.insert(1, 2, 3.0).unwrap();
        assert_eq!(
            s.insert(1, 2, 5.0),
            Err(QueueError::AlreadyPresent { owner: 1, partner: 2 })
        );
        s.insert(1, 3, 4.0).unwrap();
        assert_eq!(
            s.insert(1, 4, 2.0),
            Err(QueueError::WouldNotImprove { owner: 1, partner: 4 })
        );
        // Equal weight with a larger partner id also fails against min (2).
        assert_eq!(
            s.insert(1, 4, 3.0),
            Err(QueueError::WouldNotImprove { owner: 1, partner: 4 })
        );
    }

    #[test]
    fn remove_contract() {
        // Removing the minimum of a saturated {3:4, 4:6} queue leaves one
        // entry; the queue is unsaturated again so min() reverts to None,
        // while the surviving entry is partner 4.
        let mut s = state2();
        s.insert(5, 3, 4.0).unwrap();
        s.insert(5, 4, 6.0).unwrap();
        s.remove(5, 3).unwrap();
        assert_eq!(s.min_entry(5), None);
        assert_eq!(s.entries(5), &[(4, 6.0)]);
        assert_eq!(
            s.remove(5, 3),
            Err(QueueError::NotPresent { owner: 5, partner: 3 })
        );
    }

    #[test]
    fn matching_requires_mutual_entries() {
        let mut s = state2();
        let mut g = DynamicGraph::new(8);
        g.add_edge(0, 1, 5.0).unwrap();
        g.add_edge(1, 2, 4.0).unwrap();
        s.insert(0, 1, 5.0).unwrap();
        s.insert(1, 0, 5.0).unwrap();
        s.insert(2, 1, 4.0).unwrap(); // one-sided: not matched
        let m = s.matching_edges();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].pair(), (0, 1));
        assert_eq!(s.matching_weight(), 5.0);
        // The one-sided entry breaks the at-rest invariant.
        assert!(!s.check_s_invariant(&g));
        s.insert(1, 2, 4.0).unwrap();
        assert!(s.check_s_invariant(&g));
        // A queue entry whose weight disagrees with the graph also fails.
        let mut g2 = DynamicGraph::new(8);
        g2.add_edge(0, 1, 5.0).unwrap();
        g2.add_edge(1, 2, 9.0).unwrap();
        assert!(!s.check_s_invariant(&g2));
    }

    #[test]
    fn dump_format() {
        let mut s = MatchingState::new(BFunction::constant(2, 2));
        s.insert(0, 1, 2.5).unwrap();
        assert_eq!(s.dump_queues(), "0: [1:2.5]\n1: []\n");
    }
}
