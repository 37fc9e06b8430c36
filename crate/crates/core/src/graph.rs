//! Undirected weighted graph with a fixed node set and a mutable edge set.
//!
//! Nodes are dense integer ids `0..n`. Edges carry strictly positive, finite
//! `f64` weights and can be added or removed at any time; the node set is
//! fixed at construction. Adjacency is stored per node as an ordered map from
//! neighbour id to weight, so neighbour iteration is deterministic (ascending
//! id) and membership tests are logarithmic in the degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense node identifier in `0..n`.
pub type NodeId = u32;

/// Edge weight: strictly positive and finite. Enforced at every ingestion
/// point (`add_edge`, edge-list parsing); never trust a raw `f64` elsewhere.
pub type Weight = f64;

/// An undirected edge, normalized so that `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: Weight,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, w: Weight) -> Self {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        Edge { u, v, w }
    }

    /// Unordered endpoint pair, normalized.
    pub fn pair(&self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }
}

/// A standing offer "`owner` would accept `partner` at weight `w`".
///
/// Proposals at the same owner are totally ordered: heavier weight wins, and
/// equal weights are broken towards the smaller partner id. The order is
/// exact (no epsilon); the dynamic-vs-static equality guarantee depends on
/// every comparison being reproducible bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proposal {
    pub owner: NodeId,
    pub partner: NodeId,
    pub w: Weight,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProposalError {
    /// Proposals at different owners are incomparable.
    #[error("cannot compare proposals owned by {0} and {1}")]
    MixedOwner(NodeId, NodeId),
}

/// Total order on `(weight, partner)` entries at a fixed owner: greater means
/// "preferred". Heavier weight wins; ties go to the smaller partner id.
///
/// Weights must be finite (graph invariant), so `partial_cmp` cannot fail.
#[inline]
pub fn entry_cmp(w_a: Weight, partner_a: NodeId, w_b: Weight, partner_b: NodeId) -> Ordering {
    match w_a.partial_cmp(&w_b).expect("edge weights are finite") {
        Ordering::Equal => partner_b.cmp(&partner_a),
        ord => ord,
    }
}

/// `true` iff entry `a` is strictly preferred over `b` at a common owner.
/// `b = None` means "no standing entry", which any proposal beats.
#[inline]
pub fn entry_beats(a: (Weight, NodeId), b: Option<(Weight, NodeId)>) -> bool {
    match b {
        None => true,
        Some((w_b, p_b)) => entry_cmp(a.0, a.1, w_b, p_b) == Ordering::Greater,
    }
}

/// Compare two proposals at the same owner; `b = None` loses to anything.
///
/// Returns `Equal` only for identical proposals (same partner and weight);
/// distinct partners never compare equal because of the id tie-break.
pub fn compare_proposals(a: &Proposal, b: Option<&Proposal>) -> Result<Ordering, ProposalError> {
    match b {
        None => Ok(Ordering::Greater),
        Some(b) => {
            if a.owner != b.owner {
                return Err(ProposalError::MixedOwner(a.owner, b.owner));
            }
            Ok(entry_cmp(a.w, a.partner, b.w, b.partner))
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("node {0} out of range (graph has {1} nodes)")]
    NodeOutOfRange(NodeId, usize),
    #[error("self loop at node {0}")]
    SelfLoop(NodeId),
    #[error("weight {0} is not strictly positive and finite")]
    NonPositiveWeight(Weight),
    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge ({0}, {1}) not present")]
    MissingEdge(NodeId, NodeId),
}

/// Undirected weighted graph over nodes `0..n` supporting edge insertion and
/// removal. Both directions of every edge are kept in the adjacency, so
/// `neighbors(u)` is a direct lookup.
#[derive(Debug, Clone, Default)]
pub struct DynamicGraph {
    adj: Vec<BTreeMap<NodeId, Weight>>,
    m: usize,
}

impl DynamicGraph {
    /// Empty graph on `n` isolated nodes.
    pub fn new(n: usize) -> Self {
        DynamicGraph {
            adj: vec![BTreeMap::new(); n],
            m: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    fn check_node(&self, u: NodeId) -> Result<(), GraphError> {
        if (u as usize) < self.adj.len() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange(u, self.adj.len()))
        }
    }

    /// Insert the undirected edge `{u, v}` with weight `w`.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, w: Weight) -> Result<(), GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(GraphError::NonPositiveWeight(w));
        }
        if self.adj[u as usize].contains_key(&v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.adj[u as usize].insert(v, w);
        self.adj[v as usize].insert(u, w);
        self.m += 1;
        Ok(())
    }

    /// Remove the undirected edge `{u, v}`, returning its weight.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> Result<Weight, GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        match self.adj[u as usize].remove(&v) {
            Some(w) => {
                self.adj[v as usize].remove(&u);
                self.m -= 1;
                Ok(w)
            }
            None => Err(GraphError::MissingEdge(u, v)),
        }
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj
            .get(u as usize)
            .is_some_and(|nbrs| nbrs.contains_key(&v))
    }

    pub fn weight_of(&self, u: NodeId, v: NodeId) -> Option<Weight> {
        self.adj.get(u as usize)?.get(&v).copied()
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj.get(u as usize).map_or(0, |nbrs| nbrs.len())
    }

    /// Neighbours of `u` with edge weights, in ascending neighbour id.
    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
        self.adj[u as usize].iter().map(|(&v, &w)| (v, w))
    }

    /// All edges, normalized `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m);
        for (u, nbrs) in self.adj.iter().enumerate() {
            let u = u as NodeId;
            for (&v, &w) in nbrs.range(u + 1..) {
                out.push(Edge { u, v, w });
            }
        }
        out
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.edges().iter().map(|e| e.w).sum()
    }
}
