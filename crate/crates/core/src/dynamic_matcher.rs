//! Dynamic edge updates that keep the matcher state exactly where a full
//! static rerun would put it.
//!
//! Single insertions and removals first mutate the graph, then decide in
//! O(1) whether the matching can change at all. Only when it can, the
//! affected region is repaired by walking an *update path*: starting from a
//! node that lost a partner, repeatedly match it to its best admissible
//! neighbour, evicting weaker pairings whose freed endpoints continue the
//! walk. Evictions on the walk's own side leave a "loose end" that is
//! repaired by a follow-up walk. Each eviction trades a queue entry for a
//! strictly better one, so walks settle quickly and the total work is
//! near-constant per update in practice.
//!
//! Batched variants apply the same logic per edge; the guarantee (state
//! equals a static rerun on the updated graph) is preserved across any
//! mix of operations.

use std::io::{self, BufRead};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{entry_beats, DynamicGraph, GraphError, NodeId, Weight};
use crate::static_matcher::find_partner;
use crate::suitor::MatchingState;

/// Instrumentation level for update calls. Counters (including per-path
/// edge counts) are always collected; full node-by-node path traces are
/// recorded only on request, keeping the hot path allocation-light.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Instrument {
    #[default]
    CountersOnly,
    RecordPaths,
}

/// What one edge of a recorded update path did to the matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    /// The walk matched the current node to this partner.
    Pair,
    /// The pairing evicted this node, which continues the walk.
    Unpair,
}

/// One edge of a recorded update path: the node reached, how, and the
/// traversed edge's weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathStep {
    pub node: NodeId,
    pub kind: StepKind,
    pub w: Weight,
}

/// A recorded update path: `start`, then one step per traversed edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathTrace {
    pub start: NodeId,
    pub steps: Vec<PathStep>,
}

/// Counters for one update (or accumulated over a batch).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct UpdateStats {
    /// Distinct nodes whose queues changed, summed per update over a batch.
    pub affected_nodes: usize,
    /// Edge count of every update-path walk, in execution order. Walks that
    /// immediately find nothing contribute a 0.
    pub path_lengths: Vec<usize>,
    /// Number of loose-end walks triggered.
    pub loose_ends: usize,
    /// Number of queue insert/remove operations performed.
    pub queue_ops: usize,
    /// Full traces, only populated under `Instrument::RecordPaths`.
    #[serde(skip)]
    pub paths: Vec<PathTrace>,
}

impl UpdateStats {
    /// Fold another update's counters into this one.
    pub fn merge(&mut self, other: UpdateStats) {
        self.affected_nodes += other.affected_nodes;
        self.path_lengths.extend(other.path_lengths);
        self.loose_ends += other.loose_ends;
        self.queue_ops += other.queue_ops;
        self.paths.extend(other.paths);
    }
}

/// A single update operation, as parsed from a batch file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EdgeOp {
    Insert { u: NodeId, v: NodeId, w: Weight },
    Remove { u: NodeId, v: NodeId },
}

#[derive(Debug, Error)]
pub enum BatchError {
    /// The same unordered pair appears twice in an insert or remove batch.
    #[error("pair ({0}, {1}) appears more than once in the batch")]
    DuplicatePair(NodeId, NodeId),
    /// Graph-layer failure; updates before the failing one remain applied.
    #[error(transparent)]
    Graph(#[from] GraphError),
}

// ---------------------------------------------------------------------------
// Instrumentation plumbing.

struct Collector {
    instr: Instrument,
    stats: UpdateStats,
    /// Owners of every queue edit in this update; deduplicated at the end.
    touched: Vec<NodeId>,
}

impl Collector {
    fn new(instr: Instrument) -> Self {
        Collector {
            instr,
            stats: UpdateStats::default(),
            touched: Vec::new(),
        }
    }

    #[inline]
    fn note(&mut self, owner: NodeId) {
        self.stats.queue_ops += 1;
        self.touched.push(owner);
    }

    fn finish(mut self) -> UpdateStats {
        self.touched.sort_unstable();
        self.touched.dedup();
        self.stats.affected_nodes = self.touched.len();
        self.stats
    }
}

// ---------------------------------------------------------------------------
// Update-path traversal.

/// Walk one update path from `x` and append any loose end to `pending`.
/// Returns the number of edges traversed.
fn traverse_path(
    g: &DynamicGraph,
    state: &mut MatchingState,
    x: NodeId,
    col: &mut Collector,
    pending: &mut Vec<NodeId>,
) -> usize {
    let mut cu = x;
    let mut loose_end: Option<NodeId> = None;
    let mut edges = 0usize;
    let mut trace = match col.instr {
        Instrument::RecordPaths => Some(PathTrace { start: x, steps: Vec::new() }),
        Instrument::CountersOnly => None,
    };

    loop {
        // Best admissible partner for cu (acceptance tested on the partner's
        // side)...
        let Some((ca, w)) = find_partner(g, state, cu) else {
            break;
        };
        // ...which must also improve cu's own queue. Trivially true while cu
        // is unsaturated; decisive when a walk starts at a node that has
        // been re-saturated in the meantime.
        if !entry_beats((w, ca), state.min_entry(cu).map(|(p, pw)| (pw, p))) {
            break;
        }

        let prev_cu = state
            .insert(cu, ca, w)
            .expect("candidate beats cu's minimum");
        col.note(cu);
        let prev_ca = state
            .insert(ca, cu, w)
            .expect("find_partner guarantees acceptance at ca");
        col.note(ca);
        edges += 1;
        if let Some(t) = trace.as_mut() {
            t.steps.push(PathStep { node: ca, kind: StepKind::Pair, w });
        }

        if let Some((evicted, _)) = prev_cu {
            // cu was saturated: its weakest pairing broke on cu's own side.
            // The freed node is repaired by a follow-up walk, not this one.
            state
                .remove(evicted, cu)
                .expect("evicted pairing was mutual");
            col.note(evicted);
            debug_assert!(
                loose_end.is_none(),
                "a single walk produced two loose ends"
            );
            loose_end = Some(evicted);
        }

        match prev_ca {
            Some((evicted, ew)) => {
                // ca dropped its weakest pairing; the freed node extends the
                // path and looks for a replacement next.
                state
                    .remove(evicted, ca)
                    .expect("evicted pairing was mutual");
                col.note(evicted);
                edges += 1;
                if let Some(t) = trace.as_mut() {
                    t.steps.push(PathStep { node: evicted, kind: StepKind::Unpair, w: ew });
                }
                cu = evicted;
            }
            None => break,
        }
    }

    if let Some(t) = trace {
        col.stats.paths.push(t);
    }
    if let Some(le) = loose_end {
        col.stats.loose_ends += 1;
        pending.push(le);
    }
    edges
}

/// Run update-path walks starting from `x`, following loose ends until none
/// remain, recording one path length per walk.
fn repair_from(g: &DynamicGraph, state: &mut MatchingState, x: NodeId, col: &mut Collector) {
    let mut pending = vec![x];
    let mut walks = 0usize;
    while let Some(start) = pending.pop() {
        walks += 1;
        debug_assert!(
            walks <= 4 * state.node_count() + 8,
            "runaway loose-end recursion"
        );
        let edges = traverse_path(g, state, start, col, &mut pending);
        col.stats.path_lengths.push(edges);
    }
}

/// Repair the matching after `x` lost a standing pairing (or may otherwise
/// have become improvable). The state must satisfy the at-rest invariant
/// (all queue entries mutual and backed by live edges); on return it does
/// again, and no node on the traversed paths can improve its queue.
pub fn find_affected(
    g: &DynamicGraph,
    state: &mut MatchingState,
    x: NodeId,
    instr: Instrument,
) -> UpdateStats {
    let mut col = Collector::new(instr);
    repair_from(g, state, x, &mut col);
    col.finish()
}

// ---------------------------------------------------------------------------
// Single-edge updates.

/// Insert edge `{u, v}` with weight `w` into the graph and repair the
/// matching. Graph errors (duplicate edge, self loop, bad weight, bad node)
/// leave both graph and matching untouched.
pub fn apply_insert(
    g: &mut DynamicGraph,
    state: &mut MatchingState,
    u: NodeId,
    v: NodeId,
    w: Weight,
    instr: Instrument,
) -> Result<UpdateStats, GraphError> {
    g.add_edge(u, v, w)?;
    let mut col = Collector::new(instr);

    // The new edge enters the matching iff it beats both endpoint minima;
    // otherwise neither queue can change anywhere (cheap no-op gate).
    let enters = entry_beats((w, v), state.min_entry(u).map(|(p, pw)| (pw, p)))
        && entry_beats((w, u), state.min_entry(v).map(|(p, pw)| (pw, p)));
    if enters {
        let start_u = state.insert(u, v, w).expect("gate checked u's minimum");
        col.note(u);
        let start_v = state.insert(v, u, w).expect("gate checked v's minimum");
        col.note(v);
        // Unpair both evicted suitors first so the state is consistent
        // before any walk observes it, then repair each in turn.
        if let Some((su, _)) = start_u {
            state.remove(su, u).expect("evicted pairing was mutual");
            col.note(su);
        }
        if let Some((sv, _)) = start_v {
            state.remove(sv, v).expect("evicted pairing was mutual");
            col.note(sv);
        }
        if let Some((su, _)) = start_u {
            repair_from(g, state, su, &mut col);
        }
        if let Some((sv, _)) = start_v {
            repair_from(g, state, sv, &mut col);
        }
    }
    Ok(col.finish())
}

/// Remove edge `{u, v}` from the graph and repair the matching. Removing an
/// unmatched edge cannot change any queue and is a no-op beyond the graph.
pub fn apply_remove(
    g: &mut DynamicGraph,
    state: &mut MatchingState,
    u: NodeId,
    v: NodeId,
    instr: Instrument,
) -> Result<UpdateStats, GraphError> {
    g.remove_edge(u, v)?;
    let mut col = Collector::new(instr);

    let matched = state.contains(u, v) && state.contains(v, u);
    debug_assert_eq!(
        state.contains(u, v),
        state.contains(v, u),
        "at-rest entries must be mutual"
    );
    if matched {
        state.remove(u, v).expect("checked above");
        col.note(u);
        state.remove(v, u).expect("checked above");
        col.note(v);
        repair_from(g, state, u, &mut col);
        repair_from(g, state, v, &mut col);
    }
    Ok(col.finish())
}

// ---------------------------------------------------------------------------
// Batched updates.

fn check_distinct_pairs(pairs: impl Iterator<Item = (NodeId, NodeId)>) -> Result<(), BatchError> {
    let mut seen = std::collections::HashSet::new();
    for (u, v) in pairs {
        let key = if u <= v { (u, v) } else { (v, u) };
        if !seen.insert(key) {
            return Err(BatchError::DuplicatePair(u, v));
        }
    }
    Ok(())
}

/// Insert a batch of edges, repairing after each. The batch must not name
/// the same unordered pair twice; that is rejected before anything is
/// applied. A graph-layer failure aborts mid-batch with the already-applied
/// prefix retained.
pub fn apply_batch_insert(
    g: &mut DynamicGraph,
    state: &mut MatchingState,
    edges: &[(NodeId, NodeId, Weight)],
    instr: Instrument,
) -> Result<UpdateStats, BatchError> {
    check_distinct_pairs(edges.iter().map(|&(u, v, _)| (u, v)))?;
    let mut stats = UpdateStats::default();
    for &(u, v, w) in edges {
        stats.merge(apply_insert(g, state, u, v, w, instr)?);
    }
    Ok(stats)
}

/// Remove a batch of edges, repairing after each. Same duplicate and
/// failure semantics as `apply_batch_insert`.
pub fn apply_batch_remove(
    g: &mut DynamicGraph,
    state: &mut MatchingState,
    pairs: &[(NodeId, NodeId)],
    instr: Instrument,
) -> Result<UpdateStats, BatchError> {
    check_distinct_pairs(pairs.iter().copied())?;
    let mut stats = UpdateStats::default();
    for &(u, v) in pairs {
        stats.merge(apply_remove(g, state, u, v, instr)?);
    }
    Ok(stats)
}

/// Apply a sequence of mixed operations in order. Pairs may repeat (e.g.
/// insert followed by removal of the same edge); each operation must simply
/// be valid when its turn comes.
pub fn apply_batch_mixed(
    g: &mut DynamicGraph,
    state: &mut MatchingState,
    ops: &[EdgeOp],
    instr: Instrument,
) -> Result<UpdateStats, BatchError> {
    let mut stats = UpdateStats::default();
    for &op in ops {
        let s = match op {
            EdgeOp::Insert { u, v, w } => apply_insert(g, state, u, v, w, instr)?,
            EdgeOp::Remove { u, v } => apply_remove(g, state, u, v, instr)?,
        };
        stats.merge(s);
    }
    Ok(stats)
}

// ---------------------------------------------------------------------------
// Batch file format.

#[derive(Debug, Error)]
pub enum BatchParseError {
    #[error("line {line}: expected `+ u v w` or `- u v`")]
    Malformed { line: usize },
    #[error("line {line}: invalid number `{token}`")]
    BadToken { line: usize, token: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Parse a batch file: one op per line, `+ u v w` for insertions and
/// `- u v` for removals; `#` starts a comment line.
pub fn parse_batch<R: BufRead>(reader: R) -> Result<Vec<EdgeOp>, BatchParseError> {
    let mut ops = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_id = |t: &str| -> Result<NodeId, BatchParseError> {
            t.parse().map_err(|_| BatchParseError::BadToken {
                line: line_no,
                token: t.to_string(),
            })
        };
        match tokens.as_slice() {
            ["+", u, v, w] => {
                let w: Weight = w.parse().map_err(|_| BatchParseError::BadToken {
                    line: line_no,
                    token: w.to_string(),
                })?;
                ops.push(EdgeOp::Insert { u: parse_id(u)?, v: parse_id(v)?, w });
            }
            ["-", u, v] => {
                ops.push(EdgeOp::Remove { u: parse_id(u)?, v: parse_id(v)? });
            }
            _ => return Err(BatchParseError::Malformed { line: line_no }),
        }
    }
    Ok(ops)
}
