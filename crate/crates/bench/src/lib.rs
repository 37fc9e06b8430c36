//! Shared setup for the criterion benches: a settled matching instance plus
//! pre-sampled update pools, so the timed closures touch nothing but the
//! update routines themselves.

use bmatch::{
    gen_rmat, run_static, sample_insert_batch, sample_remove_batch, BFunction, DynamicGraph,
    MatchingState, NodeId, RmatProbs, Weight, DEFAULT_WEIGHT_RANGE,
};

pub struct Prepared {
    pub g: DynamicGraph,
    pub b: BFunction,
    pub state: MatchingState,
    pub inserts: Vec<(NodeId, NodeId, Weight)>,
    pub removals: Vec<(NodeId, NodeId)>,
}

/// Generate a recursive-matrix graph (uniform quadrants), run the static
/// matcher once, and sample `pool` insertions and removals to cycle through.
pub fn prepare(scale: u32, edge_factor: usize, bk: u32, pool: usize, seed: u64) -> Prepared {
    let g = gen_rmat(scale, edge_factor, RmatProbs::er(), DEFAULT_WEIGHT_RANGE, seed)
        .expect("generator parameters are valid");
    let b = BFunction::constant(g.node_count(), bk);
    let state = run_static(&g, &b);
    let inserts = sample_insert_batch(&g, pool, DEFAULT_WEIGHT_RANGE, seed ^ 1)
        .expect("graph has room for the insert pool");
    let removals =
        sample_remove_batch(&g, pool, seed ^ 2).expect("graph has enough edges to remove");
    Prepared { g, b, state, inserts, removals }
}
