//! Half-approximate maximum-weight b-matching, static and fully dynamic.
//!
//! A b-matching selects a subset of edges so that each node `u` is covered
//! at most `b(u)` times; the goal is to maximize total selected weight.
//! This crate implements the suitor-based greedy that guarantees at least
//! half the optimal weight, plus dynamic repair routines that maintain that
//! guarantee under edge insertions and removals (single or batched) while
//! touching only the region of the graph the change actually perturbs —
//! the repaired state is identical, queue for queue, to a full rerun.
//!
//! Also here: an exact exponential-time solver for small instances (used to
//! validate the approximation ratio), seeded random-graph generators
//! (Erdős–Rényi and recursive-matrix), plain-text edge-list I/O, and the
//! benchmark/verification harness behind the CLI.

pub mod dynamic_matcher;
pub mod edgelist;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod static_matcher;
pub mod suitor;

pub use dynamic_matcher::{
    apply_batch_insert, apply_batch_mixed, apply_batch_remove, apply_insert, apply_remove,
    find_affected, parse_batch, BatchError, BatchParseError, EdgeOp, Instrument, PathStep,
    PathTrace, StepKind, UpdateStats,
};
pub use edgelist::{read_edge_list, write_edge_list, write_edge_list_with_header, ParseError};
pub use generators::{
    gen_b_function, gen_gnp, gen_rmat, sample_insert_batch, sample_mixed_batch,
    sample_remove_batch, BMode, GenError, RmatProbs, DEFAULT_WEIGHT_RANGE,
};
pub use graph::{
    compare_proposals, entry_beats, entry_cmp, DynamicGraph, Edge, GraphError, NodeId,
    Proposal, ProposalError, Weight,
};
pub use harness::{
    mix_seed, run_bench, run_verify, BenchParams, BenchRecord, BenchSummary, HarnessError,
    OpKind, VerifyConfig, VerifyFailure,
};
pub use oracle::{
    check_half_approx, check_static_equivalence, exact_mwbm, ExactMatching, OracleError,
    EXACT_EDGE_BUDGET,
};
pub use static_matcher::{find_partner, run_static, run_static_with_order};
pub use suitor::{BFunction, MatchingState, QueueError};
