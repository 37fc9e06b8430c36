//! Benchmark and verification drivers shared by the CLI and the test suite.
//!
//! The benchmark protocol measures *algorithmic speedup*: how much faster a
//! dynamic update repairs the matching than recomputing it from scratch.
//! Each repetition samples a fresh workload against the base graph, applies
//! it to a throwaway copy (copying excluded from timings), times the update
//! routine, then times a full static run on the updated graph. The verifier
//! replays seeded random workloads and insists on queue-level equality with
//! the static rerun.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::dynamic_matcher::{
    apply_batch_insert, apply_batch_mixed, apply_batch_remove, BatchError, Instrument,
    UpdateStats,
};
use crate::generators::{
    gen_b_function, gen_gnp, sample_insert_batch, sample_mixed_batch, sample_remove_batch,
    BMode, GenError, DEFAULT_WEIGHT_RANGE,
};
use crate::graph::DynamicGraph;
use crate::oracle::check_static_equivalence;
use crate::static_matcher::run_static;
use crate::suitor::BFunction;

/// Workload flavour for benchmarks and verification trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Insert,
    Remove,
    Mixed,
}

impl std::fmt::Display for OpKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            OpKind::Insert => "insert",
            OpKind::Remove => "remove",
            OpKind::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// Benchmark configuration: workload shape and repetition count.
#[derive(Debug, Clone, Copy)]
pub struct BenchParams {
    pub op: OpKind,
    pub batch_size: usize,
    pub reps: usize,
    pub seed: u64,
    /// Verify queue-level equality with a static rerun every repetition.
    pub check: bool,
    pub weight_range: (f64, f64),
}

impl Default for BenchParams {
    fn default() -> Self {
        BenchParams {
            op: OpKind::Insert,
            batch_size: 1,
            reps: 50,
            seed: 0,
            check: false,
            weight_range: DEFAULT_WEIGHT_RANGE,
        }
    }
}

/// One repetition's measurements.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub rep: usize,
    pub static_time_ns: u64,
    pub dynamic_time_ns: u64,
    /// `static_time_ns / dynamic_time_ns`.
    pub speedup: f64,
    pub stats: UpdateStats,
    pub matching_weight_before: f64,
    pub matching_weight_after: f64,
    /// Whether this repetition was verified against a static rerun.
    pub equality_checked: bool,
}

/// Aggregates over all repetitions.
#[derive(Debug, Clone, Serialize)]
pub struct BenchSummary {
    pub op: OpKind,
    pub batch_size: usize,
    pub reps: usize,
    pub median_speedup: f64,
    pub geomean_speedup: f64,
    pub median_static_time_ns: u64,
    pub median_dynamic_time_ns: u64,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Batch(#[from] BatchError),
    #[error("invalid harness parameter: {0}")]
    InvalidParam(String),
    #[error("repetition {rep}: dynamic state diverged from static rerun")]
    EqualityFailed { rep: usize },
}

/// Derive an independent stream seed from a base seed and an index
/// (SplitMix64 finalizer; stable and documented so runs are reproducible).
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn median_f64(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

fn median_u64(values: &mut [u64]) -> u64 {
    values.sort_unstable();
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2
    }
}

/// Run the benchmark protocol against a base graph and capacity function.
///
/// The base matching is built once; each repetition works on clones. The
/// dynamic timing covers exactly the batch-apply call (graph mutation plus
/// matching repair); the static timing covers one full run on the updated
/// graph. Sampling, cloning and verification are not timed.
pub fn run_bench(
    g0: &DynamicGraph,
    b: &BFunction,
    params: &BenchParams,
) -> Result<(Vec<BenchRecord>, BenchSummary), HarnessError> {
    if params.reps == 0 {
        return Err(HarnessError::InvalidParam("reps must be at least 1".into()));
    }
    if params.batch_size == 0 {
        return Err(HarnessError::InvalidParam("batch size must be at least 1".into()));
    }
    let state0 = run_static(g0, b);
    let weight_before = state0.matching_weight();
    let mut records = Vec::with_capacity(params.reps);

    for rep in 0..params.reps {
        let batch_seed = mix_seed(params.seed, rep as u64);
        let mut g = g0.clone();
        let mut state = state0.clone();

        let (dynamic_time_ns, stats) = match params.op {
            OpKind::Insert => {
                let batch =
                    sample_insert_batch(g0, params.batch_size, params.weight_range, batch_seed)?;
                let t = Instant::now();
                let stats =
                    apply_batch_insert(&mut g, &mut state, &batch, Instrument::CountersOnly)?;
                (t.elapsed().as_nanos() as u64, stats)
            }
            OpKind::Remove => {
                let batch = sample_remove_batch(g0, params.batch_size, batch_seed)?;
                let t = Instant::now();
                let stats =
                    apply_batch_remove(&mut g, &mut state, &batch, Instrument::CountersOnly)?;
                (t.elapsed().as_nanos() as u64, stats)
            }
            OpKind::Mixed => {
                let batch =
                    sample_mixed_batch(g0, params.batch_size, params.weight_range, batch_seed)?;
                let t = Instant::now();
                let stats =
                    apply_batch_mixed(&mut g, &mut state, &batch, Instrument::CountersOnly)?;
                (t.elapsed().as_nanos() as u64, stats)
            }
        };

        let t = Instant::now();
        let fresh = run_static(&g, b);
        let static_time_ns = t.elapsed().as_nanos() as u64;

        if params.check && fresh != state {
            return Err(HarnessError::EqualityFailed { rep });
        }

        let speedup = static_time_ns as f64 / dynamic_time_ns.max(1) as f64;
        records.push(BenchRecord {
            rep,
            static_time_ns,
            dynamic_time_ns,
            speedup,
            stats,
            matching_weight_before: weight_before,
            matching_weight_after: state.matching_weight(),
            equality_checked: params.check,
        });
    }

    let mut speedups: Vec<f64> = records.iter().map(|r| r.speedup).collect();
    let geomean =
        (speedups.iter().map(|s| s.ln()).sum::<f64>() / speedups.len() as f64).exp();
    let mut statics: Vec<u64> = records.iter().map(|r| r.static_time_ns).collect();
    let mut dynamics: Vec<u64> = records.iter().map(|r| r.dynamic_time_ns).collect();
    let summary = BenchSummary {
        op: params.op,
        batch_size: params.batch_size,
        reps: params.reps,
        median_speedup: median_f64(&mut speedups),
        geomean_speedup: geomean,
        median_static_time_ns: median_u64(&mut statics),
        median_dynamic_time_ns: median_u64(&mut dynamics),
    };
    Ok((records, summary))
}

// ---------------------------------------------------------------------------
// Verification sweeps.

/// Verification sweep configuration. `n`/`p` pin one axis value; when unset
/// the sweep cycles n over {16, 64, 256} and p over {0.02, 0.1, 0.3}.
/// Capacity modes cycle over b = 1, 2, 3, 10 and uniform 1..=10; operations
/// over insert/remove/mixed; batch sizes over {1, 10, 100}.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub n: Option<usize>,
    pub p: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { trials: 1000, seed: 0, n: None, p: None }
    }
}

/// Everything needed to reproduce a failing trial.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyFailure {
    pub trial: usize,
    pub base_seed: u64,
    pub n: usize,
    pub p: f64,
    pub b_mode: String,
    pub op: OpKind,
    pub batch_size: usize,
    pub reason: String,
}

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "trial {} failed ({}): n={} p={} b={} op={} batch={} base_seed={}",
            self.trial, self.reason, self.n, self.p, self.b_mode, self.op,
            self.batch_size, self.base_seed
        )
    }
}

fn b_mode_label(mode: BMode) -> String {
    match mode {
        BMode::Constant(c) => format!("const:{c}"),
        BMode::Uniform(lo, hi) => format!("uniform:{lo},{hi}"),
    }
}

/// Replay `trials` seeded random workloads and check queue-level equality
/// with a static rerun after every batch. Returns the trial count on
/// success, or the first failing trial's reproduction recipe.
pub fn run_verify(cfg: &VerifyConfig) -> Result<usize, Box<VerifyFailure>> {
    let ns: Vec<usize> = cfg.n.map_or_else(|| vec![16, 64, 256], |n| vec![n]);
    let ps: Vec<f64> = cfg.p.map_or_else(|| vec![0.02, 0.1, 0.3], |p| vec![p]);
    let b_modes = [
        BMode::Constant(1),
        BMode::Constant(2),
        BMode::Constant(3),
        BMode::Constant(10),
        BMode::Uniform(1, 10),
    ];
    let ops = [OpKind::Insert, OpKind::Remove, OpKind::Mixed];
    let batch_sizes = [1usize, 10, 100];

    let cells = ns.len() * ps.len() * b_modes.len() * ops.len() * batch_sizes.len();
    for trial in 0..cfg.trials {
        // Cycle through the parameter grid so every combination is hit.
        let mut cell = trial % cells;
        let n = ns[cell % ns.len()];
        cell /= ns.len();
        let p = ps[cell % ps.len()];
        cell /= ps.len();
        let b_mode = b_modes[cell % b_modes.len()];
        cell /= b_modes.len();
        let op = ops[cell % ops.len()];
        cell /= ops.len();
        let batch_size = batch_sizes[cell % batch_sizes.len()];

        let fail = |reason: &str| {
            Box::new(VerifyFailure {
                trial,
                base_seed: cfg.seed,
                n,
                p,
                b_mode: b_mode_label(b_mode),
                op,
                batch_size,
                reason: reason.to_string(),
            })
        };

        let graph_seed = mix_seed(cfg.seed, 3 * trial as u64);
        let b_seed = mix_seed(cfg.seed, 3 * trial as u64 + 1);
        let batch_seed = mix_seed(cfg.seed, 3 * trial as u64 + 2);

        let mut g = gen_gnp(n, p, DEFAULT_WEIGHT_RANGE, graph_seed)
            .map_err(|e| fail(&format!("gen_gnp: {e}")))?;
        let b = gen_b_function(n, b_mode, b_seed)
            .map_err(|e| fail(&format!("gen_b_function: {e}")))?;
        let mut state = run_static(&g, &b);

        // Sparse instances cannot always honor the nominal batch size
        // (e.g. removing 100 edges from a 3-edge graph): clamp to what
        // exists so every cell still exercises its operation kind.
        let result = match op {
            OpKind::Insert => {
                let avail = n * (n - 1) / 2 - g.edge_count();
                let k = batch_size.min(avail);
                let batch = sample_insert_batch(&g, k, DEFAULT_WEIGHT_RANGE, batch_seed)
                    .map_err(|e| fail(&format!("sample_insert_batch: {e}")))?;
                apply_batch_insert(&mut g, &mut state, &batch, Instrument::CountersOnly)
            }
            OpKind::Remove => {
                let k = batch_size.min(g.edge_count());
                let batch = sample_remove_batch(&g, k, batch_seed)
                    .map_err(|e| fail(&format!("sample_remove_batch: {e}")))?;
                apply_batch_remove(&mut g, &mut state, &batch, Instrument::CountersOnly)
            }
            OpKind::Mixed => {
                let batch =
                    sample_mixed_batch(&g, batch_size, DEFAULT_WEIGHT_RANGE, batch_seed)
                        .map_err(|e| fail(&format!("sample_mixed_batch: {e}")))?;
                apply_batch_mixed(&mut g, &mut state, &batch, Instrument::CountersOnly)
            }
        };
        result.map_err(|e| fail(&format!("batch apply: {e}")))?;

        if !state.check_s_invariant(&g) {
            return Err(fail("queue invariant violated"));
        }
        if !check_static_equivalence(&g, &b, &state) {
            return Err(fail("state diverged from static rerun"));
        }
    }
    Ok(cfg.trials)
}
