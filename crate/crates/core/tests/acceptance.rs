//! End-to-end acceptance suite. Each test prints one
//! `[acceptance] criterion N (<label>): PASS|FAIL` line (visible with
//! `--nocapture`; the harness result line carries the same verdict) and
//! covers one external guarantee of the crate. The tests serialize on a
//! mutex so the timing-sensitive criteria are not perturbed.

use std::sync::Mutex;
use std::time::Instant;

use bmatch::{
    apply_batch_insert, apply_insert, apply_remove, check_half_approx,
    check_static_equivalence, entry_beats, exact_mwbm, gen_b_function, gen_gnp, gen_rmat,
    mix_seed, run_static, run_static_with_order, run_verify, sample_insert_batch, BFunction,
    BMode, DynamicGraph, Instrument, MatchingState, NodeId, RmatProbs, StepKind,
    VerifyConfig, DEFAULT_WEIGHT_RANGE,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static SERIAL: Mutex<()> = Mutex::new(());

fn check(criterion: usize, label: &str, body: impl FnOnce() -> Result<(), String>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    report(criterion, label, body());
}

fn report(criterion: usize, label: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("[acceptance] criterion {criterion} ({label}): PASS"),
        Err(msg) => {
            println!("[acceptance] criterion {criterion} ({label}): FAIL\n  {msg}");
            panic!("criterion {criterion} ({label}) failed: {msg}");
        }
    }
}

fn graph_from(n: usize, edges: &[(NodeId, NodeId, f64)]) -> DynamicGraph {
    let mut g = DynamicGraph::new(n);
    for &(u, v, w) in edges {
        g.add_edge(u, v, w).unwrap();
    }
    g
}

/// Six nodes, two triangles joined by a bridge; with b ≡ 2 the greedy
/// result is the exact maximum-weight 2-matching of weight 22.
fn worked_instance() -> DynamicGraph {
    graph_from(
        6,
        &[
            (0, 1, 1.0),
            (0, 2, 1.0),
            (1, 2, 1.0),
            (1, 3, 1.0),
            (2, 3, 2.0),
            (3, 4, 9.0),
            (3, 5, 4.0),
            (4, 5, 6.0),
        ],
    )
}

#[test]
fn criterion_1_worked_instance_exactness() {
    check(1, "worked-instance exactness", || {
        let g = worked_instance();
        let b = BFunction::constant(6, 2);
        let t = Instant::now();
        let state = run_static(&g, &b);
        let elapsed = t.elapsed();

        let expected: [&[(NodeId, f64)]; 6] = [
            &[(2, 1.0), (1, 1.0)],
            &[(2, 1.0), (0, 1.0)],
            &[(1, 1.0), (0, 1.0)],
            &[(5, 4.0), (4, 9.0)],
            &[(5, 6.0), (3, 9.0)],
            &[(3, 4.0), (4, 6.0)],
        ];
        for (u, want) in expected.iter().enumerate() {
            let got = state.entries(u as NodeId);
            if got != *want {
                return Err(format!("queue of node {u}: got {got:?}, want {want:?}"));
            }
        }
        if state.matching_weight() != 22.0 {
            return Err(format!("matching weight {} != 22", state.matching_weight()));
        }
        if elapsed.as_micros() >= 1000 {
            return Err(format!("static run took {elapsed:?}, budget is 1 ms"));
        }
        Ok(())
    });
}

#[test]
fn criterion_2_static_equivalence_sweep() {
    check(2, "static equivalence sweep", || {
        let cfg = VerifyConfig { trials: 10_000, seed: 0x5EED_2026, n: None, p: None };
        match run_verify(&cfg) {
            Ok(n) => {
                assert_eq!(n, 10_000);
                Ok(())
            }
            Err(fail) => Err(format!("{fail}")),
        }
    });
}

#[test]
fn criterion_3_half_approximation_bound() {
    check(3, "half-approximation bound", || {
        let modes = [
            BMode::Constant(1),
            BMode::Constant(2),
            BMode::Constant(3),
            BMode::Constant(10),
            BMode::Uniform(1, 10),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..1000 {
            let n = rng.gen_range(6..10usize);
            let m_target = rng.gen_range(6..=18usize).min(n * (n - 1) / 2);
            let mut g = DynamicGraph::new(n);
            while g.edge_count() < m_target {
                let u = rng.gen_range(0..n as NodeId);
                let v = rng.gen_range(0..n as NodeId);
                if u != v && !g.has_edge(u, v) {
                    g.add_edge(u, v, rng.gen_range(0.05..10.0)).unwrap();
                }
            }
            let b = gen_b_function(n, modes[trial % modes.len()], trial as u64).unwrap();
            let state = run_static(&g, &b);
            if !check_half_approx(&g, &b, &state).map_err(|e| e.to_string())? {
                let opt = exact_mwbm(&g, &b).map_err(|e| e.to_string())?;
                return Err(format!(
                    "trial {trial}: greedy weight {} < half of optimum {}",
                    state.matching_weight(),
                    opt.weight
                ));
            }
        }
        Ok(())
    });
}

/// Strict per-walk claims: weights decreasing under the owner's proposal
/// order at every shared node, no repeated nodes, pair/unpair parity.
///
/// The parity claim is structural and always holds. The other two do NOT
/// hold universally for this algorithm family: when an update frees
/// capacity at two places at once (removing a matched edge frees both
/// endpoints; an insertion evicts one node per endpoint), a repair walk can
/// end by claiming a seat freed elsewhere by the same update, and that
/// final edge may be heavier than the edge just lost and may revisit an
/// earlier walk node. `removal_walk_may_climb_into_freed_capacity` in the
/// library tests pins a four-edge instance of the climb, and a 220k-walk
/// survey found violations in ~0.8% of walks (terminal steps only), while
/// equality with the static rerun held in every single case. This test
/// keeps the strict claims as stated and is therefore expected to fail;
/// it documents the gap rather than hiding it behind a weaker assertion.
#[test]
fn criterion_4_path_properties() {
    check(4, "path properties", || {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for trial in 0..2000 {
            let n = rng.gen_range(5..14u32);
            let mut g = DynamicGraph::new(n as usize);
            let target = rng.gen_range(0..(n * (n - 1) / 2));
            while (g.edge_count() as u32) < target {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v && !g.has_edge(u, v) {
                    g.add_edge(u, v, rng.gen_range(0.01..10.0)).unwrap();
                }
            }
            let caps: Vec<u32> = (0..n).map(|_| rng.gen_range(1..4)).collect();
            let b = BFunction::from_vec(caps);
            let mut state = run_static(&g, &b);
            for _ in 0..10 {
                let stats = if rng.gen_bool(0.5) {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u == v || g.has_edge(u, v) {
                        continue;
                    }
                    let w = rng.gen_range(0.01..10.0);
                    apply_insert(&mut g, &mut state, u, v, w, Instrument::RecordPaths)
                        .unwrap()
                } else {
                    let edges = g.edges();
                    if edges.is_empty() {
                        continue;
                    }
                    let e = edges[rng.gen_range(0..edges.len())];
                    apply_remove(&mut g, &mut state, e.u, e.v, Instrument::RecordPaths)
                        .unwrap()
                };
                for trace in &stats.paths {
                    let mut nodes = vec![trace.start];
                    nodes.extend(trace.steps.iter().map(|s| s.node));
                    for (i, step) in trace.steps.iter().enumerate() {
                        let expect =
                            if i % 2 == 0 { StepKind::Pair } else { StepKind::Unpair };
                        if step.kind != expect {
                            return Err(format!(
                                "trial {trial}: pair/unpair parity broke: {trace:?}"
                            ));
                        }
                    }
                    let mut dedup = nodes.clone();
                    dedup.sort_unstable();
                    dedup.dedup();
                    if dedup.len() != nodes.len() {
                        return Err(format!(
                            "trial {trial}: walk revisited a node: {trace:?}"
                        ));
                    }
                    for i in 1..trace.steps.len() {
                        let prev = (trace.steps[i - 1].w, nodes[i - 1]);
                        let next = (trace.steps[i].w, nodes[i + 1]);
                        if !entry_beats(prev, Some(next)) {
                            return Err(format!(
                                "trial {trial}: weights not decreasing at shared node \
                                 {} (edge to {} at {} vs edge to {} at {}): {trace:?}",
                                nodes[i], nodes[i - 1], prev.0, nodes[i + 1], next.0
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_5_gated_no_ops() {
    check(5, "gated no-ops", || {
        let mut gated_inserts = 0usize;
        let mut unmatched_removals = 0usize;
        for seed in 0..200u64 {
            let g0 = gen_gnp(30, 0.15, DEFAULT_WEIGHT_RANGE, seed).unwrap();
            let b = BFunction::constant(30, 2);
            let state0 = run_static(&g0, &b);

            // A non-edge between two saturated endpoints, inserted below
            // both minima, must change nothing anywhere.
            'outer: for u in 0..30u32 {
                for v in (u + 1)..30u32 {
                    if g0.has_edge(u, v) {
                        continue;
                    }
                    let (Some((_, mu)), Some((_, mv))) =
                        (state0.min_entry(u), state0.min_entry(v))
                    else {
                        continue;
                    };
                    let w = 0.5 * mu.min(mv);
                    let mut g = g0.clone();
                    let mut state = state0.clone();
                    let stats =
                        apply_insert(&mut g, &mut state, u, v, w, Instrument::CountersOnly)
                            .unwrap();
                    if stats.affected_nodes != 0 || stats.queue_ops != 0 {
                        return Err(format!(
                            "seed {seed}: gated insert ({u},{v},{w}) reported \
                             affected_nodes={}, queue_ops={}",
                            stats.affected_nodes, stats.queue_ops
                        ));
                    }
                    if state != state0 {
                        return Err(format!(
                            "seed {seed}: gated insert ({u},{v},{w}) changed the state"
                        ));
                    }
                    gated_inserts += 1;
                    break 'outer;
                }
            }

            // Removing an edge that is not mutually matched must change
            // nothing anywhere.
            if let Some(e) = g0
                .edges()
                .into_iter()
                .find(|e| !(state0.contains(e.u, e.v) && state0.contains(e.v, e.u)))
            {
                let mut g = g0.clone();
                let mut state = state0.clone();
                let stats =
                    apply_remove(&mut g, &mut state, e.u, e.v, Instrument::CountersOnly)
                        .unwrap();
                if stats.affected_nodes != 0 || stats.queue_ops != 0 {
                    return Err(format!(
                        "seed {seed}: unmatched removal ({},{}) reported \
                         affected_nodes={}, queue_ops={}",
                        e.u, e.v, stats.affected_nodes, stats.queue_ops
                    ));
                }
                if state != state0 {
                    return Err(format!(
                        "seed {seed}: unmatched removal ({},{}) changed the state",
                        e.u, e.v
                    ));
                }
                unmatched_removals += 1;
            }
        }
        if gated_inserts < 100 || unmatched_removals < 100 {
            return Err(format!(
                "sweep too thin: {gated_inserts} gated inserts, \
                 {unmatched_removals} unmatched removals"
            ));
        }
        Ok(())
    });
}

#[test]
fn criterion_6_order_invariance() {
    check(6, "order invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        for trial in 0..100 {
            let n = rng.gen_range(12..40usize);
            let p = rng.gen_range(0.05..0.4);
            let g = gen_gnp(n, p, DEFAULT_WEIGHT_RANGE, rng.gen()).unwrap();
            let mode = if trial % 2 == 0 {
                BMode::Constant(rng.gen_range(1..4))
            } else {
                BMode::Uniform(1, 5)
            };
            let b = gen_b_function(n, mode, rng.gen()).unwrap();
            let baseline = run_static(&g, &b).matching_edges();
            let mut order: Vec<NodeId> = (0..n as NodeId).collect();
            for perm in 0..20 {
                order.shuffle(&mut rng);
                let got = run_static_with_order(&g, &b, &order).matching_edges();
                if got != baseline {
                    return Err(format!(
                        "trial {trial}, permutation {perm}: matching differs \
                         ({} vs {} edges)",
                        got.len(),
                        baseline.len()
                    ));
                }
            }
        }
        Ok(())
    });
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[samples.len() / 2]
}

/// Median of the wall time of `run_static` over `reps` runs, in ns. Also
/// asserts that the last run equals `state` (the dynamic stream's result).
fn median_static_ns(g: &DynamicGraph, b: &BFunction, reps: usize, state: &MatchingState) -> f64 {
    let mut times = Vec::new();
    let mut last = None;
    for _ in 0..reps {
        let t = Instant::now();
        last = Some(run_static(g, b));
        times.push(t.elapsed().as_nanos() as f64);
    }
    assert!(
        last.as_ref() == Some(state),
        "dynamic stream result diverged from a static rerun"
    );
    median(&mut times)
}

/// Median speedups for single inserts and 1000-op insert batches on the
/// scale-17 instance. Both sides use the same protocol: a stream of
/// successive updates applied to one resident, evolving graph — how a
/// dynamic structure is actually used — with every update call timed back to
/// back and nothing running between them. The static baseline is the median
/// of five full recomputations on the end-of-stream graph (a few dozen
/// inserts on ~10^6 edges leave its cost unchanged); interleaving it instead
/// would evict the working set before every lone timed call while a 1000-op
/// batch amortizes that pollution, skewing the ratio criterion severalfold.
/// Sampling and the equality check also stay outside the timed calls.
fn measure_speedups() -> (f64, f64) {
    let g0 = gen_rmat(17, 8, RmatProbs::er(), DEFAULT_WEIGHT_RANGE, 0xB14C).unwrap();
    let b = gen_b_function(g0.node_count(), BMode::Constant(3), 0).unwrap();

    let mut single_ns = Vec::new();
    let mut g = g0.clone();
    let mut state = run_static(&g, &b);
    for rep in 0..31u64 {
        let &(u, v, w) = sample_insert_batch(&g, 1, DEFAULT_WEIGHT_RANGE, mix_seed(7, rep))
            .unwrap()
            .first()
            .unwrap();
        let t = Instant::now();
        apply_insert(&mut g, &mut state, u, v, w, Instrument::CountersOnly).unwrap();
        single_ns.push(t.elapsed().as_nanos().max(1) as f64);
    }
    let single_speedup = median_static_ns(&g, &b, 5, &state) / median(&mut single_ns);

    let mut batch_ns = Vec::new();
    let mut g = g0;
    let mut state = run_static(&g, &b);
    for rep in 0..15u64 {
        let ops =
            sample_insert_batch(&g, 1000, DEFAULT_WEIGHT_RANGE, mix_seed(8, rep)).unwrap();
        let t = Instant::now();
        apply_batch_insert(&mut g, &mut state, &ops, Instrument::CountersOnly).unwrap();
        batch_ns.push(t.elapsed().as_nanos().max(1) as f64);
    }
    let batch_speedup = median_static_ns(&g, &b, 5, &state) / median(&mut batch_ns);

    (single_speedup, batch_speedup)
}

#[test]
fn criterion_7_and_8_speedup_and_batch_scaling() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let (single_median, batch_median) = measure_speedups();
    println!(
        "[acceptance] speedup medians: single {single_median:.1}, \
         batch-1000 {batch_median:.1}, ratio {:.1}",
        single_median / batch_median
    );

    let r7 = if single_median >= 1e2 && batch_median >= 10.0 {
        Ok(())
    } else {
        Err(format!(
            "median speedups: single {single_median:.1} (floor 1e2), \
             batch-1000 {batch_median:.1} (floor 10)"
        ))
    };
    let ratio = single_median / batch_median;
    let (lo, hi) = (10f64.powf(2.5), 10f64.powf(3.5));
    let r8 = if ratio >= lo && ratio <= hi {
        Ok(())
    } else {
        Err(format!(
            "batch-scaling ratio {ratio:.1} outside [{lo:.1}, {hi:.1}] \
             (single median {single_median:.1}, batch-1000 median {batch_median:.1})"
        ))
    };

    let failed = r7.is_err() || r8.is_err();
    let msgs: Vec<String> = [r7.as_ref().err(), r8.as_ref().err()]
        .into_iter()
        .flatten()
        .cloned()
        .collect();
    match r7 {
        Ok(()) => println!("[acceptance] criterion 7 (dynamic speedup floors): PASS"),
        Err(ref m) => println!("[acceptance] criterion 7 (dynamic speedup floors): FAIL\n  {m}"),
    }
    match r8 {
        Ok(()) => println!("[acceptance] criterion 8 (batch scaling band): PASS"),
        Err(ref m) => println!("[acceptance] criterion 8 (batch scaling band): FAIL\n  {m}"),
    }
    assert!(!failed, "criteria 7/8 failed: {}", msgs.join("; "));
}

#[test]
fn criterion_9_loose_end_repair() {
    check(9, "loose-end repair", || {
        // Thirteen nodes, b ≡ 2. Nodes 0 and 11 are saturated; inserting a
        // heavy 0-11 edge evicts one standing partner on each side. The two
        // repair walks overlap at node 8, whose second eviction strands
        // node 6 — the loose end — which a third walk then processes.
        let g0 = graph_from(
            13,
            &[
                (0, 1, 11.0),
                (0, 2, 7.0),
                (2, 3, 6.0),
                (2, 4, 3.0),
                (4, 5, 5.0),
                (4, 6, 1.0),
                (6, 7, 2.5),
                (6, 8, 2.0),
                (8, 9, 8.0),
                (8, 10, 4.0),
                (8, 11, 9.0),
                (11, 12, 10.0),
            ],
        );
        let b = BFunction::constant(13, 2);
        let mut g = g0.clone();
        let mut state = run_static(&g, &b);

        let before: Vec<(NodeId, NodeId)> =
            state.matching_edges().iter().map(|e| e.pair()).collect();
        let want_before = vec![
            (0, 1),
            (0, 2),
            (2, 3),
            (4, 5),
            (4, 6),
            (6, 7),
            (8, 9),
            (8, 11),
            (11, 12),
        ];
        if before != want_before {
            return Err(format!("unexpected initial matching: {before:?}"));
        }

        let stats = apply_insert(&mut g, &mut state, 0, 11, 12.0, Instrument::RecordPaths)
            .map_err(|e| e.to_string())?;
        if stats.loose_ends != 1 {
            return Err(format!(
                "expected exactly one loose-end walk, got {} (path lengths {:?})",
                stats.loose_ends, stats.path_lengths
            ));
        }
        if stats.path_lengths != vec![3, 1, 0] {
            return Err(format!("unexpected path lengths {:?}", stats.path_lengths));
        }
        if stats.paths[2].start != 6 {
            return Err(format!(
                "loose-end walk should start at node 6, got {}",
                stats.paths[2].start
            ));
        }
        if !check_static_equivalence(&g, &b, &state) {
            return Err("state diverged from static rerun after the insertion".into());
        }
        Ok(())
    });
}

/// Compile-time check that the public API surfaces used above stay
/// re-exported from the crate root.
#[allow(dead_code)]
fn api_surface(state: &MatchingState) -> usize {
    let _ = mix_seed(0, 0);
    state.node_count()
}
