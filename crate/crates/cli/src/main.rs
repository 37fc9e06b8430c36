//! `bmatch`: command-line harness around the b-matching library. Five
//! subcommands: `gen` (write a generated graph as an edge list), `run-static`
//! (one static matching with a summary report), `verify` (randomized
//! dynamic-vs-static equality trials), `bench` (speedup measurements, NDJSON
//! or CSV), and `trace` (per-update instrumentation stream for a batch file).

mod spec;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bmatch::{
    apply_insert, apply_remove, gen_b_function, gen_gnp, gen_rmat, mix_seed, parse_batch,
    read_edge_list, run_bench, run_static, run_verify, write_edge_list_with_header,
    BFunction, BenchParams, BenchRecord, BenchSummary, DynamicGraph, EdgeOp, Instrument,
    NodeId, OpKind, UpdateStats, VerifyConfig,
};
use spec::{parse_b_spec, parse_gen_spec, parse_weight_range, GenSpec};

#[derive(Parser)]
#[command(name = "bmatch", version, about = "Dynamic b-matching toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph and write it as an edge list (with an `n m` header).
    Gen {
        #[command(flatten)]
        source: GraphSource,
        /// Seed for the generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout if omitted).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Compute a static b-matching and print a summary report.
    RunStatic {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        bspec: BSpec,
        /// Seed for graph generation and the uniform b draw.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run randomized trials checking that dynamic updates reproduce the
    /// static matcher's state exactly; nonzero exit on the first mismatch.
    Verify {
        /// Number of trials.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pin the node count (default sweeps 16, 64, 256).
        #[arg(long)]
        n: Option<usize>,
        /// Pin the edge probability (default sweeps 0.02, 0.1, 0.3).
        #[arg(long)]
        p: Option<f64>,
    },
    /// Measure the speedup of dynamic updates over static recomputation.
    Bench {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        bspec: BSpec,
        /// Kind of update batches to sample.
        #[arg(long, value_enum, default_value_t = OpArg::Insert)]
        op: OpArg,
        /// Updates per batch.
        #[arg(long, default_value_t = 1)]
        batch: usize,
        /// Repetitions (one record each).
        #[arg(long, default_value_t = 50)]
        reps: usize,
        /// Seed for generation, the b draw, and batch sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verify every repetition against a static rerun (not timed).
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Apply a batch file op by op, streaming per-update stats as NDJSON.
    Trace {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        bspec: BSpec,
        /// Batch file: `+ u v w` inserts, `- u v` removes, `#` comments.
        #[arg(long, value_name = "FILE")]
        batch_file: PathBuf,
        /// Seed for graph generation and the uniform b draw.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphSource {
    /// Read the graph from an edge-list file.
    #[arg(long, value_name = "FILE", conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generate it: `gnp:n=N,p=P` or `rmat:scale=S,ef=F[,probs=a,b,c,d]`.
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
    /// Edge-weight range (LO,HI]; weights are drawn uniformly from it.
    #[arg(long, value_name = "LO,HI", default_value = "0,1")]
    weights: String,
}

#[derive(Args)]
struct BSpec {
    /// Per-node capacities: `const:K` or `uniform:LO,HI`.
    #[arg(long, value_name = "SPEC")]
    b: String,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Insert,
    Remove,
    Mixed,
}

impl From<OpArg> for OpKind {
    fn from(op: OpArg) -> OpKind {
        match op {
            OpArg::Insert => OpKind::Insert,
            OpArg::Remove => OpKind::Remove,
            OpArg::Mixed => OpKind::Mixed,
        }
    }
}

impl GraphSource {
    fn weight_range(&self) -> Result<(f64, f64)> {
        parse_weight_range(&self.weights)
    }

    fn load(&self, seed: u64) -> Result<DynamicGraph> {
        match (&self.graph, &self.gen) {
            (Some(path), None) => {
                let file = File::open(path)
                    .with_context(|| format!("opening {}", path.display()))?;
                read_edge_list(BufReader::new(file))
                    .with_context(|| format!("parsing {}", path.display()))
            }
            (None, Some(genspec)) => {
                let range = self.weight_range()?;
                let g = match parse_gen_spec(genspec)? {
                    GenSpec::Gnp { n, p } => gen_gnp(n, p, range, seed)?,
                    GenSpec::Rmat { scale, ef, probs } => {
                        gen_rmat(scale, ef, probs, range, seed)?
                    }
                };
                Ok(g)
            }
            _ => bail!("give exactly one graph source: --graph FILE or --gen SPEC"),
        }
    }
}

impl BSpec {
    /// The uniform draw uses a sub-stream of `seed` so the same seed can
    /// drive both graph generation and the capacity draw independently.
    fn build(&self, n: usize, seed: u64) -> Result<BFunction> {
        let mode = parse_b_spec(&self.b)?;
        Ok(gen_b_function(n, mode, mix_seed(seed, 1))?)
    }
}

fn out_writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Gen { source, seed, out } => cmd_gen(&source, seed, &out),
        Cmd::RunStatic { source, bspec, seed, format, out } => {
            cmd_run_static(&source, &bspec, seed, format, &out)
        }
        Cmd::Verify { trials, seed, n, p } => cmd_verify(trials, seed, n, p),
        Cmd::Bench { source, bspec, op, batch, reps, seed, check, format, out } => {
            cmd_bench(&source, &bspec, op, batch, reps, seed, check, format, &out)
        }
        Cmd::Trace { source, bspec, batch_file, seed, out } => {
            cmd_trace(&source, &bspec, &batch_file, seed, &out)
        }
    }
}

fn cmd_gen(source: &GraphSource, seed: u64, out: &Option<PathBuf>) -> Result<()> {
    if source.gen.is_none() {
        bail!("gen requires --gen SPEC");
    }
    let g = source.load(seed)?;
    let mut w = out_writer(out)?;
    write_edge_list_with_header(&g, &mut w)?;
    w.flush()?;
    eprintln!("generated n={} m={}", g.node_count(), g.edge_count());
    Ok(())
}

#[derive(Serialize)]
struct StaticReport {
    n: usize,
    m: usize,
    matched_edges: usize,
    matching_weight: f64,
    static_time_ns: u128,
}

fn cmd_run_static(
    source: &GraphSource,
    bspec: &BSpec,
    seed: u64,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<()> {
    let g = source.load(seed)?;
    let b = bspec.build(g.node_count(), seed)?;
    let t = Instant::now();
    let state = run_static(&g, &b);
    let report = StaticReport {
        n: g.node_count(),
        m: g.edge_count(),
        matched_edges: state.matching_edges().len(),
        matching_weight: state.matching_weight(),
        static_time_ns: t.elapsed().as_nanos(),
    };
    let mut w = out_writer(out)?;
    match format {
        Format::Json => writeln!(w, "{}", serde_json::to_string(&report)?)?,
        Format::Csv => {
            writeln!(w, "n,m,matched_edges,matching_weight,static_time_ns")?;
            writeln!(
                w,
                "{},{},{},{},{}",
                report.n,
                report.m,
                report.matched_edges,
                report.matching_weight,
                report.static_time_ns
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(trials: usize, seed: u64, n: Option<usize>, p: Option<f64>) -> Result<()> {
    let cfg = VerifyConfig { trials, seed, n, p };
    match run_verify(&cfg) {
        Ok(count) => {
            println!("verified {count} trials: every dynamic state matched a static rerun");
            Ok(())
        }
        Err(failure) => Err(anyhow!("{failure}")),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    source: &GraphSource,
    bspec: &BSpec,
    op: OpArg,
    batch: usize,
    reps: usize,
    seed: u64,
    check: bool,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<()> {
    let g = source.load(seed)?;
    let b = bspec.build(g.node_count(), seed)?;
    let params = BenchParams {
        op: op.into(),
        batch_size: batch,
        reps,
        seed,
        check,
        weight_range: source.weight_range()?,
    };
    let (records, summary) = run_bench(&g, &b, &params).with_context(|| {
        format!("bench failed (base seed {seed}; batch seed of rep r is mix_seed({seed}, r))")
    })?;
    let mut w = out_writer(out)?;
    match format {
        Format::Json => {
            for r in &records {
                writeln!(w, "{}", serde_json::to_string(r)?)?;
            }
            writeln!(w, "{}", serde_json::to_string(&SummaryLine { summary: &summary })?)?;
        }
        Format::Csv => {
            writeln!(
                w,
                "rep,static_time_ns,dynamic_time_ns,speedup,affected_nodes,queue_ops,\
                 loose_ends,matching_weight_before,matching_weight_after,equality_checked"
            )?;
            for r in &records {
                writeln!(w, "{}", csv_row(r))?;
            }
            eprintln!(
                "op={} batch={} reps={}: median speedup {:.3}, geometric mean {:.3}",
                summary.op,
                summary.batch_size,
                summary.reps,
                summary.median_speedup,
                summary.geomean_speedup
            );
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a BenchSummary,
}

fn csv_row(r: &BenchRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.rep,
        r.static_time_ns,
        r.dynamic_time_ns,
        r.speedup,
        r.stats.affected_nodes,
        r.stats.queue_ops,
        r.stats.loose_ends,
        r.matching_weight_before,
        r.matching_weight_after,
        r.equality_checked
    )
}

#[derive(Serialize)]
struct TraceLine<'a> {
    op: &'static str,
    u: NodeId,
    v: NodeId,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<f64>,
    wall_time_ns: u128,
    stats: &'a UpdateStats,
}

fn cmd_trace(
    source: &GraphSource,
    bspec: &BSpec,
    batch_file: &PathBuf,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    let mut g = source.load(seed)?;
    let b = bspec.build(g.node_count(), seed)?;
    let file = File::open(batch_file)
        .with_context(|| format!("opening {}", batch_file.display()))?;
    let ops = parse_batch(BufReader::new(file))
        .with_context(|| format!("parsing {}", batch_file.display()))?;
    let mut state = run_static(&g, &b);
    let mut w = out_writer(out)?;
    for (i, op) in ops.into_iter().enumerate() {
        let line = match op {
            EdgeOp::Insert { u, v, w: weight } => {
                let t = Instant::now();
                let stats =
                    apply_insert(&mut g, &mut state, u, v, weight, Instrument::RecordPaths)
                        .with_context(|| format!("op {i}: insert ({u}, {v}, {weight})"))?;
                let wall = t.elapsed().as_nanos();
                serde_json::to_string(&TraceLine {
                    op: "insert",
                    u,
                    v,
                    w: Some(weight),
                    wall_time_ns: wall,
                    stats: &stats,
                })?
            }
            EdgeOp::Remove { u, v } => {
                let t = Instant::now();
                let stats = apply_remove(&mut g, &mut state, u, v, Instrument::RecordPaths)
                    .with_context(|| format!("op {i}: remove ({u}, {v})"))?;
                let wall = t.elapsed().as_nanos();
                serde_json::to_string(&TraceLine {
                    op: "remove",
                    u,
                    v,
                    w: None,
                    wall_time_ns: wall,
                    stats: &stats,
                })?
            }
        };
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}
