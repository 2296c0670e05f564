//! Space/time measurement: instrumented probe counters over a size grid,
//! with doubling-ratio columns. The block-tradeoff probes grow ~2x per 4x n
//! while the constant-query index stays flat.
//!
//! Run with: cargo run --release --example bench_scaling

use rqkit::harness::bench::{self, BenchConfig};
use rqkit::harness::{BuildParams, StructureKind};

fn main() {
    let cfg = BenchConfig {
        kinds: vec![StructureKind::ModeTradeoff, StructureKind::MedianTree],
        sizes: vec![1 << 10, 1 << 12, 1 << 14],
        params: BuildParams { epsilon: 0.5, ..Default::default() },
        queries: 500,
        seed: 42,
    };
    let mut rows = bench::run(&cfg).unwrap();

    let constant = BenchConfig {
        kinds: vec![StructureKind::ModeConstant],
        sizes: vec![1 << 10, 1 << 12],
        params: BuildParams { k: Some(16), ..Default::default() },
        queries: 500,
        seed: 42,
    };
    rows.extend(bench::run(&constant).unwrap());

    bench::write_csv(&rows, std::io::stdout().lock()).unwrap();
}
