//! Space/time measurement over a grid of structure kinds and instance
//! sizes, with doubling-ratio columns for trend checks.

use std::time::Instant;

use super::gen::{self, ListShape, TreeShape};
use super::{
    BuildParams, BuiltIndex, HarnessError, Instance, MeasurementRow, QuerySpec, StructureKind,
    Workload,
};
use crate::Probe;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub kinds: Vec<StructureKind>,
    pub sizes: Vec<usize>,
    pub params: BuildParams,
    pub queries: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            kinds: vec![StructureKind::ModeTradeoff],
            sizes: vec![1 << 10, 1 << 12],
            params: BuildParams::default(),
            queries: 1000,
            seed: 1,
        }
    }
}

/// Run the grid; rows come out in deterministic (kind-major, size-minor)
/// order. Probe counts are deterministic; wall-clock columns are reported
/// but never asserted on.
pub fn run(cfg: &BenchConfig) -> Result<Vec<MeasurementRow>, HarnessError> {
    let mut rows = Vec::new();
    for &kind in &cfg.kinds {
        let mut prev: Option<(f64, f64)> = None;
        for &n in &cfg.sizes {
            let instance = if kind.takes_tree() {
                Instance::Tree(gen::tree(n, TreeShape::Random, 0, cfg.seed ^ n as u64))
            } else {
                Instance::List(gen::list(n, ListShape::Uniform, 0, cfg.seed ^ n as u64))
            };
            let started = Instant::now();
            let index = BuiltIndex::build(kind, &instance, &cfg.params)?;
            let build_ms = started.elapsed().as_secs_f64() * 1e3;

            let workload = Workload {
                kind,
                params: cfg.params,
                queries: QuerySpec::Uniform { count: cfg.queries },
                seed: cfg.seed,
            };
            let queries = workload.generate(n);
            let mut probe = Probe::default();
            let started = Instant::now();
            for &(a, b) in &queries {
                index.answer(a, b, &mut probe)?;
            }
            let elapsed = started.elapsed().as_secs_f64();
            let mean_probes = probe.probes as f64 / queries.len() as f64;
            let mean_query_ns = elapsed * 1e9 / queries.len() as f64;
            let (probes_ratio, time_ratio) = match prev {
                Some((p, t)) if p > 0.0 && t > 0.0 => {
                    (Some(mean_probes / p), Some(mean_query_ns / t))
                }
                _ => (None, None),
            };
            prev = Some((mean_probes, mean_query_ns));
            rows.push(MeasurementRow {
                kind: kind.name(),
                n,
                param: param_label(kind, &cfg.params),
                build_ms,
                words: index.words(),
                mean_probes,
                mean_query_ns,
                probes_ratio,
                time_ratio,
            });
        }
    }
    Ok(rows)
}

fn param_label(kind: StructureKind, p: &BuildParams) -> String {
    match kind {
        StructureKind::ModeTradeoff | StructureKind::ModeTree => format!("eps={}", p.epsilon),
        StructureKind::ModeConstant | StructureKind::MedianConstant => {
            p.k.map_or_else(|| "k=auto".into(), |k| format!("k={k}"))
        }
        StructureKind::MedianBlock => {
            p.blocks.map_or_else(|| "b=auto".into(), |b| format!("b={b}"))
        }
        StructureKind::MedianRangeTree => format!("b={}", p.arity),
        StructureKind::MedianTree => "-".into(),
    }
}

pub fn write_csv(rows: &[MeasurementRow], mut w: impl std::io::Write) -> std::io::Result<()> {
    writeln!(w, "{}", MeasurementRow::csv_header())?;
    for row in rows {
        writeln!(w, "{}", row.to_csv())?;
    }
    Ok(())
}
