//! Randomized differential testing of every index against the brute-force
//! oracle, with greedy shrinking of failing instances.

use std::fmt::Write as _;

use super::gen::{self, ListShape, TreeShape};
use super::rng::SplitMix64;
use super::{BuildParams, BuiltIndex, Instance, StructureKind};
use crate::{oracle, Label, LabeledList, LabeledTree, ListRange, Probe};

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub kinds: Vec<StructureKind>,
    pub max_n: usize,
    pub instances: usize,
    pub seed: u64,
    /// self-check mode: inject an off-by-one into every checked frequency so
    /// the harness must produce a finding
    pub mutate: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            kinds: StructureKind::ALL.to_vec(),
            max_n: 120,
            instances: 24,
            seed: 0xF0CC_ACC1A,
            mutate: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FuzzFailure {
    pub kind: StructureKind,
    pub reproducer: String,
}

#[derive(Clone, Debug)]
pub struct FuzzOutcome {
    /// deterministic human-readable log; identical seeds give identical bytes
    pub report: String,
    pub cases: usize,
    pub queries: u64,
    pub failure: Option<FuzzFailure>,
}

#[derive(Clone, Debug)]
struct Mismatch {
    query: (u32, u32),
    expected: String,
    got: String,
}

/// Check one built index against the oracle. Exhaustive over all pairs for
/// small instances, seeded samples otherwise.
fn find_mismatch(
    index: &BuiltIndex,
    instance: &Instance,
    mutate: bool,
    rng: &mut SplitMix64,
    queries: &mut u64,
) -> Option<Mismatch> {
    let n = instance.len() as u32;
    let kind = index.structure_kind();
    let pairs: Vec<(u32, u32)> = if n <= 48 {
        if kind.takes_tree() {
            (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect()
        } else {
            (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect()
        }
    } else {
        (0..400)
            .map(|_| {
                if kind.takes_tree() {
                    (rng.below(n as u64) as u32, rng.below(n as u64) as u32)
                } else {
                    let i = rng.below(n as u64) as u32 + 1;
                    let j = i + rng.below((n - i + 1) as u64) as u32;
                    (i, j)
                }
            })
            .collect()
    };
    for (a, b) in pairs {
        *queries += 1;
        let (value, mut witness) =
            index.answer(a, b, &mut Probe::default()).expect("valid query");
        if mutate {
            witness += 1;
        }
        let multiset: Vec<Label> = match instance {
            Instance::List(l) => l.range_slice(ListRange::new(a, b)).to_vec(),
            Instance::Tree(t) => oracle::path_labels(t, a, b).expect("valid nodes"),
        };
        if kind.is_mode() {
            let want = oracle::mode(&multiset).expect("nonempty");
            let true_count = oracle::count(&multiset, value) as u64;
            if witness != want.frequency as u64 || true_count != witness {
                return Some(Mismatch {
                    query: (a, b),
                    expected: format!("frequency {}", want.frequency),
                    got: format!("value {} witness {}", value.0, witness),
                });
            }
        } else {
            let want = oracle::median(&multiset).expect("nonempty");
            if value != want.value || witness != want.rank as u64 {
                return Some(Mismatch {
                    query: (a, b),
                    expected: format!("value {} rank {}", want.value.0, want.rank),
                    got: format!("value {} rank {}", value.0, witness),
                });
            }
        }
    }
    None
}

fn fails(
    kind: StructureKind,
    params: &BuildParams,
    instance: &Instance,
    mutate: bool,
    seed: u64,
) -> Option<Mismatch> {
    let index = BuiltIndex::build(kind, instance, params).ok()?;
    let mut rng = SplitMix64::new(seed);
    find_mismatch(&index, instance, mutate, &mut rng, &mut 0)
}

/// Greedily shrink a failing list: try removing single elements while the
/// failure (any failure) persists.
fn shrink_list(
    kind: StructureKind,
    params: &BuildParams,
    values: Vec<i64>,
    mutate: bool,
    seed: u64,
) -> Vec<i64> {
    let mut best = values;
    loop {
        let mut improved = false;
        let mut at = 0;
        while at < best.len() && best.len() > 1 {
            let mut candidate = best.clone();
            candidate.remove(at);
            let list = LabeledList::from_raw(&candidate).expect("nonempty").0;
            if fails(kind, params, &Instance::List(list), mutate, seed).is_some() {
                best = candidate;
                improved = true;
            } else {
                at += 1;
            }
        }
        if !improved {
            return best;
        }
    }
}

/// Greedily shrink a failing tree by deleting leaves.
fn shrink_tree(
    kind: StructureKind,
    params: &BuildParams,
    tree: LabeledTree,
    mutate: bool,
    seed: u64,
) -> LabeledTree {
    let mut best = tree;
    loop {
        let mut improved = false;
        for drop in 0..best.len() as u32 {
            if best.len() == 1 || !best.children(drop).is_empty() {
                continue;
            }
            // re-index the survivors
            let mut parents = Vec::new();
            let mut labels = Vec::new();
            let remap = |v: u32| if v > drop { v - 1 } else { v };
            for v in 0..best.len() as u32 {
                if v == drop {
                    continue;
                }
                parents.push(best.parent(v).map(remap));
                labels.push(best.label(v));
            }
            let candidate = LabeledTree::from_parents(&parents, labels).expect("still a tree");
            if fails(kind, params, &Instance::Tree(candidate.clone()), mutate, seed).is_some() {
                best = candidate;
                improved = true;
                break;
            }
        }
        if !improved {
            return best;
        }
    }
}

fn reproducer(
    kind: StructureKind,
    params: &BuildParams,
    instance: &Instance,
    mismatch: &Mismatch,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind: {}", kind.name());
    let _ = writeln!(
        out,
        "params: epsilon={} blocks={:?} k={:?} arity={}",
        params.epsilon, params.blocks, params.k, params.arity
    );
    match instance {
        Instance::List(l) => {
            let ids: Vec<String> = l.labels().iter().map(|x| x.0.to_string()).collect();
            let _ = writeln!(out, "list: {}", ids.join(" "));
        }
        Instance::Tree(t) => {
            let _ = writeln!(out, "tree: n={} root={}", t.len(), t.root() + 1);
            for v in 0..t.len() as u32 {
                let _ = writeln!(
                    out,
                    "  {} {} {}",
                    v + 1,
                    t.parent(v).map_or(0, |p| p + 1),
                    t.label(v).0
                );
            }
        }
    }
    let _ = writeln!(out, "query: {} {}", mismatch.query.0, mismatch.query.1);
    let _ = writeln!(out, "expected: {}", mismatch.expected);
    let _ = writeln!(out, "got: {}", mismatch.got);
    out
}

pub fn run(cfg: &FuzzConfig) -> FuzzOutcome {
    let mut rng = SplitMix64::new(cfg.seed);
    let mut report = String::new();
    let mut cases = 0usize;
    let mut queries = 0u64;
    // degenerate sizes first, then a seeded ramp
    let mut sizes = vec![1usize, 2, 3];
    for _ in 3..cfg.instances {
        sizes.push(rng.below(cfg.max_n.max(4) as u64 - 3) as usize + 4);
    }
    for (case, &n) in sizes.iter().enumerate() {
        let seed = rng.next_u64();
        let list_shape = if case % 2 == 0 { ListShape::Uniform } else { ListShape::Zipf };
        let tree_shape = TreeShape::ALL[case % TreeShape::ALL.len()];
        let params = BuildParams {
            epsilon: if case % 3 == 0 { 0.5 } else { 0.34 },
            blocks: Some([2usize, 3, 5][case % 3]),
            k: Some([1usize, 2, 3][case % 3]),
            arity: [2usize, 3, 4][case % 3],
        };
        let list = Instance::List(gen::list(n, list_shape, 0, seed));
        let tree = Instance::Tree(gen::tree(n, tree_shape, 0, seed));
        for &kind in &cfg.kinds {
            let instance = if kind.takes_tree() { &tree } else { &list };
            cases += 1;
            let index = match BuiltIndex::build(kind, instance, &params) {
                Ok(i) => i,
                Err(e) => {
                    let _ = writeln!(report, "case {case} {}: build skipped: {e}", kind.name());
                    continue;
                }
            };
            let mut qrng = SplitMix64::new(seed ^ 0xBEEF);
            if let Some(mm) =
                find_mismatch(&index, instance, cfg.mutate, &mut qrng, &mut queries)
            {
                // minimize while the failure reproduces
                let shrunk = match instance {
                    Instance::List(l) => {
                        let raw: Vec<i64> =
                            l.labels().iter().map(|x| x.0 as i64).collect();
                        let small =
                            shrink_list(kind, &params, raw, cfg.mutate, seed ^ 0xBEEF);
                        Instance::List(LabeledList::from_raw(&small).expect("nonempty").0)
                    }
                    Instance::Tree(t) => Instance::Tree(shrink_tree(
                        kind,
                        &params,
                        t.clone(),
                        cfg.mutate,
                        seed ^ 0xBEEF,
                    )),
                };
                let mut qrng = SplitMix64::new(seed ^ 0xBEEF);
                let final_mm = BuiltIndex::build(kind, &shrunk, &params)
                    .ok()
                    .and_then(|idx| {
                        find_mismatch(&idx, &shrunk, cfg.mutate, &mut qrng, &mut 0)
                    })
                    .unwrap_or(mm);
                let repro = reproducer(kind, &params, &shrunk, &final_mm);
                let _ = writeln!(
                    report,
                    "case {case} {}: FAIL n={} query {:?}",
                    kind.name(),
                    shrunk.len(),
                    final_mm.query
                );
                return FuzzOutcome {
                    report,
                    cases,
                    queries,
                    failure: Some(FuzzFailure { kind, reproducer: repro }),
                };
            }
            let _ = writeln!(report, "case {case} {}: n={n} ok", kind.name());
        }
    }
    let _ = writeln!(report, "PASS: {cases} cases, {queries} queries, seed {}", cfg.seed);
    FuzzOutcome { report, cases, queries, failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes_and_is_deterministic() {
        let cfg = FuzzConfig { instances: 8, max_n: 40, ..Default::default() };
        let a = run(&cfg);
        let b = run(&cfg);
        assert!(a.failure.is_none(), "{}", a.report);
        assert_eq!(a.report, b.report);
        assert!(a.report.ends_with(&format!("seed {}\n", cfg.seed)));
    }

    #[test]
    fn injected_defect_is_caught_and_shrunk() {
        let cfg = FuzzConfig {
            instances: 4,
            max_n: 24,
            mutate: true,
            kinds: vec![StructureKind::ModeTradeoff],
            ..Default::default()
        };
        let outcome = run(&cfg);
        let failure = outcome.failure.expect("self-check must produce a finding");
        assert_eq!(failure.kind, StructureKind::ModeTradeoff);
        assert!(failure.reproducer.contains("query:"));
        // the shrinker reaches a single-element list for the off-by-one
        assert!(failure.reproducer.contains("list: "));
        let line = failure
            .reproducer
            .lines()
            .find(|l| l.starts_with("list: "))
            .unwrap();
        assert_eq!(line.trim_start_matches("list: ").split(' ').count(), 1);
    }
}
