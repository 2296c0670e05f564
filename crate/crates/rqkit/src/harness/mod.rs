//! Harness machinery behind the `rqk` binary: instance generation, text
//! formats, binary snapshots, oracle fuzzing and space/time measurement.
//!
//! Everything here is deterministic under a seed, so fuzz reports and bench
//! CSVs are reproducible byte for byte.

pub mod bench;
pub mod fuzz;
pub mod gen;
pub mod rng;
pub mod snapshot;
pub mod textio;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::median_list::{MedianBlockIndex, MedianConstantIndex, RangeTreeIndex};
use crate::median_tree::TreeMedianIndex;
use crate::mode_list::{ModeConstantIndex, ModeTradeoffIndex};
use crate::mode_tree::TreeModeIndex;
use crate::{IndexArtifact, Label, LabeledList, LabeledTree, ListRange, Probe};

/// Errors surfaced by the harness and the CLI.
#[derive(Debug)]
pub enum HarnessError {
    Parse(String),
    BadParams(String),
    Io(std::io::Error),
    VersionMismatch(String),
    MalformedQuery(String),
    Lib(crate::Error),
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Parse(m) => write!(f, "parse error: {m}"),
            HarnessError::BadParams(m) => write!(f, "bad parameters: {m}"),
            HarnessError::Io(e) => write!(f, "io error: {e}"),
            HarnessError::VersionMismatch(m) => write!(f, "snapshot mismatch: {m}"),
            HarnessError::MalformedQuery(m) => write!(f, "malformed query: {m}"),
            HarnessError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e)
    }
}

impl From<crate::Error> for HarnessError {
    fn from(e: crate::Error) -> Self {
        HarnessError::Lib(e)
    }
}

/// The seven buildable structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructureKind {
    ModeTradeoff,
    ModeConstant,
    ModeTree,
    MedianBlock,
    MedianRangeTree,
    MedianConstant,
    MedianTree,
}

impl StructureKind {
    pub const ALL: [StructureKind; 7] = [
        StructureKind::ModeTradeoff,
        StructureKind::ModeConstant,
        StructureKind::ModeTree,
        StructureKind::MedianBlock,
        StructureKind::MedianRangeTree,
        StructureKind::MedianConstant,
        StructureKind::MedianTree,
    ];

    pub const LIST_KINDS: [StructureKind; 5] = [
        StructureKind::ModeTradeoff,
        StructureKind::ModeConstant,
        StructureKind::MedianBlock,
        StructureKind::MedianRangeTree,
        StructureKind::MedianConstant,
    ];

    pub const TREE_KINDS: [StructureKind; 2] =
        [StructureKind::ModeTree, StructureKind::MedianTree];

    pub fn name(&self) -> &'static str {
        match self {
            StructureKind::ModeTradeoff => "mode-tradeoff",
            StructureKind::ModeConstant => "mode-constant",
            StructureKind::ModeTree => "mode-tree",
            StructureKind::MedianBlock => "median-block",
            StructureKind::MedianRangeTree => "median-range-tree",
            StructureKind::MedianConstant => "median-constant",
            StructureKind::MedianTree => "median-tree",
        }
    }

    pub fn parse(s: &str) -> Option<StructureKind> {
        StructureKind::ALL.iter().copied().find(|k| k.name() == s)
    }

    pub fn takes_tree(&self) -> bool {
        matches!(self, StructureKind::ModeTree | StructureKind::MedianTree)
    }

    pub fn is_mode(&self) -> bool {
        matches!(
            self,
            StructureKind::ModeTradeoff | StructureKind::ModeConstant | StructureKind::ModeTree
        )
    }
}

/// Build parameters shared by every kind; unset options fall back to
/// kind-specific defaults.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BuildParams {
    pub epsilon: f64,
    /// explicit branching for the block median index
    pub blocks: Option<usize>,
    pub k: Option<usize>,
    pub arity: usize,
}

impl Default for BuildParams {
    fn default() -> Self {
        BuildParams { epsilon: 0.5, blocks: None, k: None, arity: 2 }
    }
}

/// An ingested problem instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Instance {
    List(LabeledList),
    Tree(LabeledTree),
}

impl Instance {
    pub fn len(&self) -> usize {
        match self {
            Instance::List(l) => l.len(),
            Instance::Tree(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_list(&self) -> Option<&LabeledList> {
        match self {
            Instance::List(l) => Some(l),
            _ => None,
        }
    }

    pub fn as_tree(&self) -> Option<&LabeledTree> {
        match self {
            Instance::Tree(t) => Some(t),
            _ => None,
        }
    }
}

/// Any built index, dispatching queries uniformly: the witness of a mode
/// answer is its frequency, of a median answer its rank.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
pub enum BuiltIndex {
    ModeTradeoff(ModeTradeoffIndex),
    ModeConstant(ModeConstantIndex),
    ModeTree(TreeModeIndex),
    MedianBlock(MedianBlockIndex),
    MedianRangeTree(RangeTreeIndex),
    MedianConstant(MedianConstantIndex),
    MedianTree(TreeMedianIndex),
}

impl BuiltIndex {
    pub fn build(
        kind: StructureKind,
        instance: &Instance,
        params: &BuildParams,
    ) -> Result<BuiltIndex, HarnessError> {
        let need_tree = kind.takes_tree();
        let built = match (kind, instance) {
            (StructureKind::ModeTradeoff, Instance::List(l)) => {
                BuiltIndex::ModeTradeoff(ModeTradeoffIndex::new(l, params.epsilon)?)
            }
            (StructureKind::ModeConstant, Instance::List(l)) => {
                let k = params.k.unwrap_or_else(|| ModeConstantIndex::default_k(l.len()));
                BuiltIndex::ModeConstant(ModeConstantIndex::new(l, k.min(l.len()))?)
            }
            (StructureKind::MedianBlock, Instance::List(l)) => {
                let b = params.blocks.unwrap_or(4).clamp(2, l.len().max(2));
                BuiltIndex::MedianBlock(MedianBlockIndex::new(l, b)?)
            }
            (StructureKind::MedianRangeTree, Instance::List(l)) => {
                let arity = params.arity.clamp(2, l.len().max(2));
                BuiltIndex::MedianRangeTree(RangeTreeIndex::new(l, arity)?)
            }
            (StructureKind::MedianConstant, Instance::List(l)) => {
                let k = params.k.unwrap_or_else(|| MedianConstantIndex::default_k(l.len()));
                BuiltIndex::MedianConstant(MedianConstantIndex::new(l, k.min(l.len()))?)
            }
            (StructureKind::ModeTree, Instance::Tree(t)) => {
                BuiltIndex::ModeTree(TreeModeIndex::new(t, params.epsilon)?)
            }
            (StructureKind::MedianTree, Instance::Tree(t)) => {
                BuiltIndex::MedianTree(TreeMedianIndex::new(t))
            }
            _ => {
                return Err(HarnessError::BadParams(format!(
                    "kind {} expects a {} instance",
                    kind.name(),
                    if need_tree { "tree" } else { "list" }
                )))
            }
        };
        Ok(built)
    }

    pub fn structure_kind(&self) -> StructureKind {
        match self {
            BuiltIndex::ModeTradeoff(_) => StructureKind::ModeTradeoff,
            BuiltIndex::ModeConstant(_) => StructureKind::ModeConstant,
            BuiltIndex::ModeTree(_) => StructureKind::ModeTree,
            BuiltIndex::MedianBlock(_) => StructureKind::MedianBlock,
            BuiltIndex::MedianRangeTree(_) => StructureKind::MedianRangeTree,
            BuiltIndex::MedianConstant(_) => StructureKind::MedianConstant,
            BuiltIndex::MedianTree(_) => StructureKind::MedianTree,
        }
    }

    /// Answer one query: a 1-based inclusive range for list structures, a
    /// pair of 0-based node ids for tree structures.
    pub fn answer(
        &self,
        a: u32,
        b: u32,
        probe: &mut Probe,
    ) -> Result<(Label, u64), HarnessError> {
        Ok(match self {
            BuiltIndex::ModeTradeoff(idx) => {
                let m = idx.query_probed(ListRange::new(a, b), probe);
                (m.value, m.frequency as u64)
            }
            BuiltIndex::ModeConstant(idx) => {
                let m = idx.query_probed(ListRange::new(a, b), probe);
                (m.value, m.frequency as u64)
            }
            BuiltIndex::MedianBlock(idx) => {
                let m = idx.query_probed(ListRange::new(a, b), probe);
                (m.value, m.rank as u64)
            }
            BuiltIndex::MedianRangeTree(idx) => {
                let m = idx.query_probed(ListRange::new(a, b), probe);
                (m.value, m.rank as u64)
            }
            BuiltIndex::MedianConstant(idx) => {
                let m = idx.query_probed(ListRange::new(a, b), probe);
                (m.value, m.rank as u64)
            }
            BuiltIndex::ModeTree(idx) => {
                let m = idx.query_probed(a, b, probe)?;
                (m.value, m.frequency as u64)
            }
            BuiltIndex::MedianTree(idx) => {
                let m = idx.query_probed(a, b, probe)?;
                (m.value, m.rank as u64)
            }
        })
    }

    pub fn words(&self) -> u64 {
        match self {
            BuiltIndex::ModeTradeoff(i) => i.words(),
            BuiltIndex::ModeConstant(i) => i.words(),
            BuiltIndex::ModeTree(i) => i.words(),
            BuiltIndex::MedianBlock(i) => i.words(),
            BuiltIndex::MedianRangeTree(i) => i.words(),
            BuiltIndex::MedianConstant(i) => i.words(),
            BuiltIndex::MedianTree(i) => i.words(),
        }
    }

    /// Positions (lists) or nodes (trees) this index answers for.
    pub fn len(&self) -> usize {
        match self {
            BuiltIndex::ModeTradeoff(i) => i.len(),
            BuiltIndex::ModeConstant(i) => i.len(),
            BuiltIndex::ModeTree(i) => i.len(),
            BuiltIndex::MedianBlock(i) => i.len(),
            BuiltIndex::MedianRangeTree(i) => i.len(),
            BuiltIndex::MedianConstant(i) => i.len(),
            BuiltIndex::MedianTree(i) => i.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A reproducible query workload specification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Workload {
    pub kind: StructureKind,
    pub params: BuildParams,
    pub queries: QuerySpec,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum QuerySpec {
    /// uniformly random valid ranges / node pairs
    Uniform { count: usize },
    /// ranges of a fixed short span (lists), random pairs otherwise
    Short { count: usize, span: u32 },
    /// cross-block ranges only: spans strictly above the given block size
    Crossing { count: usize, min_span: u32 },
}

impl Workload {
    /// The query stream for an instance of `n` positions or nodes;
    /// bit-for-bit reproducible from the seed.
    pub fn generate(&self, n: usize) -> Vec<(u32, u32)> {
        let n = n as u64;
        let mut rng = rng::SplitMix64::new(self.seed ^ 0x9E37_79B9_7F4A_7C15);
        let make_range = |rng: &mut rng::SplitMix64, span: u64| {
            let span = span.clamp(1, n);
            let i = rng.below(n - span + 1) + 1;
            (i as u32, (i + span - 1) as u32)
        };
        let count = match self.queries {
            QuerySpec::Uniform { count }
            | QuerySpec::Short { count, .. }
            | QuerySpec::Crossing { count, .. } => count,
        };
        (0..count)
            .map(|_| {
                if self.kind.takes_tree() {
                    return (rng.below(n) as u32, rng.below(n) as u32);
                }
                match self.queries {
                    QuerySpec::Uniform { .. } => {
                        let span = rng.below(n) + 1;
                        make_range(&mut rng, span)
                    }
                    QuerySpec::Short { span, .. } => make_range(&mut rng, span as u64),
                    QuerySpec::Crossing { min_span, .. } => {
                        let extra = rng.below(16);
                        make_range(&mut rng, min_span as u64 + 1 + extra)
                    }
                }
            })
            .collect()
    }
}

/// One line of the bench CSV. All counters are instrumented, never
/// estimated.
#[derive(Clone, Debug)]
pub struct MeasurementRow {
    pub kind: &'static str,
    pub n: usize,
    pub param: String,
    pub build_ms: f64,
    pub words: u64,
    pub mean_probes: f64,
    pub mean_query_ns: f64,
    /// mean-probe ratio against the previous row of the same kind
    pub probes_ratio: Option<f64>,
    pub time_ratio: Option<f64>,
}

impl MeasurementRow {
    pub fn csv_header() -> &'static str {
        "kind,n,param,build_ms,words,mean_probes,mean_query_ns,probes_ratio,time_ratio"
    }

    pub fn to_csv(&self) -> String {
        let ratio = |r: Option<f64>| r.map(|x| format!("{x:.4}")).unwrap_or_default();
        format!(
            "{},{},{},{:.3},{},{:.3},{:.1},{},{}",
            self.kind,
            self.n,
            self.param,
            self.build_ms,
            self.words,
            self.mean_probes,
            self.mean_query_ns,
            ratio(self.probes_ratio),
            ratio(self.time_ratio),
        )
    }
}
