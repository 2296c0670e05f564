use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::select::select_sorted_arrays;
use crate::{
    median_rank, Error, IndexArtifact, Label, LabeledList, ListRange, MedianAnswer, Probe, Result,
};

/// Range median index over a complete b-ary position tree.
///
/// Level `l` splits `1..=n` into nodes of span `b^(h-l)`; every node stores
/// the sorted labels of its span, so each level holds the whole multiset
/// once and total storage is `n * (height + 1)` elements.
///
/// [`RangeTreeIndex::canonical_decomposition`] covers a query range with
/// maximal fully-contained node arrays plus at most two boundary fragments,
/// which are sorted on the fly from the bottom two levels (spans up to
/// `b^2`). Consolidating the boundaries this way keeps the array count
/// within `b * ceil(log_b n) + 2` at every tested size; emitting raw
/// per-level boundary siblings instead can exceed it. The median is then a
/// rank selection across the decomposition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RangeTreeIndex {
    list: LabeledList,
    arity: u32,
    height: u32,
    /// levels[l][t] = sorted labels of node t at level l (span b^(height-l))
    levels: Vec<Vec<Vec<Label>>>,
    words: u64,
}

impl RangeTreeIndex {
    /// Positions (lists) or nodes (trees) this index answers for.
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn new(list: &LabeledList, arity: usize) -> Result<Self> {
        let n = list.len();
        if arity < 2 || arity > n.max(2) {
            return Err(Error::BadBranching(arity));
        }
        let b = arity as u64;
        let mut height = 0u32;
        let mut reach = 1u64;
        while reach < n as u64 {
            reach = reach.saturating_mul(b);
            height += 1;
        }
        let mut levels = Vec::with_capacity(height as usize + 1);
        let mut words = 0u64;
        for l in 0..=height {
            let span = b.pow(height - l);
            let count = (n as u64).div_ceil(span) as usize;
            let mut row = Vec::with_capacity(count);
            for t in 0..count {
                let lo = (t as u64 * span + 1) as u32;
                let hi = (((t as u64 + 1) * span).min(n as u64)) as u32;
                let mut vals = list.range_slice(ListRange::new(lo, hi)).to_vec();
                vals.sort_unstable();
                words += vals.len() as u64;
                row.push(vals);
            }
            levels.push(row);
        }
        Ok(RangeTreeIndex { list: list.clone(), arity: arity as u32, height, levels, words })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Sorted node array of node `t` at level `l`.
    pub fn node_array(&self, l: u32, t: usize) -> &[Label] {
        &self.levels[l as usize][t]
    }

    fn span_at(&self, l: u32) -> u64 {
        (self.arity as u64).pow(self.height - l)
    }

    /// Disjoint sorted arrays whose positional union is exactly the range:
    /// stored arrays of maximal covered nodes, plus at most two synthesized
    /// boundary fragments.
    pub fn canonical_decomposition(&self, r: ListRange) -> Vec<Cow<'_, [Label]>> {
        self.canonical_decomposition_probed(r, &mut Probe::default())
    }

    pub fn canonical_decomposition_probed(
        &self,
        r: ListRange,
        probe: &mut Probe,
    ) -> Vec<Cow<'_, [Label]>> {
        assert!(r.j as usize <= self.list.len());
        let mut out = Vec::new();
        self.cover(0, 0, r, &mut out, probe);
        out
    }

    fn cover<'a>(
        &'a self,
        l: u32,
        t: usize,
        r: ListRange,
        out: &mut Vec<Cow<'a, [Label]>>,
        probe: &mut Probe,
    ) {
        let span = self.span_at(l);
        let lo = (t as u64 * span + 1) as u32;
        let hi = (((t as u64 + 1) * span).min(self.list.len() as u64)) as u32;
        if r.j < lo || hi < r.i {
            return;
        }
        probe.tick();
        if r.i <= lo && hi <= r.j {
            out.push(Cow::Borrowed(self.levels[l as usize][t].as_slice()));
            return;
        }
        if l > 0 && self.height - l <= 2 {
            // boundary fragment: at most b^2 raw positions, sorted on the fly
            let mut frag =
                self.list.range_slice(ListRange::new(lo.max(r.i), hi.min(r.j))).to_vec();
            probe.bump(frag.len() as u64);
            frag.sort_unstable();
            out.push(Cow::Owned(frag));
            return;
        }
        let child_span = self.span_at(l + 1);
        let first = (lo as u64 - 1) / child_span;
        let last = (hi as u64 - 1) / child_span;
        for c in first..=last {
            self.cover(l + 1, c as usize, r, out, probe);
        }
    }

    pub fn query(&self, r: ListRange) -> MedianAnswer {
        self.query_probed(r, &mut Probe::default())
    }

    pub fn query_probed(&self, r: ListRange, probe: &mut Probe) -> MedianAnswer {
        let rank = median_rank(r.len());
        let parts = self.canonical_decomposition_probed(r, probe);
        let refs: Vec<&[Label]> = parts.iter().map(|p| p.as_ref()).collect();
        let value = select_sorted_arrays(&refs, rank, probe)
            .expect("rank is within the decomposition");
        MedianAnswer { value, rank }
    }
}

impl IndexArtifact for RangeTreeIndex {
    fn words(&self) -> u64 {
        self.words
    }
    fn kind(&self) -> &'static str {
        "median-range-tree"
    }
}
