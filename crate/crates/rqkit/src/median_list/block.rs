use serde::{Deserialize, Serialize};

use super::CandidateWindow;
use crate::mode_list::{pair_count, pair_id};
use crate::pbst::{PersistentTreeStore, VersionHandle};
use crate::select::{select_union, Source};
use crate::{
    median_rank, Error, IndexArtifact, LabeledList, ListRange, MedianAnswer, Probe, Result,
};

/// Recursive block median index backed by persistent search trees.
///
/// Each level splits its span into `b` blocks of size `s = ceil(span/b)`.
/// Every block carries forward versions (prefixes of the block, in insertion
/// order) and backward versions (suffixes, inserted in reverse), so any
/// partial block is available as an augmented search tree. Every block pair
/// stores the sorted rank window of its middle multiset. A cross-block query
/// selects rank `floor(m/2)+1` (shifted by the window's omitted prefix)
/// across suffix tree, window and prefix tree; a same-block query recurses,
/// bottoming out in direct extraction for spans of at most `max(b, 8)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MedianBlockIndex {
    list: LabeledList,
    branching: u32,
    root: BlockNode,
    words: u64,
    store_nodes: u64,
    depth: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BlockNode {
    start: u32,
    end: u32,
    inner: Option<Box<BlockLevel>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BlockLevel {
    block_size: u32,
    block_count: u32,
    store: PersistentTreeStore,
    /// per block, stride `block_size + 1`: `fwd[b][j]` holds the first `j`
    /// elements of block `b`
    fwd: Vec<VersionHandle>,
    /// per block, stride `block_size + 2`: `bwd[b][j]` holds elements
    /// `j..=len` of block `b` (`j = len + 1` is empty)
    bwd: Vec<VersionHandle>,
    /// pair-indexed middle windows; empty values for adjacent pairs
    pairs: Vec<CandidateWindow>,
    children: Vec<BlockNode>,
}

impl MedianBlockIndex {
    /// Positions (lists) or nodes (trees) this index answers for.
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn new(list: &LabeledList, branching: usize) -> Result<Self> {
        let n = list.len();
        if branching < 2 || branching > n.max(2) {
            return Err(Error::BadBranching(branching));
        }
        let root = build_node(list, 1, n as u32, branching as u32);
        let mut words = 0;
        let mut store_nodes = 0;
        let mut depth = 0;
        account(&root, 1, &mut words, &mut store_nodes, &mut depth);
        Ok(MedianBlockIndex {
            list: list.clone(),
            branching: branching as u32,
            root,
            words: words + n as u64,
            store_nodes,
            depth,
        })
    }

    /// Total persistent nodes allocated across every level.
    pub fn persistent_nodes(&self) -> u64 {
        self.store_nodes
    }

    /// Levels of recursion actually built.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn query(&self, r: ListRange) -> MedianAnswer {
        self.query_probed(r, &mut Probe::default())
    }

    pub fn query_probed(&self, r: ListRange, probe: &mut Probe) -> MedianAnswer {
        assert!(r.j as usize <= self.list.len());
        let rank = median_rank(r.len());
        let value = query_node(&self.root, &self.list, r, probe);
        MedianAnswer { value, rank }
    }
}

fn build_node(list: &LabeledList, start: u32, end: u32, b: u32) -> BlockNode {
    let span = end - start + 1;
    if span as u64 <= (b as u64).max(8) {
        return BlockNode { start, end, inner: None };
    }
    let block_size = span.div_ceil(b);
    let block_count = span.div_ceil(block_size);
    let b_start = |i: u32| start + i * block_size;
    let b_end = |i: u32| (start + (i + 1) * block_size - 1).min(end);

    let mut store = PersistentTreeStore::new();
    let fwd_stride = block_size as usize + 1;
    let bwd_stride = block_size as usize + 2;
    let mut fwd = vec![VersionHandle::EMPTY; block_count as usize * fwd_stride];
    let mut bwd = vec![VersionHandle::EMPTY; block_count as usize * bwd_stride];
    for i in 0..block_count {
        let (s0, s1) = (b_start(i), b_end(i));
        let mut h = VersionHandle::EMPTY;
        for (j, pos) in (s0..=s1).enumerate() {
            h = store.insert(h, list.get(pos));
            fwd[i as usize * fwd_stride + j + 1] = h;
        }
        let mut h = VersionHandle::EMPTY;
        for pos in (s0..=s1).rev() {
            h = store.insert(h, list.get(pos));
            bwd[i as usize * bwd_stride + (pos - s0) as usize + 1] = h;
        }
    }

    // middle windows per pair: the sorted middle grows block by block
    let mut pairs = vec![
        CandidateWindow { values: Vec::new(), omitted_low: 0 };
        pair_count(block_count)
    ];
    for i in 0..block_count {
        let mut sorted_middle = Vec::new();
        for j in i + 1..block_count {
            if j >= i + 2 {
                let mut add: Vec<_> =
                    (b_start(j - 1)..=b_end(j - 1)).map(|p| list.get(p)).collect();
                add.sort_unstable();
                sorted_middle = merge_sorted(&sorted_middle, &add);
            }
            pairs[pair_id(block_count, i, j)] =
                CandidateWindow::from_sorted_middle(&sorted_middle, block_size);
        }
    }

    let children = (0..block_count)
        .map(|i| build_node(list, b_start(i), b_end(i), b))
        .collect();
    BlockNode {
        start,
        end,
        inner: Some(Box::new(BlockLevel {
            block_size,
            block_count,
            store,
            fwd,
            bwd,
            pairs,
            children,
        })),
    }
}

fn merge_sorted<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn query_node(
    node: &BlockNode,
    list: &LabeledList,
    r: ListRange,
    probe: &mut Probe,
) -> crate::Label {
    debug_assert!(node.start <= r.i && r.j <= node.end);
    let level = match &node.inner {
        None => {
            // base case: direct extraction and selection
            let mut vals = list.range_slice(r).to_vec();
            probe.bump(vals.len() as u64);
            let rank = median_rank(vals.len()) as usize;
            let (_, v, _) = vals.select_nth_unstable(rank - 1);
            return *v;
        }
        Some(level) => level,
    };
    let bi = (r.i - node.start) / level.block_size;
    let bj = (r.j - node.start) / level.block_size;
    if bi == bj {
        return query_node(&level.children[bi as usize], list, r, probe);
    }
    let b_start = |i: u32| node.start + i * level.block_size;
    let x = r.i - b_start(bi) + 1;
    let y = r.j - b_start(bj) + 1;
    let suffix = level.bwd[bi as usize * (level.block_size as usize + 2) + x as usize];
    let prefix = level.fwd[bj as usize * (level.block_size as usize + 1) + y as usize];
    let window = &level.pairs[pair_id(level.block_count, bi, bj)];
    let rank = median_rank(r.len()) - window.omitted_low;
    let mut sources = [
        Source::tree(&level.store, suffix),
        Source::slice(&window.values),
        Source::tree(&level.store, prefix),
    ];
    select_union(&mut sources, rank, probe)
        .expect("window rank is always inside the candidate universe")
}

fn account(node: &BlockNode, depth: u32, words: &mut u64, nodes: &mut u64, max_depth: &mut u32) {
    *max_depth = (*max_depth).max(depth);
    if let Some(level) = &node.inner {
        *nodes += level.store.nodes_allocated();
        *words += level.store.nodes_allocated() * 5;
        *words += (level.fwd.len() + level.bwd.len()) as u64 * 2;
        *words += level.pairs.iter().map(|w| w.values.len() as u64 + 1).sum::<u64>();
        for c in &level.children {
            account(c, depth + 1, words, nodes, max_depth);
        }
    }
}

impl IndexArtifact for MedianBlockIndex {
    fn words(&self) -> u64 {
        self.words
    }
    fn kind(&self) -> &'static str {
        "median-block"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{oracle, Label};

    fn l1() -> LabeledList {
        LabeledList::from_labels([3u32, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5].map(Label).to_vec()).unwrap()
    }

    #[test]
    fn backward_versions_hold_suffixes() {
        // force a real level: 11 elements, b=3 gives s=4 at the root
        let idx = MedianBlockIndex::new(&l1(), 3).unwrap();
        let level = idx.root.inner.as_ref().unwrap();
        assert_eq!(level.block_size, 4);
        // suffix of block 0 from offset 2: positions 2..=4 hold [1,4,1]
        let h = level.bwd[2]; // block 0, j=2
        assert_eq!(level.store.in_order(h), [1, 1, 4].map(Label));
        // forward prefix of block 1 with 3 elements: positions 5..=7 = [5,9,2]
        let f = level.fwd[level.block_size as usize + 1 + 3];
        assert_eq!(level.store.in_order(f), [2, 5, 9].map(Label));
    }

    #[test]
    fn middle_window_of_small_middle_is_whole() {
        let idx = MedianBlockIndex::new(&l1(), 3).unwrap();
        let level = idx.root.inner.as_ref().unwrap();
        let w = &level.pairs[pair_id(level.block_count, 0, 2)];
        assert_eq!(w.values, [2u32, 5, 6, 9].map(Label)); // middle [5,9,2,6] sorted
        assert_eq!(w.omitted_low, 0);
    }

    #[test]
    fn query_examples() {
        let idx = MedianBlockIndex::new(&l1(), 3).unwrap();
        assert_eq!(
            idx.query(ListRange::new(2, 10)),
            MedianAnswer { value: Label(4), rank: 5 }
        );
        assert_eq!(idx.query(ListRange::new(1, 4)).value, Label(3));
        assert_eq!(
            idx.query(ListRange::new(7, 7)),
            MedianAnswer { value: Label(2), rank: 1 }
        );
    }

    #[test]
    fn rejects_bad_branching() {
        assert!(matches!(MedianBlockIndex::new(&l1(), 1), Err(Error::BadBranching(1))));
        assert!(matches!(MedianBlockIndex::new(&l1(), 12), Err(Error::BadBranching(12))));
    }

    #[test]
    fn matches_oracle_across_branchings() {
        let mut state = 0x5EED_1234_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in [1usize, 2, 3, 9, 27, 60, 101] {
            let labels: Vec<Label> =
                (0..n).map(|_| Label((next() % (n as u64 / 3 + 2)) as u32)).collect();
            let list = LabeledList::from_labels(labels).unwrap();
            for b in [2usize, 3, 5, n] {
                if b < 2 || b > n {
                    continue;
                }
                let idx = MedianBlockIndex::new(&list, b).unwrap();
                for i in 1..=n as u32 {
                    for j in i..=n as u32 {
                        let r = ListRange::new(i, j);
                        let got = idx.query(r);
                        let want = oracle::median(list.range_slice(r)).unwrap();
                        assert_eq!(got, want, "n={n} b={b} range {i}..={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn singleton_blocks_hit_the_base_case() {
        let l = l1();
        let idx = MedianBlockIndex::new(&l, 11).unwrap();
        // span 11 <= max(b, 8) = 11: no level at all
        assert!(idx.root.inner.is_none());
        for i in 1..=11u32 {
            for j in i..=11 {
                let r = ListRange::new(i, j);
                assert_eq!(idx.query(r), oracle::median(l.range_slice(r)).unwrap());
            }
        }
    }

    #[test]
    fn node_allocation_accounting() {
        let n = 512usize;
        let labels: Vec<Label> = (0..n).map(|i| Label((i % 37) as u32)).collect();
        let list = LabeledList::from_labels(labels).unwrap();
        for b in [2usize, 4, 16] {
            let idx = MedianBlockIndex::new(&list, b).unwrap();
            let levels = (n as f64).log(b as f64).ceil() as u64 + 1;
            let cap = 12 * (n as u64) * ((n as f64 + 2.0).log2().ceil() as u64) * levels;
            assert!(
                idx.persistent_nodes() <= cap,
                "b={b}: {} nodes over cap {cap}",
                idx.persistent_nodes()
            );
            assert!(idx.depth() <= levels as u32 + 1);
        }
    }
}
