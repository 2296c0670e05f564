//! Selection by rank across several sorted sources.
//!
//! [`select_union`] finds the element at a given sorted position in the union
//! of up to a handful of navigable sources (persistent search-tree versions
//! and/or sorted slices) by a simultaneous descent: each step inspects the
//! current subtree roots, then discards either the smallest root together
//! with its left fragment or the largest root together with its right
//! fragment. One step descends one source one level, so the whole selection
//! costs O(h_A + h_B + h_C) node visits.
//!
//! [`select_sorted_arrays`] selects from many sorted arrays by iterated
//! pruning: a pivot is drawn from the midpoint of the largest remaining
//! window and every window is narrowed by binary search around it, halving
//! the largest window per round.

use crate::pbst::{PersistentTreeStore, VersionHandle};
use crate::{Error, Label, Probe, Result};

/// A navigable sorted multiset: a subtree of a persistent store or a window
/// of a sorted slice (midpoint indexing makes the slice an implicit balanced
/// tree).
pub enum Source<'a> {
    Tree { store: &'a PersistentTreeStore, node: u32 },
    Slice { data: &'a [Label], lo: usize, hi: usize },
}

impl<'a> Source<'a> {
    pub fn tree(store: &'a PersistentTreeStore, version: VersionHandle) -> Self {
        Source::Tree { store, node: version.root() }
    }

    pub fn slice(data: &'a [Label]) -> Self {
        debug_assert!(data.windows(2).all(|w| w[0] <= w[1]), "slice source must be sorted");
        Source::Slice { data, lo: 0, hi: data.len() }
    }

    fn size(&self) -> u32 {
        match self {
            Source::Tree { store, node } => store.node_size(*node),
            Source::Slice { lo, hi, .. } => (hi - lo) as u32,
        }
    }

    fn root_value(&self) -> u32 {
        match self {
            Source::Tree { store, node } => store.node_value(*node),
            Source::Slice { data, lo, hi } => data[(lo + hi) / 2].0,
        }
    }

    fn left_size(&self) -> u32 {
        match self {
            Source::Tree { store, node } => store.node_size(store.node_left(*node)),
            Source::Slice { lo, hi, .. } => ((lo + hi) / 2 - lo) as u32,
        }
    }

    /// Drop the root and its left fragment, keeping the right fragment.
    fn descend_right(&mut self) {
        match self {
            Source::Tree { store, node } => *node = store.node_right(*node),
            Source::Slice { lo, hi, .. } => *lo = (*lo + *hi) / 2 + 1,
        }
    }

    /// Drop the root and its right fragment, keeping the left fragment.
    fn descend_left(&mut self) {
        match self {
            Source::Tree { store, node } => *node = store.node_left(*node),
            Source::Slice { lo, hi, .. } => *hi = (*lo + *hi) / 2,
        }
    }

    /// Plain rank selection inside this single source.
    fn select(&self, r: u32, probe: &mut Probe) -> Label {
        match self {
            Source::Tree { store, node } => store.select_at(*node, r, probe),
            Source::Slice { data, lo, .. } => {
                probe.tick();
                data[lo + (r as usize) - 1]
            }
        }
    }
}

/// Element at 1-indexed sorted position `r` of the multiset union of
/// `sources`.
pub fn select_union(sources: &mut [Source<'_>], r: u32, probe: &mut Probe) -> Result<Label> {
    let total: u32 = sources.iter().map(|s| s.size()).sum();
    if r == 0 || r > total {
        return Err(Error::RankOutOfRange { rank: r, size: total });
    }
    let mut k = r;
    loop {
        let mut active = 0u32;
        let mut only = 0usize;
        let mut a = usize::MAX; // smallest current root
        let mut c = usize::MAX; // largest current root, != a
        for i in 0..sources.len() {
            if sources[i].size() == 0 {
                continue;
            }
            active += 1;
            only = i;
            if a == usize::MAX || sources[i].root_value() < sources[a].root_value() {
                a = i;
            }
        }
        if active == 1 {
            return Ok(sources[only].select(k, probe));
        }
        for i in 0..sources.len() {
            if i == a || sources[i].size() == 0 {
                continue;
            }
            if c == usize::MAX || sources[i].root_value() >= sources[c].root_value() {
                c = i;
            }
        }
        probe.tick();
        // discard-low is safe when k exceeds everything that can precede the
        // smallest root; otherwise discard-high is safe (the two conditions
        // always cover, overlapping in at most one point)
        let ca = sources[a].left_size() + 1;
        let mut low_sum = ca;
        for (i, s) in sources.iter().enumerate() {
            if i != a && s.size() > 0 {
                low_sum += s.left_size();
            }
        }
        if k > low_sum {
            k -= ca;
            sources[a].descend_right();
        } else {
            sources[c].descend_left();
        }
    }
}

/// Element of rank `r` in the union of three persistent-tree versions; any
/// handle may be empty, and the handles may come from different stores.
pub fn select_three_trees(
    a: (&PersistentTreeStore, VersionHandle),
    b: (&PersistentTreeStore, VersionHandle),
    c: (&PersistentTreeStore, VersionHandle),
    r: u32,
    probe: &mut Probe,
) -> Result<Label> {
    select_union(
        &mut [Source::tree(a.0, a.1), Source::tree(b.0, b.1), Source::tree(c.0, c.1)],
        r,
        probe,
    )
}

fn count_below<F: Fn(&Label) -> bool>(window: &[Label], pred: F, probe: &mut Probe) -> usize {
    // binary search for the first element violating `pred`; counts comparisons
    let mut lo = 0;
    let mut hi = window.len();
    while lo < hi {
        probe.compare();
        let mid = (lo + hi) / 2;
        if pred(&window[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Element of rank `r` in the union of sorted arrays.
///
/// Each round draws a pivot from the midpoint of the largest remaining
/// window and narrows every window around it by binary search; the
/// comparison counter in `probe` is the asserted cost.
pub fn select_sorted_arrays(arrays: &[&[Label]], r: u32, probe: &mut Probe) -> Result<Label> {
    #[cfg(debug_assertions)]
    for a in arrays {
        if a.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::UnsortedInput);
        }
    }
    let total: u32 = arrays.iter().map(|a| a.len() as u32).sum();
    if r == 0 || r > total {
        return Err(Error::RankOutOfRange { rank: r, size: total });
    }
    let mut windows: Vec<(usize, usize)> = arrays.iter().map(|a| (0, a.len())).collect();
    let mut below = 0u32;
    loop {
        let active: Vec<usize> =
            (0..arrays.len()).filter(|&i| windows[i].0 < windows[i].1).collect();
        if active.len() == 1 {
            let i = active[0];
            probe.tick();
            return Ok(arrays[i][windows[i].0 + (r - below) as usize - 1]);
        }
        let &widest = active
            .iter()
            .max_by_key(|&&i| windows[i].1 - windows[i].0)
            .expect("rank bounds guarantee a non-empty window");
        let (lo, hi) = windows[widest];
        let pivot = arrays[widest][(lo + hi) / 2];
        probe.tick();

        let mut less = 0u32;
        let mut less_or_equal = 0u32;
        let mut lt = vec![0usize; arrays.len()];
        let mut le = vec![0usize; arrays.len()];
        for &i in &active {
            let w = &arrays[i][windows[i].0..windows[i].1];
            lt[i] = count_below(w, |x| *x < pivot, probe);
            le[i] = lt[i] + count_below(&w[lt[i]..], |x| *x == pivot, probe);
            less += lt[i] as u32;
            less_or_equal += le[i] as u32;
        }
        if r <= below + less {
            // answer is strictly below the pivot: clip every window's top
            for &i in &active {
                windows[i].1 = windows[i].0 + lt[i];
            }
        } else if r > below + less_or_equal {
            // answer is strictly above: clip bottoms and re-base the rank
            below += less_or_equal;
            for &i in &active {
                windows[i].0 += le[i];
            }
        } else {
            return Ok(pivot);
        }
    }
}
