//! Brute-force reference implementations.
//!
//! These define ground truth for every index in the crate: linear scans,
//! sort-and-index selection, and parent-chain path walks. They are
//! deliberately simple; correctness tests compare each structure against
//! this module, never against another structure.

use std::collections::HashMap;

use crate::{median_rank, Error, Label, LabeledTree, MedianAnswer, ModeAnswer, Result};

/// The unique simple path `u..=v`, found by walking parent chains to the
/// lowest common ancestor.
pub fn path(tree: &LabeledTree, u: u32, v: u32) -> Result<Vec<u32>> {
    if !tree.contains(u) {
        return Err(Error::UnknownNode(u));
    }
    if !tree.contains(v) {
        return Err(Error::UnknownNode(v));
    }
    // mark u's root chain, walk v upward to the first marked node
    let mut on_u_chain = vec![false; tree.len()];
    let mut x = Some(u);
    while let Some(node) = x {
        on_u_chain[node as usize] = true;
        x = tree.parent(node);
    }
    let mut w = v;
    while !on_u_chain[w as usize] {
        w = tree.parent(w).expect("chains meet at the root");
    }
    let mut up = Vec::new();
    let mut x = u;
    while x != w {
        up.push(x);
        x = tree.parent(x).unwrap();
    }
    up.push(w);
    let mut down = Vec::new();
    let mut x = v;
    while x != w {
        down.push(x);
        x = tree.parent(x).unwrap();
    }
    up.extend(down.into_iter().rev());
    Ok(up)
}

/// Labels along the `u..=v` path, in path order.
pub fn path_labels(tree: &LabeledTree, u: u32, v: u32) -> Result<Vec<Label>> {
    Ok(path(tree, u, v)?.into_iter().map(|x| tree.label(x)).collect())
}

/// A maximal-frequency label; ties broken toward the smallest label id so the
/// oracle is deterministic.
pub fn mode(multiset: &[Label]) -> Result<ModeAnswer> {
    if multiset.is_empty() {
        return Err(Error::EmptyRange);
    }
    let mut counts: HashMap<Label, u32> = HashMap::new();
    for &x in multiset {
        *counts.entry(x).or_insert(0) += 1;
    }
    let mut best = ModeAnswer { value: Label(u32::MAX), frequency: 0 };
    for (&value, &frequency) in &counts {
        if frequency > best.frequency || (frequency == best.frequency && value < best.value) {
            best = ModeAnswer { value, frequency };
        }
    }
    Ok(best)
}

/// The element at 1-indexed sorted position `r`.
pub fn select(multiset: &[Label], r: u32) -> Result<Label> {
    if r == 0 || r as usize > multiset.len() {
        return Err(Error::RankOutOfRange { rank: r, size: multiset.len() as u32 });
    }
    let mut sorted = multiset.to_vec();
    sorted.sort_unstable();
    Ok(sorted[(r - 1) as usize])
}

/// Median under the `floor(m/2) + 1` rank convention; delegates to [`select`].
pub fn median(multiset: &[Label]) -> Result<MedianAnswer> {
    if multiset.is_empty() {
        return Err(Error::EmptyRange);
    }
    let rank = median_rank(multiset.len());
    Ok(MedianAnswer { value: select(multiset, rank)?, rank })
}

/// Exact number of occurrences of `x`.
pub fn count(multiset: &[Label], x: Label) -> u32 {
    multiset.iter().filter(|&&y| y == x).count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::testutil::t1;
    use crate::LabeledList;

    /// The 11-element example list used across module tests.
    pub(crate) fn l1() -> LabeledList {
        LabeledList::from_labels(
            [3u32, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5].map(Label).to_vec(),
        )
        .unwrap()
    }

    fn slice(l: &LabeledList, i: u32, j: u32) -> Vec<Label> {
        l.range_slice(crate::ListRange::new(i, j)).to_vec()
    }

    #[test]
    fn path_walks() {
        let t = t1();
        // ids here are the 1-based example ids shifted down by one
        assert_eq!(path(&t, 3, 6).unwrap(), vec![3, 1, 0, 2, 5, 6]);
        assert_eq!(path(&t, 3, 3).unwrap(), vec![3]);
        assert_eq!(path(&t, 3, 4).unwrap(), vec![3, 1, 4]);
        assert_eq!(path(&t, 0, 6).unwrap(), vec![0, 2, 5, 6]);
        assert_eq!(path(&t, 9, 0).unwrap_err(), Error::UnknownNode(9));
    }

    #[test]
    fn mode_examples() {
        let l = l1();
        let full = mode(&slice(&l, 1, 11)).unwrap();
        assert_eq!(full, ModeAnswer { value: Label(5), frequency: 3 });
        let m = mode(&slice(&l, 2, 5)).unwrap();
        assert_eq!(m, ModeAnswer { value: Label(1), frequency: 2 });
        let single = mode(&slice(&l, 6, 6)).unwrap();
        assert_eq!(single, ModeAnswer { value: Label(9), frequency: 1 });
        assert_eq!(mode(&[]).unwrap_err(), Error::EmptyRange);
    }

    #[test]
    fn select_examples() {
        assert_eq!(select(&[3, 1, 4, 1].map(Label), 3).unwrap(), Label(3));
        assert_eq!(select(&[Label(7)], 1).unwrap(), Label(7));
        let l = l1();
        // sorted: [1,1,2,3,3,4,5,5,5,6,9]
        assert_eq!(select(&slice(&l, 1, 11), 6).unwrap(), Label(4));
        assert!(matches!(
            select(&[Label(7)], 2),
            Err(Error::RankOutOfRange { rank: 2, size: 1 })
        ));
        assert!(select(&[Label(7)], 0).is_err());
    }

    #[test]
    fn median_examples() {
        let l = l1();
        assert_eq!(
            median(&slice(&l, 1, 11)).unwrap(),
            MedianAnswer { value: Label(4), rank: 6 }
        );
        assert_eq!(
            median(&slice(&l, 1, 4)).unwrap(),
            MedianAnswer { value: Label(3), rank: 3 }
        );
        assert_eq!(
            median(&slice(&l, 7, 7)).unwrap(),
            MedianAnswer { value: Label(2), rank: 1 }
        );
    }

    #[test]
    fn count_examples() {
        let l = l1();
        assert_eq!(count(&slice(&l, 1, 11), Label(5)), 3);
        assert_eq!(count(&slice(&l, 1, 4), Label(5)), 0);
        assert_eq!(count(&slice(&l, 6, 6), Label(9)), 1);
    }

    #[test]
    fn count_never_exceeds_mode_frequency() {
        let mut rng = 0x5EED_u64;
        let mut next = move || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            rng
        };
        for _ in 0..200 {
            let n = (next() % 40 + 1) as usize;
            let s: Vec<Label> = (0..n).map(|_| Label((next() % 8) as u32)).collect();
            let m = mode(&s).unwrap();
            assert_eq!(count(&s, m.value), m.frequency);
            for x in 0..8 {
                assert!(count(&s, Label(x)) <= m.frequency);
            }
        }
    }

    #[test]
    fn median_rank_on_distinct_sets() {
        // on duplicate-free sets the median is >= exactly floor(m/2) elements
        let mut rng = 0xABCD_u64;
        let mut next = move || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            rng
        };
        for _ in 0..100 {
            let n = (next() % 20 + 1) as usize;
            let mut vals: Vec<u32> = (0..200).collect();
            // partial shuffle, take distinct prefix
            for i in 0..n {
                let j = i + (next() as usize) % (200 - i);
                vals.swap(i, j);
            }
            let s: Vec<Label> = vals[..n].iter().map(|&v| Label(v)).collect();
            let med = median(&s).unwrap();
            let below = s.iter().filter(|&&x| x < med.value).count();
            assert_eq!(below, n / 2);
        }
    }
}
