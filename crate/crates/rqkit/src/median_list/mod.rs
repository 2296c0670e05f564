//! Range median indexes on lists.
//!
//! [`MedianBlockIndex`] splits the list into blocks carrying persistent
//! prefix/suffix search trees plus per-pair candidate windows, recursing into
//! blocks for short ranges. [`RangeTreeIndex`] stores sorted arrays on a
//! complete b-ary position tree and selects across a canonical decomposition
//! of the range. [`MedianConstantIndex`] answers in a constant number of
//! probes from shared lookup tables over normalized candidate sets.

mod block;
mod constant;
mod range_tree;

pub use block::MedianBlockIndex;
pub use constant::MedianConstantIndex;
pub use range_tree::RangeTreeIndex;

use crate::Label;

/// Candidate window of a block pair's middle multiset: the sorted elements
/// whose middle rank falls within `2s` of the middle's median (the whole
/// middle when it is small), plus the count of omitted lower-ranked
/// elements. Selection ranks shift down by `omitted_low`; the omitted
/// elements can never contain the range median.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub(crate) struct CandidateWindow {
    pub values: Vec<Label>,
    pub omitted_low: u32,
}

impl CandidateWindow {
    /// Clip `sorted_middle` to the rank window `[c - 2s, c + 2s]` around the
    /// median rank `c = floor(m/2) + 1`.
    pub fn from_sorted_middle(sorted_middle: &[Label], s: u32) -> Self {
        let m = sorted_middle.len();
        if m <= 4 * s as usize + 1 {
            return CandidateWindow { values: sorted_middle.to_vec(), omitted_low: 0 };
        }
        let c = m / 2 + 1;
        let lo = c - 2 * s as usize; // m > 4s + 1 keeps both ends in range
        let hi = c + 2 * s as usize;
        CandidateWindow {
            values: sorted_middle[lo - 1..hi].to_vec(),
            omitted_low: (lo - 1) as u32,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_middles_are_stored_whole() {
        let mid: Vec<Label> = [2u32, 5, 6, 9].map(Label).to_vec();
        let w = CandidateWindow::from_sorted_middle(&mid, 4);
        assert_eq!(w.values, mid);
        assert_eq!(w.omitted_low, 0);
    }

    #[test]
    fn large_middles_keep_the_rank_window() {
        let mid: Vec<Label> = (0..100u32).map(Label).collect();
        let s = 3;
        let w = CandidateWindow::from_sorted_middle(&mid, s);
        // c = 51, window ranks 45..=57
        assert_eq!(w.omitted_low, 44);
        assert_eq!(w.values.len(), (4 * s + 1) as usize);
        assert_eq!(w.values[0], Label(44));
        assert_eq!(*w.values.last().unwrap(), Label(56));
    }
}
