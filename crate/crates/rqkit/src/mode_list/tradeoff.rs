use serde::{Deserialize, Serialize};

use super::{Blocks, OccurrenceIndex};
use crate::{Error, IndexArtifact, Label, LabeledList, ListRange, ModeAnswer, Probe, Result};

/// Block-decomposition range mode index.
///
/// The list is split into `b` blocks of size `s = ceil(n/b)`. For every block
/// pair the mode of the blocks strictly between them is precomputed. A
/// cross-block query then has at most `2s + 1` candidates — the suffix of the
/// left partial block, the prefix of the right partial block, and the middle
/// mode — each verified with one range counting query. Same-block ranges are
/// answered by sorting the range and scanning for the longest run.
///
/// With `b = ceil(n^(1-eps))` this is the `O(n^(2-2eps))` space /
/// `O(n^eps log n)` query point of the tradeoff.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModeTradeoffIndex {
    list: LabeledList,
    occ: OccurrenceIndex,
    blocks: Blocks,
    /// middle mode per block pair, flat `count * count`; `None` when no full
    /// block lies strictly between the pair. The stored frequency is the
    /// frequency within the middle, not within any query range.
    middle: Vec<Option<ModeAnswer>>,
    words: u64,
}

impl ModeTradeoffIndex {
    /// Positions (lists) or nodes (trees) this index answers for.
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Build with the block count derived from `epsilon` in (0, 1/2].
    pub fn new(list: &LabeledList, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(Error::BadEpsilon(epsilon));
        }
        let n = list.len() as f64;
        let b = n.powf(1.0 - epsilon).ceil() as usize;
        Self::with_block_count(list, b.clamp(1, list.len()))
    }

    /// Build with an explicit block count `1..=n`.
    pub fn with_block_count(list: &LabeledList, b: usize) -> Result<Self> {
        let n = list.len();
        if !(1..=n).contains(&b) {
            return Err(Error::BadBranching(b));
        }
        let occ = OccurrenceIndex::new(list);
        let blocks = Blocks::with_size(n as u32, (n as u32).div_ceil(b as u32));
        let count = blocks.count as usize;

        let mut middle = vec![None; count * count];
        let mut freq = vec![0u32; list.universe() as usize];
        let mut touched = Vec::new();
        for bi in 0..blocks.count {
            let mut best: Option<ModeAnswer> = None;
            for bj in bi + 2..blocks.count {
                // extend the middle multiset with block bj-1
                for pos in blocks.start(bj - 1)..=blocks.end(bj - 1) {
                    let x = list.get(pos);
                    let f = &mut freq[x.0 as usize];
                    if *f == 0 {
                        touched.push(x);
                    }
                    *f += 1;
                    if best.is_none_or(|m| *f > m.frequency) {
                        best = Some(ModeAnswer { value: x, frequency: *f });
                    }
                }
                middle[(bi * blocks.count + bj) as usize] = best;
                #[cfg(debug_assertions)]
                if n <= 256 {
                    let mid = list.range_slice(ListRange::new(
                        blocks.start(bi + 1),
                        blocks.end(bj - 1),
                    ));
                    let want = crate::oracle::mode(mid).unwrap().frequency;
                    debug_assert_eq!(best.unwrap().frequency, want);
                }
            }
            for x in touched.drain(..) {
                freq[x.0 as usize] = 0;
            }
        }

        let words = list.len() as u64 + occ.words() + (count * count) as u64 * 2;
        Ok(ModeTradeoffIndex { list: list.clone(), occ, blocks, middle, words })
    }

    pub fn block_size(&self) -> u32 {
        self.blocks.size
    }

    pub fn block_count(&self) -> u32 {
        self.blocks.count
    }

    pub(crate) fn middle_mode(&self, bi: u32, bj: u32) -> Option<ModeAnswer> {
        self.middle[(bi * self.blocks.count + bj) as usize]
    }

    pub fn query(&self, r: ListRange) -> ModeAnswer {
        self.query_probed(r, &mut Probe::default())
    }

    pub fn query_probed(&self, r: ListRange, probe: &mut Probe) -> ModeAnswer {
        assert!(r.j as usize <= self.list.len());
        let bi = self.blocks.of_pos(r.i);
        let bj = self.blocks.of_pos(r.j);
        if bi == bj {
            return self.sort_and_scan(r, probe);
        }
        let mut best = ModeAnswer { value: self.list.get(r.i), frequency: 0 };
        let mut consider = |x: Label, probe: &mut Probe| {
            probe.candidate();
            let f = self.occ.range_count(x, r, probe);
            if f > best.frequency {
                best = ModeAnswer { value: x, frequency: f };
            }
        };
        for pos in r.i..=self.blocks.end(bi) {
            consider(self.list.get(pos), probe);
        }
        for pos in self.blocks.start(bj)..=r.j {
            consider(self.list.get(pos), probe);
        }
        if let Some(m) = self.middle_mode(bi, bj) {
            consider(m.value, probe);
        }
        best
    }

    /// Direct method for ranges inside one block: sort a copy, take the
    /// longest run of equal labels.
    fn sort_and_scan(&self, r: ListRange, probe: &mut Probe) -> ModeAnswer {
        let mut vals = self.list.range_slice(r).to_vec();
        probe.bump(vals.len() as u64);
        vals.sort_unstable();
        let mut best = ModeAnswer { value: vals[0], frequency: 1 };
        let mut run_value = vals[0];
        let mut run = 0u32;
        for &x in &vals {
            if x == run_value {
                run += 1;
            } else {
                probe.candidate();
                run_value = x;
                run = 1;
            }
            if run > best.frequency {
                best = ModeAnswer { value: run_value, frequency: run };
            }
        }
        best
    }
}

impl IndexArtifact for ModeTradeoffIndex {
    fn words(&self) -> u64 {
        self.words
    }
    fn kind(&self) -> &'static str {
        "mode-tradeoff"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn l1() -> LabeledList {
        LabeledList::from_labels([3u32, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5].map(Label).to_vec()).unwrap()
    }

    #[test]
    fn middle_table_from_example() {
        // blocks [1..4], [5..8], [9..11]
        let idx = ModeTradeoffIndex::with_block_count(&l1(), 3).unwrap();
        assert_eq!(idx.block_size(), 4);
        assert_eq!(idx.block_count(), 3);
        let m = idx.middle_mode(0, 2).unwrap();
        assert_eq!(m.frequency, 1); // middle [5,9,2,6] is all distinct
        assert!(idx.middle_mode(0, 1).is_none());
        assert!(idx.middle_mode(1, 2).is_none());
    }

    #[test]
    fn single_block_has_empty_middle() {
        let idx = ModeTradeoffIndex::with_block_count(&l1(), 1).unwrap();
        assert_eq!(idx.block_count(), 1);
        assert!(idx.middle.iter().all(|m| m.is_none()));
        let a = idx.query(ListRange::new(1, 11));
        assert_eq!(a.frequency, 3);
    }

    #[test]
    fn block_count_arithmetic_at_epsilon_half() {
        // n = 10^4, eps = 1/2: 100 blocks, 100*99/2 middle pairs
        let labels: Vec<Label> = (0..10_000u32).map(|i| Label(i % 97)).collect();
        let list = LabeledList::from_labels(labels).unwrap();
        let idx = ModeTradeoffIndex::new(&list, 0.5).unwrap();
        assert_eq!(idx.block_count(), 100);
        assert_eq!(super::super::pair_count(idx.block_count()), 4950);
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(matches!(ModeTradeoffIndex::new(&l1(), 0.9), Err(Error::BadEpsilon(_))));
        assert!(matches!(ModeTradeoffIndex::new(&l1(), 0.0), Err(Error::BadEpsilon(_))));
    }

    #[test]
    fn query_examples() {
        let idx = ModeTradeoffIndex::with_block_count(&l1(), 3).unwrap();
        let l = l1();
        let a = idx.query(ListRange::new(2, 10));
        assert_eq!(a.frequency, 2); // labels 1 and 5 both occur twice
        assert_eq!(oracle::count(l.range_slice(ListRange::new(2, 10)), a.value), 2);
        assert_eq!(idx.query(ListRange::new(6, 6)), ModeAnswer { value: Label(9), frequency: 1 });
        let full = idx.query(ListRange::new(1, 11));
        assert_eq!(full, ModeAnswer { value: Label(5), frequency: 3 });
    }

    #[test]
    fn matches_oracle_with_candidate_bound() {
        let mut state = 0x7157_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in [1usize, 2, 3, 7, 16, 40] {
            let labels: Vec<Label> =
                (0..n).map(|_| Label((next() % (n as u64 / 3 + 2)) as u32)).collect();
            let list = LabeledList::from_labels(labels).unwrap();
            for b in [1usize, 2, 3, n] {
                if b > n {
                    continue;
                }
                let idx = ModeTradeoffIndex::with_block_count(&list, b).unwrap();
                let cap = 2 * idx.block_size() as u64 + 1;
                for i in 1..=n as u32 {
                    for j in i..=n as u32 {
                        let r = ListRange::new(i, j);
                        let mut p = Probe::default();
                        let got = idx.query_probed(r, &mut p);
                        let want = oracle::mode(list.range_slice(r)).unwrap();
                        assert_eq!(got.frequency, want.frequency, "n={n} b={b} {i}..{j}");
                        assert_eq!(
                            oracle::count(list.range_slice(r), got.value),
                            got.frequency
                        );
                        assert!(p.candidates <= cap, "candidates {} > {cap}", p.candidates);
                    }
                }
            }
        }
    }

    #[test]
    fn words_counter_is_linear_plus_pairs() {
        let labels: Vec<Label> = (0..4096u32).map(|i| Label(i % 64)).collect();
        let list = LabeledList::from_labels(labels).unwrap();
        let idx = ModeTradeoffIndex::new(&list, 0.5).unwrap();
        let b = idx.block_count() as u64;
        assert!(idx.words() <= 4 * (4096 + b * b));
    }
}
