use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::CandidateWindow;
use crate::mode_list::{pair_count, pair_id};
use crate::{
    median_rank, Error, IndexArtifact, Label, LabeledList, ListRange, MedianAnswer, Probe, Result,
};

/// Constant-query range median index over blocks of size `k`.
///
/// The potential medians of any query with endpoints in a fixed block pair
/// are the two blocks themselves plus the middle's rank window (at most
/// `6k + 2` values). Each pair stores that candidate set sorted (the
/// translation array) and a `k x k` table mapping in-block offsets to an
/// index into it; tables hold small normalized indexes, so they deduplicate
/// across pairs in a content-addressed store. A cross-block query is three
/// probes: pair lookup, table read, translation read. In-block queries read
/// one precomputed answer.
///
/// Block sizes are capped at 42 so table entries fit one byte.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MedianConstantIndex {
    list: LabeledList,
    k: u32,
    block_count: u32,
    tables: Vec<Vec<u8>>,
    pair_table: Vec<u32>,
    /// concatenated per-pair sorted candidate values
    pair_trans: Vec<u32>,
    pair_trans_off: Vec<u32>,
    /// per block, flat `k x k`: median value of the in-block range
    same_block: Vec<u32>,
    words: u64,
}

impl MedianConstantIndex {
    /// Positions (lists) or nodes (trees) this index answers for.
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn default_k(n: usize) -> usize {
        crate::mode_list::ModeConstantIndex::default_k(n).min(42)
    }

    pub fn with_default_k(list: &LabeledList) -> Result<Self> {
        Self::new(list, Self::default_k(list.len()).min(list.len()))
    }

    pub fn new(list: &LabeledList, k: usize) -> Result<Self> {
        let n = list.len();
        if !(1..=n.min(42)).contains(&k) {
            return Err(Error::BadBranching(k));
        }
        let value_at = |pos: u32| list.get(pos).0;
        let bc = (n as u32).div_ceil(k as u32);
        let b_start = |i: u32| i * k as u32 + 1;
        let b_end = |i: u32| ((i + 1) * k as u32).min(n as u32);

        // in-block medians by insertion-sorted sweeps
        let mut same_block = vec![u32::MAX; bc as usize * k * k];
        for b in 0..bc {
            let len = (b_end(b) - b_start(b) + 1) as usize;
            for x in 1..=len {
                let mut sorted: Vec<u32> = Vec::with_capacity(len - x + 1);
                for y in x..=len {
                    let v = value_at(b_start(b) + y as u32 - 1);
                    let at = sorted.partition_point(|&s| s <= v);
                    sorted.insert(at, v);
                    let rank = median_rank(sorted.len()) as usize;
                    same_block[(b as usize * k + (x - 1)) * k + (y - 1)] = sorted[rank - 1];
                }
            }
        }

        let npairs = pair_count(bc);
        let mut table_ids: HashMap<Vec<u8>, u32> = HashMap::new();
        let mut pair_table = vec![0u32; npairs];
        let mut pair_trans: Vec<u32> = Vec::new();
        let mut pair_trans_off = vec![0u32; npairs + 1];

        // pair sweep state reused across pairs
        let mut sorted_mid: Vec<Label> = Vec::new();
        for bi in 0..bc {
            sorted_mid.clear();
            for bj in bi + 1..bc {
                if bj >= bi + 2 {
                    let mut add: Vec<Label> =
                        (b_start(bj - 1)..=b_end(bj - 1)).map(|p| list.get(p)).collect();
                    add.sort_unstable();
                    sorted_mid = merge_sorted(&sorted_mid, &add);
                }
                let pid = pair_id(bc, bi, bj);
                let window = CandidateWindow::from_sorted_middle(&sorted_mid, k as u32);
                let mid_total = sorted_mid.len();
                let left: Vec<u32> = (b_start(bi)..=b_end(bi)).map(value_at).collect();
                let right: Vec<u32> = (b_start(bj)..=b_end(bj)).map(value_at).collect();
                let w: Vec<u32> = window.values.iter().map(|l| l.0).collect();

                let mut trans: Vec<u32> =
                    left.iter().chain(right.iter()).chain(w.iter()).copied().collect();
                trans.sort_unstable();

                let table = build_pair_table(
                    k,
                    &left,
                    &right,
                    &w,
                    mid_total,
                    window.omitted_low as usize,
                    &trans,
                );
                let next_id = table_ids.len() as u32;
                pair_table[pid] = *table_ids.entry(table).or_insert(next_id);
                // the (bi, bj) sweep enumerates pair ids in increasing order,
                // so offsets can be appended directly
                pair_trans.extend_from_slice(&trans);
                pair_trans_off[pid + 1] = pair_trans.len() as u32;
            }
        }

        let mut tables = vec![Vec::new(); table_ids.len()];
        for (t, id) in table_ids {
            tables[id as usize] = t;
        }
        let words = n as u64
            + same_block.len() as u64
            + pair_table.len() as u64
            + pair_trans.len() as u64
            + tables.iter().map(|t| t.len() as u64).sum::<u64>();
        Ok(MedianConstantIndex {
            list: list.clone(),
            k: k as u32,
            block_count: bc,
            tables,
            pair_table,
            pair_trans,
            pair_trans_off,
            same_block,
            words,
        })
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn distinct_tables(&self) -> usize {
        self.tables.len()
    }

    pub fn query(&self, r: ListRange) -> MedianAnswer {
        self.query_probed(r, &mut Probe::default())
    }

    pub fn query_probed(&self, r: ListRange, probe: &mut Probe) -> MedianAnswer {
        assert!(r.j as usize <= self.list.len());
        let k = self.k as usize;
        let rank = median_rank(r.len());
        let bi = (r.i - 1) / self.k;
        let bj = (r.j - 1) / self.k;
        let x = (r.i - (bi * self.k + 1)) as usize + 1;
        let y = (r.j - (bj * self.k + 1)) as usize + 1;
        if bi == bj {
            probe.tick();
            let v = self.same_block[(bi as usize * k + (x - 1)) * k + (y - 1)];
            return MedianAnswer { value: Label(v), rank };
        }
        probe.tick(); // pair lookup
        let pid = pair_id(self.block_count, bi, bj);
        probe.tick(); // table read
        let e = self.tables[self.pair_table[pid] as usize][(x - 1) * k + (y - 1)] as usize;
        probe.tick(); // translation read
        let off = self.pair_trans_off[pid] as usize;
        MedianAnswer { value: Label(self.pair_trans[off + e]), rank }
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

/// Fill the `k x k` offset table of one block pair.
///
/// For a fixed left offset `x` the query multiset is `S ∪ W ∪ P_y`, where
/// `S` is the sorted left-block suffix, `W` the sorted middle window and
/// `P_y` the sorted right-block prefix. The required rank moves by at most
/// one as `y` grows and the inserted element lands on a known side, so a
/// three-pointer partition walks each row in amortized constant time per
/// entry.
fn build_pair_table(
    k: usize,
    left: &[u32],
    right: &[u32],
    w: &[u32],
    mid_total: usize,
    omitted_low: usize,
    trans: &[u32],
) -> Vec<u8> {
    let li = left.len();
    let lj = right.len();
    // sorted right prefixes, snapshot per y
    let mut psorted: Vec<Vec<u32>> = Vec::with_capacity(lj + 1);
    psorted.push(Vec::new());
    for y in 1..=lj {
        let mut next = psorted[y - 1].clone();
        let at = next.partition_point(|&s| s <= right[y - 1]);
        next.insert(at, right[y - 1]);
        psorted.push(next);
    }

    let mut table = vec![0u8; k * k];
    let mut ssorted: Vec<u32> = Vec::with_capacity(li);
    for x in (1..=li).rev() {
        let at = ssorted.partition_point(|&s| s <= left[x - 1]);
        ssorted.insert(at, left[x - 1]);
        let p = ssorted.len();

        // partition pointers into (ssorted, w, psorted[y]); counts of
        // elements on the lower side, which always total the shifted rank
        let (mut cs, mut cw, mut cp) = (0usize, 0usize, 0usize);
        let target = |y: usize| (p + mid_total + y) / 2 + 1 - omitted_low;
        let mut cur_rank = 0usize;
        for y in 1..=lj {
            let py: &[u32] = &psorted[y];
            let e = right[y - 1];
            if y > 1 {
                // answer before inserting e
                let a_cur = lower_max(&ssorted, w, &psorted[y - 1], cs, cw, cp);
                if e < a_cur {
                    cp += 1;
                    cur_rank += 1;
                }
            }
            let want = target(y);
            debug_assert!(want >= cur_rank.saturating_sub(1) && want <= cur_rank + 6 * k + 2);
            while cur_rank < want {
                step_up(&ssorted, w, py, &mut cs, &mut cw, &mut cp);
                cur_rank += 1;
            }
            while cur_rank > want {
                step_down(&ssorted, w, py, &mut cs, &mut cw, &mut cp);
                cur_rank -= 1;
            }
            let answer = lower_max(&ssorted, w, py, cs, cw, cp);
            let e_idx = trans.partition_point(|&t| t < answer);
            debug_assert!(trans[e_idx] == answer);
            table[(x - 1) * k + (y - 1)] = e_idx as u8;
        }
    }
    table
}

fn lower_max(s: &[u32], w: &[u32], p: &[u32], cs: usize, cw: usize, cp: usize) -> u32 {
    let mut best = u32::MIN;
    if cs > 0 {
        best = best.max(s[cs - 1]);
    }
    if cw > 0 {
        best = best.max(w[cw - 1]);
    }
    if cp > 0 {
        best = best.max(p[cp - 1]);
    }
    best
}

fn step_up(s: &[u32], w: &[u32], p: &[u32], cs: &mut usize, cw: &mut usize, cp: &mut usize) {
    let vs = s.get(*cs).copied().unwrap_or(u32::MAX);
    let vw = w.get(*cw).copied().unwrap_or(u32::MAX);
    let vp = p.get(*cp).copied().unwrap_or(u32::MAX);
    if vs <= vw && vs <= vp {
        *cs += 1;
    } else if vw <= vp {
        *cw += 1;
    } else {
        *cp += 1;
    }
}

fn step_down(s: &[u32], w: &[u32], p: &[u32], cs: &mut usize, cw: &mut usize, cp: &mut usize) {
    let vs = if *cs > 0 { s[*cs - 1] } else { u32::MIN };
    let vw = if *cw > 0 { w[*cw - 1] } else { u32::MIN };
    let vp = if *cp > 0 { p[*cp - 1] } else { u32::MIN };
    if *cs > 0 && vs >= vw && vs >= vp {
        *cs -= 1;
    } else if *cw > 0 && vw >= vp {
        *cw -= 1;
    } else {
        *cp -= 1;
    }
}

impl IndexArtifact for MedianConstantIndex {
    fn words(&self) -> u64 {
        self.words
    }
    fn kind(&self) -> &'static str {
        "median-constant"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn l1() -> LabeledList {
        LabeledList::from_labels([3u32, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5].map(Label).to_vec()).unwrap()
    }

    fn check_all_ranges(list: &LabeledList, idx: &MedianConstantIndex) {
        let n = list.len() as u32;
        for i in 1..=n {
            for j in i..=n {
                let r = ListRange::new(i, j);
                assert_eq!(
                    idx.query(r),
                    oracle::median(list.range_slice(r)).unwrap(),
                    "k={} range {i}..={j}",
                    idx.k()
                );
            }
        }
    }

    #[test]
    fn exhaustive_on_l1() {
        let l = l1();
        for k in [1usize, 2, 3, 5, 11] {
            let idx = MedianConstantIndex::new(&l, k).unwrap();
            check_all_ranges(&l, &idx);
        }
    }

    #[test]
    fn query_examples() {
        let idx = MedianConstantIndex::new(&l1(), 2).unwrap();
        assert_eq!(idx.query(ListRange::new(2, 10)).value, Label(4));
        assert_eq!(idx.query(ListRange::new(3, 3)).value, Label(4));
    }

    #[test]
    fn all_equal_list_shares_one_table() {
        for n in [12usize, 13] {
            let list = LabeledList::from_labels(vec![Label(6); n]).unwrap();
            for k in [2usize, 3] {
                let idx = MedianConstantIndex::new(&list, k).unwrap();
                assert_eq!(idx.distinct_tables(), 1, "n={n} k={k}");
                check_all_ranges(&list, &idx);
            }
        }
    }

    #[test]
    fn random_lists_match_oracle() {
        let mut state = 0x9A7A_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in [1usize, 2, 4, 9, 33, 64, 100] {
            let labels: Vec<Label> =
                (0..n).map(|_| Label((next() % (n as u64 / 3 + 2)) as u32)).collect();
            let list = LabeledList::from_labels(labels).unwrap();
            for k in [1usize, 2, 3, 7] {
                if k > n {
                    continue;
                }
                let idx = MedianConstantIndex::new(&list, k).unwrap();
                check_all_ranges(&list, &idx);
            }
        }
    }

    #[test]
    fn cross_block_is_three_probes() {
        let labels: Vec<Label> = (0..64u32).map(|i| Label(i * 13 % 31)).collect();
        let list = LabeledList::from_labels(labels).unwrap();
        let idx = MedianConstantIndex::new(&list, 4).unwrap();
        let mut p = Probe::default();
        idx.query_probed(ListRange::new(3, 40), &mut p);
        assert_eq!(p.probes, 3);
        let mut p = Probe::default();
        idx.query_probed(ListRange::new(3, 4), &mut p);
        assert_eq!(p.probes, 1);
    }

    #[test]
    fn rejects_bad_k() {
        let l = l1();
        assert!(MedianConstantIndex::new(&l, 0).is_err());
        assert!(MedianConstantIndex::new(&l, 12).is_err());
    }
}
