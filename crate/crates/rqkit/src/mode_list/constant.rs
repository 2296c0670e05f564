use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{pair_count, pair_id, Blocks};
use crate::{Error, IndexArtifact, Label, LabeledList, ListRange, ModeAnswer, Probe, Result};

/// Constant-query range mode index over blocks of size `k`.
///
/// For every block pair a `k x k` table maps the in-block offsets `(x, y)` of
/// a query to an outcome code in `0..=2k`: code `0` names the precomputed
/// middle mode of the pair, codes `1..=k` name a position in the left block
/// and codes `k+1..=2k` a position in the right block. Tables are
/// content-addressed, so at most `(2k+1)^(k^2)` distinct tables can ever be
/// stored and equal-patterned pairs share one copy. Ranges inside one block
/// read a precomputed answer.
///
/// The reported frequency is assembled without touching any length-dependent
/// structure: the middle count of the decoded answer is stored per pair and
/// the two partial blocks are rescanned in full, so the probe count of a
/// cross-block query is exactly `2k + 4` whenever both end blocks are full,
/// independent of `n`.
///
/// Block sizes are capped at 127 so outcome codes fit one byte; larger
/// blocks would defeat the shared-table design anyway.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModeConstantIndex {
    list: LabeledList,
    blocks: Blocks,
    tables: Vec<Vec<u8>>,
    pair_table: Vec<u32>,
    /// middle mode value per pair, `u32::MAX` when the middle is empty
    pair_m: Vec<u32>,
    /// per pair, indexed by outcome code: occurrences of the decoded value
    /// in the pair's middle
    pair_mid_counts: Vec<u32>,
    /// per block, flat `k x k`: (value, frequency) for in-block ranges
    same_block: Vec<(u32, u32)>,
    words: u64,
}

impl ModeConstantIndex {
    /// Positions (lists) or nodes (trees) this index answers for.
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The block size suggested by the shared-table space analysis,
    /// clamped to at least 1.
    pub fn default_k(n: usize) -> usize {
        let n = n as f64;
        let ln = n.ln();
        let lnln = ln.ln();
        if lnln.is_nan() || lnln <= 0.0 {
            return 1;
        }
        ((ln / lnln).sqrt().floor() as usize).max(1)
    }

    pub fn with_default_k(list: &LabeledList) -> Result<Self> {
        Self::new(list, Self::default_k(list.len()).min(list.len()))
    }

    pub fn new(list: &LabeledList, k: usize) -> Result<Self> {
        let n = list.len();
        if !(1..=n.min(127)).contains(&k) {
            return Err(Error::BadBranching(k));
        }
        let blocks = Blocks::with_size(n as u32, k as u32);
        let bc = blocks.count;
        let npairs = pair_count(bc);
        let universe = list.universe() as usize;
        let value_at = |pos: u32| list.get(pos).0;

        // in-block answers, O(k^2) per block
        let mut same_block = vec![(u32::MAX, 0u32); bc as usize * k * k];
        let mut freq = vec![0u32; universe];
        for b in 0..bc {
            let start = blocks.start(b);
            let len = blocks.len(b) as usize;
            for x in 1..=len {
                let mut best = (u32::MAX, 0u32);
                for y in x..=len {
                    let v = value_at(start + y as u32 - 1);
                    freq[v as usize] += 1;
                    if freq[v as usize] > best.1 {
                        best = (v, freq[v as usize]);
                    }
                    same_block[(b as usize * k + (x - 1)) * k + (y - 1)] = best;
                }
                for y in x..=len {
                    freq[value_at(start + y as u32 - 1) as usize] = 0;
                }
            }
        }

        // cross-block tables: sweep the middle multiset per left block
        let mut table_ids: HashMap<Vec<u8>, u32> = HashMap::new();
        let mut pair_table = vec![0u32; npairs];
        let mut pair_m = vec![u32::MAX; npairs];
        let codes = 2 * k + 1;
        let mut pair_mid_counts = vec![0u32; npairs * codes];
        let mut mid_freq = vec![0u32; universe];
        let mut touched: Vec<u32> = Vec::new();
        for bi in 0..bc {
            let mut best_m: Option<(u32, u32)> = None;
            for bj in bi + 1..bc {
                if bj >= bi + 2 {
                    for pos in blocks.start(bj - 1)..=blocks.end(bj - 1) {
                        let v = value_at(pos);
                        if mid_freq[v as usize] == 0 {
                            touched.push(v);
                        }
                        mid_freq[v as usize] += 1;
                        if best_m.is_none_or(|(_, f)| mid_freq[v as usize] > f) {
                            best_m = Some((v, mid_freq[v as usize]));
                        }
                    }
                }
                let pid = pair_id(bc, bi, bj);
                let left: Vec<u32> =
                    (blocks.start(bi)..=blocks.end(bi)).map(value_at).collect();
                let right: Vec<u32> =
                    (blocks.start(bj)..=blocks.end(bj)).map(value_at).collect();

                // candidate values of this pair and their canonical codes
                let mut cands: Vec<u32> = left.iter().chain(right.iter()).copied().collect();
                if let Some((m, _)) = best_m {
                    cands.push(m);
                }
                cands.sort_unstable();
                cands.dedup();
                let slot = |v: u32| cands.binary_search(&v).unwrap();
                let mut canon = vec![0u8; cands.len()];
                for (p, &v) in right.iter().enumerate().rev() {
                    canon[slot(v)] = (k + 1 + p) as u8;
                }
                for (p, &v) in left.iter().enumerate().rev() {
                    canon[slot(v)] = (1 + p) as u8;
                }
                // preference order for ties: left positions, right positions,
                // then the middle mode
                let key = |c: usize| -> u32 {
                    if canon[c] == 0 {
                        u32::MAX
                    } else {
                        canon[c] as u32
                    }
                };
                let midc: Vec<u32> =
                    cands.iter().map(|&v| mid_freq[v as usize]).collect();

                let mut table = vec![1u8; k * k]; // out-of-range offsets, never read
                let mut suffix = vec![0u32; cands.len()];
                for x in (1..=left.len()).rev() {
                    suffix[slot(left[x - 1])] += 1;
                    let mut cur: Vec<u32> =
                        (0..cands.len()).map(|c| suffix[c] + midc[c]).collect();
                    let mut best = 0usize;
                    for c in 1..cands.len() {
                        if cur[c] > cur[best] || (cur[c] == cur[best] && key(c) < key(best)) {
                            best = c;
                        }
                    }
                    let mut best_count = cur[best];
                    for y in 1..=right.len() {
                        let s = slot(right[y - 1]);
                        cur[s] += 1;
                        if cur[s] > best_count || (cur[s] == best_count && key(s) < key(best)) {
                            best = s;
                            best_count = cur[s];
                        }
                        table[(x - 1) * k + (y - 1)] = canon[best];
                    }
                }

                let next_id = table_ids.len() as u32;
                pair_table[pid] = *table_ids.entry(table).or_insert(next_id);
                pair_m[pid] = best_m.map_or(u32::MAX, |(v, _)| v);
                let base = pid * codes;
                if let Some((m, f)) = best_m {
                    let _ = m;
                    pair_mid_counts[base] = f;
                }
                for (p, &v) in left.iter().enumerate() {
                    pair_mid_counts[base + 1 + p] = mid_freq[v as usize];
                }
                for (p, &v) in right.iter().enumerate() {
                    pair_mid_counts[base + k + 1 + p] = mid_freq[v as usize];
                }
            }
            for v in touched.drain(..) {
                mid_freq[v as usize] = 0;
            }
        }

        let mut tables = vec![Vec::new(); table_ids.len()];
        for (t, id) in table_ids {
            tables[id as usize] = t;
        }
        let words = n as u64
            + same_block.len() as u64 * 2
            + pair_table.len() as u64 * 2
            + pair_mid_counts.len() as u64
            + tables.iter().map(|t| t.len() as u64).sum::<u64>();
        Ok(ModeConstantIndex {
            list: list.clone(),
            blocks,
            tables,
            pair_table,
            pair_m,
            pair_mid_counts,
            same_block,
            words,
        })
    }

    pub fn k(&self) -> usize {
        self.blocks.size as usize
    }

    /// Number of distinct stored tables; bounded by `(2k+1)^(k^2)`.
    pub fn distinct_tables(&self) -> usize {
        self.tables.len()
    }

    pub fn query(&self, r: ListRange) -> ModeAnswer {
        self.query_probed(r, &mut Probe::default())
    }

    pub fn query_probed(&self, r: ListRange, probe: &mut Probe) -> ModeAnswer {
        assert!(r.j as usize <= self.list.len());
        let k = self.blocks.size as usize;
        let bi = self.blocks.of_pos(r.i);
        let bj = self.blocks.of_pos(r.j);
        let x = (r.i - self.blocks.start(bi)) as usize + 1;
        let y = (r.j - self.blocks.start(bj)) as usize + 1;
        if bi == bj {
            probe.tick();
            let (v, f) = self.same_block[(bi as usize * k + (x - 1)) * k + (y - 1)];
            return ModeAnswer { value: Label(v), frequency: f };
        }
        probe.tick(); // pair lookup
        let pid = pair_id(self.blocks.count, bi, bj);
        probe.tick(); // table read
        let code = self.tables[self.pair_table[pid] as usize][(x - 1) * k + (y - 1)] as usize;
        probe.tick(); // decode
        let value = if code == 0 {
            Label(self.pair_m[pid])
        } else if code <= k {
            self.list.get(self.blocks.start(bi) + code as u32 - 1)
        } else {
            self.list.get(self.blocks.start(bj) + (code - k) as u32 - 1)
        };
        probe.tick(); // stored middle count of the decoded value
        let mut frequency = self.pair_mid_counts[pid * (2 * k + 1) + code];
        // fixed-length partial-block scans: the whole block is read so the
        // probe count never depends on the offsets
        for (p, pos) in (self.blocks.start(bi)..=self.blocks.end(bi)).enumerate() {
            probe.tick();
            if p + 1 >= x && self.list.get(pos) == value {
                frequency += 1;
            }
        }
        for (p, pos) in (self.blocks.start(bj)..=self.blocks.end(bj)).enumerate() {
            probe.tick();
            if p < y && self.list.get(pos) == value {
                frequency += 1;
            }
        }
        ModeAnswer { value, frequency }
    }
}

impl IndexArtifact for ModeConstantIndex {
    fn words(&self) -> u64 {
        self.words
    }
    fn kind(&self) -> &'static str {
        "mode-constant"
    }
}
