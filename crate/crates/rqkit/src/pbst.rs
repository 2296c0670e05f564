//! Persistent augmented binary search trees built by path copying.
//!
//! The store is an append-only node pool; an insert copies the root-to-leaf
//! path and returns a new [`VersionHandle`] while every old version stays
//! queryable. Each node carries a subtree-size field, so any version answers
//! rank and select in O(height).
//!
//! Balance comes from treap priorities derived deterministically from a hash
//! of (value, insertion index): rebuilds are bit-for-bit reproducible, and
//! blocks inserted in sorted order keep logarithmic height. Duplicate values
//! are permitted and stored as repeated entries (equal values go right, so a
//! left subtree holds strictly smaller values).

use serde::{Deserialize, Serialize};

use crate::{Error, Label, Probe, Result};

pub const NIL: u32 = u32::MAX;

/// Height / allocation bound factor: every version of size `s` has height
/// at most `BALANCE_LOG_FACTOR * log2(s + 2)`, and an insert into it
/// allocates at most that many nodes. Checked by instrumented tests.
pub const BALANCE_LOG_FACTOR: f64 = 5.0;

/// The per-insert node budget for a version of size `s`.
pub fn alloc_budget(size: u32) -> u64 {
    (BALANCE_LOG_FACTOR * ((size as f64) + 2.0).log2()).ceil() as u64
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
struct Node {
    value: u32,
    left: u32,
    right: u32,
    size: u32,
    priority: u64,
}

/// One version of the multiset: a root reference plus its element count.
/// Handles are tiny and `Copy`; they stay valid for the lifetime of the
/// store that produced them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionHandle {
    root: u32,
    size: u32,
}

impl VersionHandle {
    pub const EMPTY: VersionHandle = VersionHandle { root: NIL, size: 0 };

    #[inline]
    pub fn len(&self) -> u32 {
        self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub(crate) fn root(&self) -> u32 {
        self.root
    }
}

/// Append-only pool of search-tree nodes; never mutates a node after
/// creation. Single-writer during construction, then freely shared.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PersistentTreeStore {
    nodes: Vec<Node>,
    insert_count: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl PersistentTreeStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Total nodes ever allocated; the space counter for this store.
    #[inline]
    pub fn nodes_allocated(&self) -> u64 {
        self.nodes.len() as u64
    }

    #[inline]
    fn node(&self, r: u32) -> &Node {
        &self.nodes[r as usize]
    }

    fn alloc(&mut self, value: u32, left: u32, right: u32, priority: u64) -> u32 {
        let size = 1
            + if left == NIL { 0 } else { self.node(left).size }
            + if right == NIL { 0 } else { self.node(right).size };
        self.nodes.push(Node { value, left, right, size, priority });
        (self.nodes.len() - 1) as u32
    }

    /// Insert `x` into version `v`, returning the new version. The old
    /// version is untouched; at most O(log size) nodes are allocated.
    pub fn insert(&mut self, v: VersionHandle, x: Label) -> VersionHandle {
        let priority = splitmix64(((x.0 as u64) << 32) ^ self.insert_count ^ 0x5A5A_0FF1_CE00_0001);
        self.insert_count += 1;
        let root = self.insert_at(v.root, x.0, priority);
        VersionHandle { root, size: v.size + 1 }
    }

    fn insert_at(&mut self, at: u32, value: u32, priority: u64) -> u32 {
        if at == NIL {
            return self.alloc(value, NIL, NIL, priority);
        }
        let n = *self.node(at);
        if value < n.value {
            let new_left = self.insert_at(n.left, value, priority);
            let copied = self.alloc(n.value, new_left, n.right, n.priority);
            if self.node(new_left).priority > n.priority {
                self.rotate_right(copied)
            } else {
                copied
            }
        } else {
            let new_right = self.insert_at(n.right, value, priority);
            let copied = self.alloc(n.value, n.left, new_right, n.priority);
            if self.node(new_right).priority > n.priority {
                self.rotate_left(copied)
            } else {
                copied
            }
        }
    }

    // Rotations only touch nodes allocated during the current insert, so
    // in-place fixups never change a published version.
    fn rotate_right(&mut self, y: u32) -> u32 {
        let x = self.nodes[y as usize].left;
        let xr = self.nodes[x as usize].right;
        self.nodes[y as usize].left = xr;
        self.refresh_size(y);
        self.nodes[x as usize].right = y;
        self.refresh_size(x);
        x
    }

    fn rotate_left(&mut self, y: u32) -> u32 {
        let x = self.nodes[y as usize].right;
        let xl = self.nodes[x as usize].left;
        self.nodes[y as usize].right = xl;
        self.refresh_size(y);
        self.nodes[x as usize].left = y;
        self.refresh_size(x);
        x
    }

    fn refresh_size(&mut self, r: u32) {
        let n = self.nodes[r as usize];
        let size = 1
            + if n.left == NIL { 0 } else { self.node(n.left).size }
            + if n.right == NIL { 0 } else { self.node(n.right).size };
        self.nodes[r as usize].size = size;
    }

    /// Element at 1-indexed sorted position `r` of version `v`.
    pub fn select(&self, v: VersionHandle, r: u32) -> Result<Label> {
        self.select_probed(v, r, &mut Probe::default())
    }

    pub fn select_probed(&self, v: VersionHandle, r: u32, probe: &mut Probe) -> Result<Label> {
        if r == 0 || r > v.size {
            return Err(Error::RankOutOfRange { rank: r, size: v.size });
        }
        let mut at = v.root;
        let mut r = r;
        loop {
            probe.tick();
            let n = self.node(at);
            let left_size = if n.left == NIL { 0 } else { self.node(n.left).size };
            if r <= left_size {
                at = n.left;
            } else if r == left_size + 1 {
                return Ok(Label(n.value));
            } else {
                r -= left_size + 1;
                at = n.right;
            }
        }
    }

    /// Rank selection within an arbitrary subtree cursor; `r` must be valid
    /// for that subtree.
    pub(crate) fn select_at(&self, node: u32, r: u32, probe: &mut Probe) -> Label {
        debug_assert!(r >= 1 && r <= self.node_size(node));
        let mut at = node;
        let mut r = r;
        loop {
            probe.tick();
            let n = self.node(at);
            let left_size = self.node_size(n.left);
            if r <= left_size {
                at = n.left;
            } else if r == left_size + 1 {
                return Label(n.value);
            } else {
                r -= left_size + 1;
                at = n.right;
            }
        }
    }

    /// Number of stored elements strictly less than `x` in version `v`.
    pub fn rank_of(&self, v: VersionHandle, x: Label) -> u32 {
        self.rank_of_probed(v, x, &mut Probe::default())
    }

    pub fn rank_of_probed(&self, v: VersionHandle, x: Label, probe: &mut Probe) -> u32 {
        let mut at = v.root;
        let mut below = 0;
        while at != NIL {
            probe.tick();
            let n = self.node(at);
            if x.0 <= n.value {
                at = n.left;
            } else {
                below += 1 + if n.left == NIL { 0 } else { self.node(n.left).size };
                at = n.right;
            }
        }
        below
    }

    /// In-order element dump of a version (test and debugging aid).
    pub fn in_order(&self, v: VersionHandle) -> Vec<Label> {
        let mut out = Vec::with_capacity(v.size as usize);
        self.in_order_at(v.root, &mut out);
        out
    }

    fn in_order_at(&self, at: u32, out: &mut Vec<Label>) {
        if at == NIL {
            return;
        }
        let n = self.node(at);
        self.in_order_at(n.left, out);
        out.push(Label(n.value));
        self.in_order_at(n.right, out);
    }

    /// Height of a version (empty = 0); used by balance tests.
    pub fn height(&self, v: VersionHandle) -> u32 {
        self.height_at(v.root)
    }

    fn height_at(&self, at: u32) -> u32 {
        if at == NIL {
            return 0;
        }
        let n = self.node(at);
        1 + self.height_at(n.left).max(self.height_at(n.right))
    }

    // Cursor-style accessors used by multi-source selection.
    #[inline]
    pub(crate) fn node_value(&self, r: u32) -> u32 {
        self.node(r).value
    }

    #[inline]
    pub(crate) fn node_left(&self, r: u32) -> u32 {
        self.node(r).left
    }

    #[inline]
    pub(crate) fn node_right(&self, r: u32) -> u32 {
        self.node(r).right
    }

    #[inline]
    pub(crate) fn node_size(&self, r: u32) -> u32 {
        if r == NIL {
            0
        } else {
            self.node(r).size
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn insert_all(store: &mut PersistentTreeStore, values: &[u32]) -> Vec<VersionHandle> {
        let mut handles = vec![VersionHandle::EMPTY];
        for &v in values {
            let prev = *handles.last().unwrap();
            handles.push(store.insert(prev, Label(v)));
        }
        handles
    }

    #[test]
    fn in_order_stays_sorted() {
        let mut store = PersistentTreeStore::new();
        let handles = insert_all(&mut store, &[3, 1, 4]);
        assert_eq!(store.in_order(handles[3]), [1, 3, 4].map(Label));
        // persistence: the size-2 intermediate version is untouched
        assert_eq!(store.in_order(handles[2]), [1, 3].map(Label));
        assert_eq!(store.in_order(handles[0]), Vec::<Label>::new());
    }

    #[test]
    fn select_and_rank() {
        let mut store = PersistentTreeStore::new();
        let handles = insert_all(&mut store, &[3, 1, 4]);
        let v = handles[3];
        assert_eq!(store.select(v, 2).unwrap(), Label(3));
        assert_eq!(store.select(v, 1).unwrap(), Label(1));
        assert!(store.select(VersionHandle::EMPTY, 1).is_err());
        assert_eq!(store.rank_of(v, Label(3)), 1);
        assert_eq!(store.rank_of(v, Label(0)), 0);
        assert_eq!(store.rank_of(v, Label(9)), 3);
    }

    #[test]
    fn matches_oracle_with_duplicates() {
        let mut state = 0xFEED_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let n = (next() % 30 + 1) as usize;
            let values: Vec<u32> = (0..n).map(|_| (next() % 6) as u32).collect();
            let mut store = PersistentTreeStore::new();
            let handles = insert_all(&mut store, &values);
            for (k, h) in handles.iter().enumerate() {
                let prefix: Vec<Label> = values[..k].iter().map(|&v| Label(v)).collect();
                for r in 1..=k as u32 {
                    assert_eq!(
                        store.select(*h, r).unwrap(),
                        oracle::select(&prefix, r).unwrap()
                    );
                }
                for x in 0..6 {
                    let expect = prefix.iter().filter(|l| l.0 < x).count() as u32;
                    assert_eq!(store.rank_of(*h, Label(x)), expect);
                }
            }
        }
    }

    #[test]
    fn persistence_under_interleaved_queries() {
        let mut store = PersistentTreeStore::new();
        let values: Vec<u32> = (0..64).collect();
        let handles = insert_all(&mut store, &values);
        // every previously returned handle answers identically after later inserts
        let before: Vec<Vec<Label>> = handles.iter().map(|h| store.in_order(*h)).collect();
        let mut h = *handles.last().unwrap();
        for v in 64..96 {
            h = store.insert(h, Label(v));
        }
        for (h, golden) in handles.iter().zip(&before) {
            assert_eq!(&store.in_order(*h), golden);
        }
    }

    #[test]
    fn sorted_inserts_stay_balanced() {
        let mut store = PersistentTreeStore::new();
        let mut h = VersionHandle::EMPTY;
        for v in 1..=64u32 {
            h = store.insert(h, Label(v));
            let bound = (BALANCE_LOG_FACTOR * ((h.len() as f64) + 2.0).log2()).ceil() as u32;
            assert!(
                store.height(h) <= bound,
                "height {} over bound {} at size {}",
                store.height(h),
                bound,
                h.len()
            );
        }
        assert_eq!(store.in_order(h).len(), 64);
    }

    #[test]
    fn per_insert_allocation_bound() {
        let mut store = PersistentTreeStore::new();
        let mut h = VersionHandle::EMPTY;
        let mut state = 0xA110C_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for step in 0..2000u32 {
            let before = store.nodes_allocated();
            let value = if step % 2 == 0 { step } else { (next() % 100) as u32 };
            let size = h.len();
            h = store.insert(h, Label(value));
            let allocated = store.nodes_allocated() - before;
            assert!(
                allocated <= alloc_budget(size),
                "insert at size {size} allocated {allocated} nodes"
            );
        }
    }
}
