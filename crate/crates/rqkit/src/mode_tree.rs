//! Range mode path queries on trees.
//!
//! The input tree is binarized, split into O(b) connected components by
//! repeated edge separators, and preprocessed for LCA queries. Path counting
//! for a label `x` runs through the contracted label tree `T_x` (the
//! x-labelled nodes, their pairwise LCAs and the root) with per-member
//! root-path counts; arbitrary nodes map onto `T_x` by binary search over an
//! interval labelling. A mode query then counts every distinct label of the
//! two endpoint components plus the precomputed middle mode of the component
//! pair and keeps the best.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::lca::LcaIndex;
use crate::separator::{binarize, partition_subtrees, Binarized, Partition};
use crate::{Error, IndexArtifact, Label, LabeledTree, ModeAnswer, Probe, Result};

/// In-order numbering of a binary tree plus the induced subtree intervals.
/// Numbers are `1..=n`; a node's interval covers exactly its subtree's
/// numbers, so intervals are laminar and ancestry is interval containment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntervalLabels {
    pub inorder: Vec<u32>,
    pub interval: Vec<(u32, u32)>,
}

impl IntervalLabels {
    pub fn new(tree: &LabeledTree) -> Self {
        assert!(tree.is_binary());
        let n = tree.len();
        let mut inorder = vec![0u32; n];
        let mut counter = 0u32;
        // a single child is treated as a left child
        let mut stack = vec![(tree.root(), false)];
        while let Some((u, expanded)) = stack.pop() {
            let kids = tree.children(u);
            if !expanded {
                stack.push((u, true));
                if let Some(&first) = kids.first() {
                    stack.push((first, false));
                }
            } else {
                counter += 1;
                inorder[u as usize] = counter;
                if kids.len() == 2 {
                    stack.push((kids[1], false));
                }
            }
        }
        let mut interval: Vec<(u32, u32)> =
            inorder.iter().map(|&g| (g, g)).collect();
        for &u in tree.preorder().iter().rev() {
            if let Some(p) = tree.parent(u) {
                let (lo, hi) = interval[u as usize];
                let e = &mut interval[p as usize];
                e.0 = e.0.min(lo);
                e.1 = e.1.max(hi);
            }
        }
        IntervalLabels { inorder, interval }
    }
}

/// Contraction of the minimal root-containing subtree spanning all nodes of
/// one label: the labelled nodes, their pairwise LCAs and the root.
///
/// `prefix[m]` counts the labelled nodes on the root-to-member path. The
/// sorted elementary intervals over the members' interval endpoints give,
/// for any in-order number, the member with the smallest containing
/// interval — the nearest member ancestor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabelTree {
    members: Vec<u32>,
    prefix: Vec<u32>,
    breakpoints: Vec<u32>,
    gap_member: Vec<u32>,
}

impl LabelTree {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    /// Member covering in-order position `g` (nearest member ancestor of the
    /// node numbered `g`), with its root-path count.
    fn covering(&self, g: u32, probe: &mut Probe) -> (u32, u32) {
        probe.tick();
        let gap = self.breakpoints.partition_point(|&b| b <= g) - 1;
        let m = self.gap_member[gap] as usize;
        (self.members[m], self.prefix[m])
    }
}

/// Range mode index for node-to-node path queries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeModeIndex {
    original_len: u32,
    bin: Binarized,
    lca: LcaIndex,
    intervals: IntervalLabels,
    part: Partition,
    depths: Vec<u32>,
    comp_labels: Vec<Vec<Label>>,
    /// per unordered component pair: best real label of the fixed
    /// inter-component path segment, if any
    middle: Vec<Option<Label>>,
    label_trees: Vec<Option<LabelTree>>,
    words: u64,
}

impl TreeModeIndex {
    /// Positions (lists) or nodes (trees) this index answers for.
    pub fn len(&self) -> usize {
        self.original_len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Build with `b = ceil(n^(1-eps))` components, `eps` in (0, 1/2].
    pub fn new(tree: &LabeledTree, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(Error::BadEpsilon(epsilon));
        }
        let b = (tree.len() as f64).powf(1.0 - epsilon).ceil() as usize;
        Self::with_component_target(tree, b)
    }

    /// Build with an explicit component target `1..=n`.
    pub fn with_component_target(tree: &LabeledTree, b: usize) -> Result<Self> {
        let original_len = tree.len() as u32;
        let bin = binarize(tree);
        let nb = bin.tree.len();
        let lca = LcaIndex::new(&bin.tree);
        let intervals = IntervalLabels::new(&bin.tree);
        let part = partition_subtrees(&bin.tree, b.clamp(1, nb));
        let depths = bin.tree.depths();

        // distinct real labels per component
        let mut comp_labels: Vec<Vec<Label>> = vec![Vec::new(); part.count];
        for v in 0..nb as u32 {
            let l = bin.tree.label(v);
            if !bin.is_reserved(l) {
                comp_labels[part.comp[v as usize] as usize].push(l);
            }
        }
        for labels in &mut comp_labels {
            labels.sort_unstable();
            labels.dedup();
        }

        // one representative node per component for bridge walks
        let mut rep = vec![u32::MAX; part.count];
        for v in 0..nb as u32 {
            let c = part.comp[v as usize] as usize;
            if rep[c] == u32::MAX {
                rep[c] = v;
            }
        }

        // the inter-component segment of any P-to-Q path is fixed; walk one
        // representative pair and keep its best real label
        let count = part.count;
        let mut middle = vec![None; count * (count.saturating_sub(1)) / 2];
        let mut freq: HashMap<Label, u32> = HashMap::new();
        for p in 0..count {
            for q in p + 1..count {
                let walk = crate::oracle::path(&bin.tree, rep[p], rep[q])
                    .expect("representatives are valid nodes");
                freq.clear();
                for v in walk {
                    let c = part.comp[v as usize] as usize;
                    if c == p || c == q {
                        continue;
                    }
                    let l = bin.tree.label(v);
                    if !bin.is_reserved(l) {
                        *freq.entry(l).or_insert(0) += 1;
                    }
                }
                let best = freq
                    .iter()
                    .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                    .map(|(&l, _)| l);
                middle[tri_id(count, p, q)] = best;
            }
        }

        // label trees for every real label present in the tree
        let mut label_trees: Vec<Option<LabelTree>> =
            (0..bin.reserved_floor).map(|_| None).collect();
        let mut by_label: Vec<Vec<u32>> = vec![Vec::new(); bin.reserved_floor as usize];
        let mut order: Vec<u32> = (0..nb as u32).collect();
        order.sort_unstable_by_key(|&v| intervals.inorder[v as usize]);
        for v in order {
            let l = bin.tree.label(v);
            if !bin.is_reserved(l) {
                by_label[l.0 as usize].push(v);
            }
        }
        // member sets + elementary intervals; prefix counts come from one
        // shared traversal afterwards
        let mut member_records: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nb]; // node -> (label, member idx)
        for (x, nodes) in by_label.iter().enumerate() {
            if nodes.is_empty() {
                continue;
            }
            let mut members = nodes.clone();
            for pair in nodes.windows(2) {
                members.push(lca.lca(pair[0], pair[1]));
            }
            members.push(bin.tree.root());
            members.sort_unstable_by_key(|&v| intervals.inorder[v as usize]);
            members.dedup();

            // sweep interval endpoints; the stack top is the innermost open
            // member, i.e. the nearest member ancestor of every position in
            // the current gap
            let mut events: Vec<u32> = Vec::with_capacity(2 * members.len());
            for &m in &members {
                let (lo, hi) = intervals.interval[m as usize];
                events.push(lo);
                events.push(hi + 1);
            }
            events.sort_unstable();
            events.dedup();
            let mut by_lo = members.clone();
            by_lo.sort_unstable_by_key(|&m| {
                let (lo, hi) = intervals.interval[m as usize];
                (lo, std::cmp::Reverse(hi))
            });
            let member_idx: HashMap<u32, u32> = members
                .iter()
                .enumerate()
                .map(|(i, &m)| (m, i as u32))
                .collect();
            let mut stack: Vec<u32> = Vec::new();
            let mut next_open = 0usize;
            let mut breakpoints = Vec::new();
            let mut gap_member = Vec::new();
            for w in events.windows(2) {
                let at = w[0];
                while let Some(&top) = stack.last() {
                    if intervals.interval[member_idx_rev(&members, top) as usize].1 < at {
                        stack.pop();
                    } else {
                        break;
                    }
                }
                while next_open < by_lo.len()
                    && intervals.interval[by_lo[next_open] as usize].0 == at
                {
                    stack.push(member_idx[&by_lo[next_open]]);
                    next_open += 1;
                }
                breakpoints.push(at);
                gap_member.push(*stack.last().expect("root member covers all positions"));
            }
            for (mi, &m) in members.iter().enumerate() {
                member_records[m as usize].push((x as u32, mi as u32));
            }
            label_trees[x] = Some(LabelTree {
                members,
                prefix: Vec::new(),
                breakpoints,
                gap_member,
            });
        }

        // shared traversal fills every member's root-path count
        for lt in label_trees.iter_mut().flatten() {
            lt.prefix = vec![0; lt.members.len()];
        }
        let mut cnt = vec![0u32; bin.reserved_floor as usize];
        let mut stack = vec![(bin.tree.root(), false)];
        while let Some((u, leaving)) = stack.pop() {
            let l = bin.tree.label(u);
            if leaving {
                if !bin.is_reserved(l) {
                    cnt[l.0 as usize] -= 1;
                }
                continue;
            }
            if !bin.is_reserved(l) {
                cnt[l.0 as usize] += 1;
            }
            for &(x, mi) in &member_records[u as usize] {
                label_trees[x as usize].as_mut().unwrap().prefix[mi as usize] = cnt[x as usize];
            }
            stack.push((u, true));
            for &c in bin.tree.children(u) {
                stack.push((c, false));
            }
        }

        let words = nb as u64 * 4
            + comp_labels.iter().map(|c| c.len() as u64).sum::<u64>()
            + middle.len() as u64
            + label_trees
                .iter()
                .flatten()
                .map(|t| (t.members.len() * 2 + t.breakpoints.len() * 2) as u64)
                .sum::<u64>()
            + lca.tour_len() as u64;
        Ok(TreeModeIndex {
            original_len,
            bin,
            lca,
            intervals,
            part,
            depths,
            comp_labels,
            middle,
            label_trees,
            words,
        })
    }

    pub fn component_count(&self) -> usize {
        self.part.count
    }

    /// Total members across all label trees; linear in the tree size.
    pub fn label_tree_total(&self) -> usize {
        self.label_trees.iter().flatten().map(|t| t.members.len()).sum()
    }

    pub fn label_tree(&self, x: Label) -> Option<&LabelTree> {
        self.label_trees.get(x.0 as usize).and_then(|t| t.as_ref())
    }

    fn check_node(&self, u: u32) -> Result<u32> {
        if u >= self.original_len {
            return Err(Error::UnknownNode(u));
        }
        Ok(self.bin.node_map[u as usize])
    }

    /// Nearest member of `x`'s label tree on the path from original node `v`
    /// to the root; the root is always a member.
    pub fn map_to_label_tree(&self, x: Label, v: u32) -> Result<u32> {
        let vb = self.check_node(v)?;
        let lt = self.label_tree(x).ok_or(Error::UnknownLabel(x))?;
        let (m, _) = lt.covering(self.intervals.inorder[vb as usize], &mut Probe::default());
        Ok(m)
    }

    /// Occurrences of `x` on the path between original nodes `u` and `v`.
    pub fn range_count(&self, x: Label, u: u32, v: u32) -> Result<u32> {
        self.range_count_probed(x, u, v, &mut Probe::default())
    }

    pub fn range_count_probed(
        &self,
        x: Label,
        u: u32,
        v: u32,
        probe: &mut Probe,
    ) -> Result<u32> {
        let ub = self.check_node(u)?;
        let vb = self.check_node(v)?;
        probe.tick();
        let w = self.lca.lca(ub, vb);
        let ghost = self.bin.missing_apex(w).map(|z| self.bin.tree.label(self.bin.node_map[z as usize]));
        Ok(self.count_on_binarized(x, ub, vb, w, ghost, probe))
    }

    fn count_on_binarized(
        &self,
        x: Label,
        ub: u32,
        vb: u32,
        w: u32,
        ghost: Option<Label>,
        probe: &mut Probe,
    ) -> u32 {
        let lt = match self.label_tree(x) {
            Some(lt) => lt,
            None => return ghost.map_or(0, |g| (g == x) as u32),
        };
        let at = |node: u32, probe: &mut Probe| {
            lt.covering(self.intervals.inorder[node as usize], probe).1
        };
        let mut count = at(ub, probe) + at(vb, probe) - at(w, probe);
        if let Some(pw) = self.bin.tree.parent(w) {
            count -= at(pw, probe);
        }
        if ghost == Some(x) {
            count += 1;
        }
        count
    }

    /// Mode of the labels on the path between original nodes `u` and `v`.
    pub fn query(&self, u: u32, v: u32) -> Result<ModeAnswer> {
        self.query_probed(u, v, &mut Probe::default())
    }

    pub fn query_probed(&self, u: u32, v: u32, probe: &mut Probe) -> Result<ModeAnswer> {
        let ub = self.check_node(u)?;
        let vb = self.check_node(v)?;
        let p = self.part.comp[ub as usize];
        let q = self.part.comp[vb as usize];
        if p == q {
            return Ok(self.walk_same_component(ub, vb, probe));
        }
        probe.tick();
        let w = self.lca.lca(ub, vb);
        let ghost = self
            .bin
            .missing_apex(w)
            .map(|z| self.bin.tree.label(self.bin.node_map[z as usize]));
        let (p, q) = (p.min(q), p.max(q));
        let mid = self.middle[tri_id(self.part.count, p as usize, q as usize)];
        let mut best = ModeAnswer { value: self.bin.tree.label(ub), frequency: 0 };
        {
            let mut consider = |x: Label, probe: &mut Probe| {
                probe.candidate();
                let f = self.count_on_binarized(x, ub, vb, w, ghost, probe);
                if f > best.frequency {
                    best = ModeAnswer { value: x, frequency: f };
                }
            };
            for &x in &self.comp_labels[p as usize] {
                consider(x, probe);
            }
            for &x in &self.comp_labels[q as usize] {
                consider(x, probe);
            }
            if let Some(m) = mid {
                consider(m, probe);
            }
            if let Some(g) = ghost {
                consider(g, probe);
            }
        }
        Ok(best)
    }

    /// Ranges inside one component walk the explicit path, which is at most
    /// the component size.
    fn walk_same_component(&self, ub: u32, vb: u32, probe: &mut Probe) -> ModeAnswer {
        let (mut a, mut b) = (ub, vb);
        let mut labels: Vec<Label> = Vec::new();
        let push = |node: u32, labels: &mut Vec<Label>, probe: &mut Probe| {
            probe.tick();
            let l = self.bin.tree.label(node);
            if !self.bin.is_reserved(l) {
                labels.push(l);
            }
        };
        while a != b {
            if self.depths[a as usize] >= self.depths[b as usize] {
                push(a, &mut labels, probe);
                a = self.bin.tree.parent(a).expect("paths meet at the root");
            } else {
                push(b, &mut labels, probe);
                b = self.bin.tree.parent(b).expect("paths meet at the root");
            }
        }
        // a == b is the apex: synthetic means the expanded node's label is
        // part of the true path, real means it is the label itself
        match self.bin.missing_apex(a) {
            Some(z) => labels.push(self.bin.tree.label(self.bin.node_map[z as usize])),
            None => push(a, &mut labels, probe),
        }
        crate::oracle::mode(&labels).expect("paths between real nodes carry a real label")
    }
}

#[inline]
fn tri_id(count: usize, p: usize, q: usize) -> usize {
    debug_assert!(p < q && q < count);
    p * (2 * count - p - 1) / 2 + (q - p - 1)
}

fn member_idx_rev(members: &[u32], idx: u32) -> u32 {
    members[idx as usize]
}

impl IndexArtifact for TreeModeIndex {
    fn words(&self) -> u64 {
        self.words
    }
    fn kind(&self) -> &'static str {
        "mode-tree"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::tree::testutil::t1;

    fn random_tree(n: usize, seed: u64, alphabet: u64) -> LabeledTree {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut parents: Vec<Option<u32>> = vec![None];
        for v in 1..n {
            parents.push(Some((next() as usize % v) as u32));
        }
        let labels = (0..n).map(|_| Label((next() % alphabet) as u32)).collect();
        LabeledTree::from_parents(&parents, labels).unwrap()
    }

    #[test]
    fn interval_labelling_is_laminar() {
        for seed in [3u64, 19, 101] {
            let t = crate::separator::binarize(&random_tree(33, seed, 4)).tree;
            let il = IntervalLabels::new(&t);
            let mut nums = il.inorder.clone();
            nums.sort_unstable();
            assert_eq!(nums, (1..=t.len() as u32).collect::<Vec<_>>());
            for v in 0..t.len() as u32 {
                let (lo, hi) = il.interval[v as usize];
                assert!((lo..=hi).contains(&il.inorder[v as usize]));
                for u in 0..t.len() as u32 {
                    let (lo2, hi2) = il.interval[u as usize];
                    let nested = (lo <= lo2 && hi2 <= hi) || (lo2 <= lo && hi <= hi2);
                    let disjoint = hi < lo2 || hi2 < lo;
                    assert!(nested || disjoint);
                }
            }
        }
    }

    #[test]
    fn t1_range_count_examples() {
        let idx = TreeModeIndex::with_component_target(&t1(), 2).unwrap();
        // path 4..7 of the 1-based example: nodes 3 and 6 here
        assert_eq!(idx.range_count(Label(5), 3, 6).unwrap(), 3);
        assert_eq!(idx.range_count(Label(1), 3, 4).unwrap(), 2);
        for u in 0..7u32 {
            for x in 0..6u32 {
                let expect = (t1().label(u) == Label(x)) as u32;
                assert_eq!(idx.range_count(Label(x), u, u).unwrap(), expect);
            }
        }
        assert!(matches!(idx.range_count(Label(5), 9, 0), Err(Error::UnknownNode(9))));
    }

    #[test]
    fn t1_mode_examples() {
        let idx = TreeModeIndex::with_component_target(&t1(), 2).unwrap();
        let a = idx.query(3, 6).unwrap();
        assert_eq!(a, ModeAnswer { value: Label(5), frequency: 3 });
        assert_eq!(idx.query(3, 3).unwrap(), ModeAnswer { value: Label(5), frequency: 1 });
        assert_eq!(idx.query(3, 4).unwrap().frequency, 2);
    }

    #[test]
    fn t1_label_tree_mapping() {
        let idx = TreeModeIndex::with_component_target(&t1(), 2).unwrap();
        assert_eq!(idx.map_to_label_tree(Label(5), 6).unwrap(), 5);
        assert_eq!(idx.map_to_label_tree(Label(5), 3).unwrap(), 3);
        // node 4's chain to the root holds no label-5 member below the root
        assert_eq!(idx.map_to_label_tree(Label(5), 4).unwrap(), 0);
        assert!(matches!(
            idx.map_to_label_tree(Label(40), 3),
            Err(Error::UnknownLabel(Label(40)))
        ));
    }

    #[test]
    fn mapping_matches_parent_chain_oracle() {
        for seed in [7u64, 23, 88] {
            let t = random_tree(40, seed, 5);
            let idx = TreeModeIndex::with_component_target(&t, 4).unwrap();
            let bin = &idx.bin;
            for x in 0..5u32 {
                let lt = match idx.label_tree(Label(x)) {
                    Some(lt) => lt,
                    None => continue,
                };
                for v in 0..t.len() as u32 {
                    let got = idx.map_to_label_tree(Label(x), v).unwrap();
                    // oracle: walk the binarized parent chain to the first member
                    let mut cur = bin.node_map[v as usize];
                    let expect = loop {
                        if lt.members().contains(&cur) {
                            break cur;
                        }
                        cur = bin.tree.parent(cur).expect("root is a member");
                    };
                    assert_eq!(got, expect, "x={x} v={v} seed={seed}");
                }
            }
        }
    }

    #[test]
    fn counts_match_oracle_exhaustively() {
        for (n, seed) in [(1usize, 1u64), (2, 5), (9, 9), (17, 11), (32, 13)] {
            let t = random_tree(n, seed, 4);
            let idx = TreeModeIndex::with_component_target(&t, 3.min(n)).unwrap();
            for u in 0..n as u32 {
                for v in 0..n as u32 {
                    let path = oracle::path_labels(&t, u, v).unwrap();
                    for x in 0..5u32 {
                        assert_eq!(
                            idx.range_count(Label(x), u, v).unwrap(),
                            oracle::count(&path, Label(x)),
                            "x={x} u={u} v={v} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn modes_match_oracle_exhaustively() {
        for (n, seed) in [(1usize, 2u64), (2, 3), (5, 4), (13, 6), (24, 8), (40, 12)] {
            for alphabet in [2u64, 6] {
                let t = random_tree(n, seed, alphabet);
                for b in [1usize, 2, 5] {
                    let idx = TreeModeIndex::with_component_target(&t, b.min(n)).unwrap();
                    for u in 0..n as u32 {
                        for v in 0..n as u32 {
                            let path = oracle::path_labels(&t, u, v).unwrap();
                            let want = oracle::mode(&path).unwrap();
                            let got = idx.query(u, v).unwrap();
                            assert_eq!(got.frequency, want.frequency, "u={u} v={v} n={n} b={b}");
                            assert_eq!(
                                oracle::count(&path, got.value),
                                got.frequency,
                                "returned value must hit the max: u={u} v={v}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn star_tree_reserved_labels_stay_out_of_candidates() {
        let parents: Vec<Option<u32>> =
            (0..6).map(|v| if v == 0 { None } else { Some(0) }).collect();
        let labels = (0..6).map(|v| Label(v as u32 % 2)).collect();
        let t = LabeledTree::from_parents(&parents, labels).unwrap();
        let idx = TreeModeIndex::with_component_target(&t, 2).unwrap();
        for labels in &idx.comp_labels {
            for l in labels {
                assert!(!idx.bin.is_reserved(*l));
            }
        }
        for m in idx.middle.iter().flatten() {
            assert!(!idx.bin.is_reserved(*m));
        }
        for u in 0..6u32 {
            for v in 0..6u32 {
                let path = oracle::path_labels(&t, u, v).unwrap();
                let want = oracle::mode(&path).unwrap();
                assert_eq!(idx.query(u, v).unwrap().frequency, want.frequency);
            }
        }
    }

    #[test]
    fn label_tree_size_is_linear() {
        for seed in [1u64, 2, 3] {
            let t = random_tree(64, seed, 7);
            let idx = TreeModeIndex::with_component_target(&t, 8).unwrap();
            assert!(idx.label_tree_total() <= 3 * idx.bin.tree.len());
            for x in 0..7u32 {
                if let Some(lt) = idx.label_tree(Label(x)) {
                    let occ = idx
                        .bin
                        .tree
                        .labels()
                        .iter()
                        .filter(|&&l| l == Label(x))
                        .count();
                    assert!(lt.len() <= 2 * occ + 1);
                }
            }
        }
    }
}
