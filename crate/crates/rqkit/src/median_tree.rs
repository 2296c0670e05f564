//! Range median path queries on trees via recursive centroid decomposition.
//!
//! Every level picks the centroid vertex of each current component and gives
//! each component node two persistent search-tree versions over the labels
//! of its path to the centroid: an inclusive one (centroid label counted)
//! and an exclusive one. The versions grow outward from the centroid by
//! path copying, so one level costs O(n log n) nodes and old versions stay
//! intact. For a query, the deepest level keeping both endpoints in one
//! component has its centroid on their path, and `inclusive(u)` disjointly
//! united with `exclusive(v)` is exactly the path multiset; the answer is a
//! rank selection over the two versions. Components halve per level, so
//! there are O(log n) levels.

use serde::{Deserialize, Serialize};

use crate::pbst::{PersistentTreeStore, VersionHandle};
use crate::select::select_three_trees;
use crate::{median_rank, Error, IndexArtifact, LabeledTree, MedianAnswer, Probe, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
struct LevelData {
    /// component id per node at this depth; `u32::MAX` for nodes already
    /// retired as shallower centroids
    comp: Vec<u32>,
    incl: Vec<VersionHandle>,
    excl: Vec<VersionHandle>,
}

/// Range median index for node-to-node path queries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeMedianIndex {
    tree: LabeledTree,
    store: PersistentTreeStore,
    levels: Vec<LevelData>,
    words: u64,
}

impl TreeMedianIndex {
    /// Positions (lists) or nodes (trees) this index answers for.
    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn new(tree: &LabeledTree) -> Self {
        let n = tree.len();
        let mut store = PersistentTreeStore::new();
        let mut levels: Vec<LevelData> = Vec::new();
        let mut comp_counter: Vec<u32> = Vec::new();

        let mut member = vec![false; n];
        let mut work: Vec<(Vec<u32>, usize)> = vec![((0..n as u32).collect(), 0)];
        while let Some((nodes, depth)) = work.pop() {
            if levels.len() <= depth {
                levels.push(LevelData {
                    comp: vec![u32::MAX; n],
                    incl: vec![VersionHandle::EMPTY; n],
                    excl: vec![VersionHandle::EMPTY; n],
                });
                comp_counter.push(0);
            }
            let comp_id = comp_counter[depth];
            comp_counter[depth] += 1;
            for &v in &nodes {
                member[v as usize] = true;
                levels[depth].comp[v as usize] = comp_id;
            }

            let centroid = find_centroid(tree, &nodes, &member);

            // grow both version families outward from the centroid; member
            // doubles as the not-yet-visited marker
            let level = &mut levels[depth];
            level.incl[centroid as usize] =
                store.insert(VersionHandle::EMPTY, tree.label(centroid));
            level.excl[centroid as usize] = VersionHandle::EMPTY;
            member[centroid as usize] = false;
            let mut visited = 1usize;
            let mut queue = std::collections::VecDeque::from([centroid]);
            while let Some(u) = queue.pop_front() {
                for w in neighbors(tree, u) {
                    if !member[w as usize] {
                        continue;
                    }
                    member[w as usize] = false;
                    visited += 1;
                    level.incl[w as usize] =
                        store.insert(level.incl[u as usize], tree.label(w));
                    level.excl[w as usize] =
                        store.insert(level.excl[u as usize], tree.label(w));
                    queue.push_back(w);
                }
            }
            debug_assert_eq!(visited, nodes.len());

            // child components: flood from each centroid neighbor
            for &v in &nodes {
                member[v as usize] = v != centroid;
            }
            for w in neighbors(tree, centroid) {
                if !member[w as usize] {
                    continue;
                }
                let mut part = Vec::new();
                let mut queue = vec![w];
                member[w as usize] = false;
                while let Some(u) = queue.pop() {
                    part.push(u);
                    for x in neighbors(tree, u) {
                        if member[x as usize] {
                            member[x as usize] = false;
                            queue.push(x);
                        }
                    }
                }
                work.push((part, depth + 1));
            }
        }

        let words = store.nodes_allocated() * 5 + (levels.len() * n) as u64 * 5;
        TreeMedianIndex { tree: tree.clone(), store, levels, words }
    }

    /// Number of decomposition levels; at most `log_{3/2} n + 2`.
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn persistent_nodes(&self) -> u64 {
        self.store.nodes_allocated()
    }

    /// Component id of `v` at `depth`, if `v` is still alive there.
    pub fn component_at(&self, depth: u32, v: u32) -> Option<u32> {
        let c = self.levels[depth as usize].comp[v as usize];
        (c != u32::MAX).then_some(c)
    }

    /// Deepest level at which `u` and `v` are both alive in one component.
    fn separating_level(&self, u: u32, v: u32, probe: &mut Probe) -> usize {
        let mut level = 0usize;
        while level + 1 < self.levels.len() {
            probe.tick();
            let next = &self.levels[level + 1];
            let cu = next.comp[u as usize];
            let cv = next.comp[v as usize];
            if cu == u32::MAX || cv == u32::MAX || cu != cv {
                break;
            }
            level += 1;
        }
        level
    }

    pub fn query(&self, u: u32, v: u32) -> Result<MedianAnswer> {
        self.query_probed(u, v, &mut Probe::default())
    }

    pub fn query_probed(&self, u: u32, v: u32, probe: &mut Probe) -> Result<MedianAnswer> {
        if !self.tree.contains(u) {
            return Err(Error::UnknownNode(u));
        }
        if !self.tree.contains(v) {
            return Err(Error::UnknownNode(v));
        }
        if u == v {
            return Ok(MedianAnswer { value: self.tree.label(u), rank: 1 });
        }
        let level = self.separating_level(u, v, probe);
        let data = &self.levels[level];
        debug_assert_eq!(data.comp[u as usize], data.comp[v as usize]);
        let incl = data.incl[u as usize];
        let excl = data.excl[v as usize];
        let m = (incl.len() + excl.len()) as usize;
        let rank = median_rank(m);
        let value = select_three_trees(
            (&self.store, incl),
            (&self.store, excl),
            (&self.store, VersionHandle::EMPTY),
            rank,
            probe,
        )?;
        Ok(MedianAnswer { value, rank })
    }

    #[cfg(test)]
    fn level_handles(&self, depth: usize, v: u32) -> (VersionHandle, VersionHandle) {
        (self.levels[depth].incl[v as usize], self.levels[depth].excl[v as usize])
    }

    #[cfg(test)]
    fn dump(&self, h: VersionHandle) -> Vec<crate::Label> {
        self.store.in_order(h)
    }
}

fn neighbors(tree: &LabeledTree, u: u32) -> impl Iterator<Item = u32> + '_ {
    tree.parent(u).into_iter().chain(tree.children(u).iter().copied())
}

/// Vertex whose removal leaves parts of at most half the component size.
fn find_centroid(tree: &LabeledTree, nodes: &[u32], member: &[bool]) -> u32 {
    if nodes.len() == 1 {
        return nodes[0];
    }
    let root = nodes[0];
    let mut order: Vec<(u32, u32)> = Vec::with_capacity(nodes.len()); // (node, walk parent index)
    let mut stack: Vec<(u32, u32)> = vec![(root, u32::MAX)];
    let mut seen: std::collections::HashSet<u32> = std::collections::HashSet::from([root]);
    while let Some((u, pi)) = stack.pop() {
        let idx = order.len() as u32;
        order.push((u, pi));
        for w in neighbors(tree, u) {
            if member[w as usize] && seen.insert(w) {
                stack.push((w, idx));
            }
        }
    }
    let mut size = vec![1u32; order.len()];
    let mut heaviest = vec![0u32; order.len()];
    for i in (1..order.len()).rev() {
        let pi = order[i].1 as usize;
        size[pi] += size[i];
        heaviest[pi] = heaviest[pi].max(size[i]);
    }
    let total = nodes.len() as u32;
    let mut best = (u32::MAX, root);
    for (i, &(u, _)) in order.iter().enumerate() {
        let worst = heaviest[i].max(total - size[i]);
        if worst < best.0 {
            best = (worst, u);
        }
    }
    debug_assert!(best.0 <= total.div_ceil(2));
    best.1
}

impl IndexArtifact for TreeMedianIndex {
    fn words(&self) -> u64 {
        self.words
    }
    fn kind(&self) -> &'static str {
        "median-tree"
    }
}
