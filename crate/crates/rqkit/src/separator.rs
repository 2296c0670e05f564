//! Tree surgery shared by the tree indexes: binarization of arbitrary-degree
//! trees, balanced edge separators of binary trees, and repeated separator
//! splitting into bounded-size connected components.

use serde::{Deserialize, Serialize};

use crate::{Error, Label, LabeledTree, Result};

/// Result of [`binarize`]: the rewritten tree, where every original node maps
/// to a node carrying its original label, and nodes with more than two
/// children were expanded into little binary gadgets of synthetic nodes.
///
/// Synthetic nodes carry fresh labels at ids `>= reserved_floor`, each one
/// unique, so they can never tie with a real label in a frequency contest.
///
/// A path between two mapped nodes traverses the same original labels in
/// order, interleaved with reserved labels, with one systematic exception:
/// when both endpoints sit under the same half of one gadget, the path's
/// apex is a synthetic node and the expanded node's own label is missing
/// from the walk (its copy is the gadget root, above the apex). `owner`
/// recovers the expanded node so path queries can re-insert that label;
/// see [`Binarized::missing_apex`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Binarized {
    pub tree: LabeledTree,
    /// original node id -> node id in `tree`
    pub node_map: Vec<u32>,
    /// binarized node id -> the original node it stands for (for a synthetic
    /// node, the original node whose child list it splits)
    pub owner: Vec<u32>,
    /// labels with id >= this are synthetic
    pub reserved_floor: u32,
}

impl Binarized {
    #[inline]
    pub fn is_reserved(&self, x: Label) -> bool {
        x.0 >= self.reserved_floor
    }

    #[inline]
    pub fn is_synthetic_node(&self, v: u32) -> bool {
        self.is_reserved(self.tree.label(v))
    }

    /// If the apex (lowest common ancestor in the binarized tree) of a mapped
    /// path is synthetic, the original node whose label the walk is missing.
    pub fn missing_apex(&self, apex: u32) -> Option<u32> {
        self.is_synthetic_node(apex).then(|| self.owner[apex as usize])
    }
}

/// Expand every node with more than two children into a binary gadget: the
/// original node keeps its label at the gadget root, and `d - 2` synthetic
/// splitter nodes fan out below it. Original nodes keep their ids; synthetic
/// nodes are appended after them, and the result has at most `2n` nodes.
pub fn binarize(tree: &LabeledTree) -> Binarized {
    let n = tree.len();
    let reserved_floor = tree.universe();
    let mut next_reserved = reserved_floor;
    let mut parents: Vec<Option<u32>> = vec![None; n];
    let mut labels: Vec<Label> = tree.labels().to_vec();
    let mut owner: Vec<u32> = (0..n as u32).collect();

    for u in 0..n as u32 {
        // split u's child list with synthetic nodes until every attachment
        // point has at most two children
        let mut groups: Vec<(Vec<u32>, u32)> = vec![(tree.children(u).to_vec(), u)];
        while let Some((group, attach)) = groups.pop() {
            if group.len() <= 2 {
                for kid in group {
                    parents[kid as usize] = Some(attach);
                }
            } else {
                let mid = group.len().div_ceil(2);
                for half in [&group[..mid], &group[mid..]] {
                    if half.len() == 1 {
                        parents[half[0] as usize] = Some(attach);
                    } else {
                        let s = parents.len() as u32;
                        parents.push(Some(attach));
                        labels.push(Label(next_reserved));
                        owner.push(u);
                        next_reserved += 1;
                        groups.push((half.to_vec(), s));
                    }
                }
            }
        }
    }

    let node_map = (0..n as u32).collect();
    let tree = LabeledTree::from_parents(&parents, labels).expect("binarized tree is well formed");
    debug_assert!(tree.is_binary());
    debug_assert!(tree.len() <= 2 * n);
    Binarized { tree, node_map, owner, reserved_floor }
}

/// An edge `(parent, child)` of a rooted binary tree whose removal leaves two
/// components of size at most `ceil(2n/3)` each. Chosen as the edge
/// minimizing the larger side.
pub fn edge_separator(tree: &LabeledTree) -> Result<(u32, u32)> {
    if tree.len() < 2 {
        return Err(Error::SingleNode);
    }
    let n = tree.len() as u32;
    let sizes = tree.subtree_sizes();
    let mut best: Option<(u32, u32, u32)> = None; // (max side, parent, child)
    for v in 0..n {
        if let Some(p) = tree.parent(v) {
            let side = sizes[v as usize];
            let worst = side.max(n - side);
            if best.is_none_or(|(w, _, _)| worst < w) {
                best = Some((worst, p, v));
            }
        }
    }
    let (worst, p, v) = best.unwrap();
    debug_assert!(
        !tree.is_binary() || worst as usize <= (2 * tree.len()).div_ceil(3),
        "binary tree must have a 2/3-balanced edge"
    );
    let _ = worst;
    Ok((p, v))
}

/// A partition of the tree's nodes into connected components.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Partition {
    /// node id -> component id, dense `0..count`
    pub comp: Vec<u32>,
    pub count: usize,
}

/// Split a rooted binary tree into O(b) connected components of size at most
/// `ceil(n/b)` by repeatedly removing balanced separator edges.
pub fn partition_subtrees(tree: &LabeledTree, b: usize) -> Partition {
    let n = tree.len();
    assert!(tree.is_binary(), "partition_subtrees expects a binary tree");
    assert!((1..=n).contains(&b), "component target outside 1..=n");
    let limit = n.div_ceil(b);
    let mut comp = vec![u32::MAX; n];
    let mut count = 0usize;

    let mut stack: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
    while let Some(nodes) = stack.pop() {
        if nodes.len() <= limit {
            for &v in &nodes {
                comp[v as usize] = count as u32;
            }
            count += 1;
            continue;
        }
        // local structure of the component: sizes below each member node,
        // counting only member descendants
        let mut member = vec![false; n];
        for &v in &nodes {
            member[v as usize] = true;
        }
        let local_root = *nodes
            .iter()
            .find(|&&v| tree.parent(v).is_none_or(|p| !member[p as usize]))
            .expect("a connected component has a topmost node");
        // post-order over members
        let mut order = Vec::with_capacity(nodes.len());
        let mut dfs = vec![local_root];
        while let Some(u) = dfs.pop() {
            order.push(u);
            for &c in tree.children(u) {
                if member[c as usize] {
                    dfs.push(c);
                }
            }
        }
        let mut size = vec![0u32; n];
        for &u in order.iter().rev() {
            size[u as usize] = 1;
            for &c in tree.children(u) {
                if member[c as usize] {
                    size[u as usize] += size[c as usize];
                }
            }
        }
        let m = nodes.len() as u32;
        let cut = order
            .iter()
            .skip(1) // not the local root: its parent edge leaves the component
            .min_by_key(|&&v| {
                let side = size[v as usize];
                side.max(m - side)
            })
            .copied()
            .expect("component larger than the limit has at least two nodes");
        // collect the child side of the cut; the rest stays with the root side
        let mut child_side = Vec::with_capacity(size[cut as usize] as usize);
        let mut dfs = vec![cut];
        let mut in_child = vec![false; n];
        while let Some(u) = dfs.pop() {
            child_side.push(u);
            in_child[u as usize] = true;
            for &c in tree.children(u) {
                if member[c as usize] {
                    dfs.push(c);
                }
            }
        }
        let root_side: Vec<u32> =
            nodes.iter().copied().filter(|&v| !in_child[v as usize]).collect();
        stack.push(child_side);
        stack.push(root_side);
    }
    Partition { comp, count }
}
