use serde::{Deserialize, Serialize};

use crate::{normalize, Error, Label, Result};

/// Sentinel for "no node" (the root's parent).
pub const NO_NODE: u32 = u32::MAX;

/// A rooted tree with per-node labels, the path query universe.
///
/// Node ids are dense `0..n`. The external text format (see
/// [`crate::harness::textio`]) is 1-based with `parent 0` marking the root
/// and converts at the parsing boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTree {
    root: u32,
    parents: Vec<u32>, // NO_NODE for the root
    children: Vec<Vec<u32>>,
    labels: Vec<Label>,
    universe: u32,
}

impl LabeledTree {
    /// Build from parent pointers; exactly one entry must be `None` (the
    /// root), every node must be reachable from it.
    pub fn from_parents(parents: &[Option<u32>], labels: Vec<Label>) -> Result<Self> {
        if parents.is_empty() {
            return Err(Error::EmptyInput);
        }
        assert_eq!(parents.len(), labels.len(), "one label per node");
        let n = parents.len();
        let mut root = None;
        let mut children = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            match p {
                None => {
                    assert!(root.is_none(), "more than one root");
                    root = Some(v as u32);
                }
                Some(p) => {
                    assert!((*p as usize) < n, "parent id out of range");
                    children[*p as usize].push(v as u32);
                }
            }
        }
        let root = root.expect("no root node");
        // reachability doubles as the acyclicity check
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root as usize] = true;
        let mut count = 0usize;
        while let Some(u) = stack.pop() {
            count += 1;
            for &c in &children[u as usize] {
                assert!(!seen[c as usize], "cycle through node {c}");
                seen[c as usize] = true;
                stack.push(c);
            }
        }
        assert_eq!(count, n, "not every node is reachable from the root");
        let universe = labels.iter().map(|l| l.0).max().unwrap() + 1;
        Ok(LabeledTree {
            root,
            parents: parents.iter().map(|p| p.unwrap_or(NO_NODE)).collect(),
            children,
            labels,
            universe,
        })
    }

    /// Normalize raw per-node values and build; returns the inverse
    /// dictionary alongside.
    pub fn from_raw<T: Ord + Clone>(parents: &[Option<u32>], raw: &[T]) -> Result<(Self, Vec<T>)> {
        let (labels, dict) = normalize(raw)?;
        Ok((Self::from_parents(parents, labels)?, dict))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn root(&self) -> u32 {
        self.root
    }

    #[inline]
    pub fn parent(&self, v: u32) -> Option<u32> {
        let p = self.parents[v as usize];
        (p != NO_NODE).then_some(p)
    }

    #[inline]
    pub fn children(&self, v: u32) -> &[u32] {
        &self.children[v as usize]
    }

    #[inline]
    pub fn label(&self, v: u32) -> Label {
        self.labels[v as usize]
    }

    #[inline]
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    #[inline]
    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn contains(&self, v: u32) -> bool {
        (v as usize) < self.len()
    }

    pub fn is_binary(&self) -> bool {
        self.children.iter().all(|c| c.len() <= 2)
    }

    /// Depth of every node (root has depth 0).
    pub fn depths(&self) -> Vec<u32> {
        let mut depth = vec![0u32; self.len()];
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            for &c in self.children(u) {
                depth[c as usize] = depth[u as usize] + 1;
                stack.push(c);
            }
        }
        depth
    }

    /// Subtree size of every node.
    pub fn subtree_sizes(&self) -> Vec<u32> {
        let mut size = vec![1u32; self.len()];
        let order = self.preorder();
        for &u in order.iter().rev() {
            if let Some(p) = self.parent(u) {
                size[p as usize] += size[u as usize];
            }
        }
        size
    }

    pub fn preorder(&self) -> Vec<u32> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            order.push(u);
            for &c in self.children(u) {
                stack.push(c);
            }
        }
        order
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t1_shape() {
        let t = testutil::t1();
        assert_eq!(t.len(), 7);
        assert_eq!(t.root(), 0);
        assert_eq!(t.children(0), &[1, 2]);
        assert_eq!(t.parent(6), Some(5));
        assert_eq!(t.parent(0), None);
        assert_eq!(t.label(2), Label(5));
        assert!(t.is_binary());
        assert_eq!(t.depths(), vec![0, 1, 1, 2, 2, 2, 3]);
        assert_eq!(t.subtree_sizes()[0], 7);
    }

    #[test]
    #[should_panic(expected = "more than one root")]
    fn two_roots_rejected() {
        let _ = LabeledTree::from_parents(&[None, None], vec![Label(0), Label(1)]);
    }

    #[test]
    #[should_panic(expected = "reachable")]
    fn cycle_rejected() {
        // 1 -> 2 -> 1 with a disconnected root 0: the cycle is unreachable
        let _ = LabeledTree::from_parents(
            &[None, Some(2), Some(1)],
            vec![Label(0), Label(1), Label(2)],
        );
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(
            LabeledTree::from_parents(&[], vec![]).unwrap_err(),
            Error::EmptyInput
        );
    }
}
