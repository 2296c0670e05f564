//! Lowest-common-ancestor queries via an Euler tour and a doubling sparse
//! table over tour depths: O(n log n) preprocessing, O(1) per query.

use serde::{Deserialize, Serialize};

use crate::LabeledTree;

/// LCA index over a [`LabeledTree`]. Read-only after build, safe for
/// unsynchronized concurrent queries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LcaIndex {
    euler: Vec<u32>,       // node at each tour position
    first_visit: Vec<u32>, // first tour position of each node
    depth: Vec<u32>,       // depth at each tour position
    sparse_min: Vec<Vec<u32>>, // sparse_min[k][p]: argmin-depth position in [p, p + 2^k)
    words: u64,
}

impl LcaIndex {
    pub fn new(tree: &LabeledTree) -> Self {
        let n = tree.len();
        let mut euler = Vec::with_capacity(2 * n - 1);
        let mut first_visit = vec![u32::MAX; n];
        let mut depth = Vec::with_capacity(2 * n - 1);

        // iterative Euler tour: (node, depth, next child index); the parent
        // re-enters the tour after each child subtour
        let mut stack: Vec<(u32, u32, usize)> = vec![(tree.root(), 0, 0)];
        euler.push(tree.root());
        depth.push(0);
        first_visit[tree.root() as usize] = 0;
        while let Some(&mut (u, d, ref mut ci)) = stack.last_mut() {
            let kids = tree.children(u);
            if *ci < kids.len() {
                let c = kids[*ci];
                *ci += 1;
                first_visit[c as usize] = euler.len() as u32;
                euler.push(c);
                depth.push(d + 1);
                stack.push((c, d + 1, 0));
            } else {
                stack.pop();
                if let Some(&(p, pd, _)) = stack.last() {
                    euler.push(p);
                    depth.push(pd);
                }
            }
        }

        let m = euler.len();
        debug_assert_eq!(m, 2 * n - 1);
        let levels = usize::BITS as usize - m.leading_zeros() as usize; // floor(log2 m) + 1
        let mut sparse_min: Vec<Vec<u32>> = Vec::with_capacity(levels);
        sparse_min.push((0..m as u32).collect());
        for k in 1..levels {
            let half = 1usize << (k - 1);
            let prev = &sparse_min[k - 1];
            let mut row = Vec::with_capacity(m - (1 << k) + 1);
            for p in 0..=(m - (1 << k)) {
                let a = prev[p];
                let b = prev[p + half];
                row.push(if depth[a as usize] <= depth[b as usize] { a } else { b });
            }
            sparse_min.push(row);
        }

        let words = (euler.len() + first_visit.len() + depth.len()) as u64
            + sparse_min.iter().map(|r| r.len() as u64).sum::<u64>();
        LcaIndex { euler, first_visit, depth, sparse_min, words }
    }

    /// The node on the `u`-to-`v` path closest to the root.
    pub fn lca(&self, u: u32, v: u32) -> u32 {
        let a = self.first_visit[u as usize] as usize;
        let b = self.first_visit[v as usize] as usize;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let k = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
        let x = self.sparse_min[k][lo];
        let y = self.sparse_min[k][hi + 1 - (1 << k)];
        let pos = if self.depth[x as usize] <= self.depth[y as usize] { x } else { y };
        self.euler[pos as usize]
    }

    pub fn tour_len(&self) -> usize {
        self.euler.len()
    }
}

impl crate::IndexArtifact for LcaIndex {
    fn words(&self) -> u64 {
        self.words
    }
    fn kind(&self) -> &'static str {
        "lca"
    }
}
