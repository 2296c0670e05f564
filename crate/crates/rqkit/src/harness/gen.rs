//! Seeded instance generators: uniform and zipf label distributions over
//! lists, and random / path / star / caterpillar tree shapes.

use super::rng::{SplitMix64, Zipf};
use crate::{Label, LabeledList, LabeledTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ListShape {
    /// labels uniform over `distinct` values
    Uniform,
    /// zipf(1.2) over `distinct` values
    Zipf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeShape {
    Random,
    Path,
    Star,
    Caterpillar,
}

impl TreeShape {
    pub const ALL: [TreeShape; 4] =
        [TreeShape::Random, TreeShape::Path, TreeShape::Star, TreeShape::Caterpillar];

    pub fn name(&self) -> &'static str {
        match self {
            TreeShape::Random => "random",
            TreeShape::Path => "path",
            TreeShape::Star => "star",
            TreeShape::Caterpillar => "caterpillar",
        }
    }
}

/// Raw label values for a list instance; `distinct = 0` defaults to
/// `ceil(sqrt(n))` distinct values.
pub fn list_values(n: usize, shape: ListShape, distinct: usize, seed: u64) -> Vec<i64> {
    assert!(n >= 1);
    let distinct = if distinct == 0 {
        (n as f64).sqrt().ceil() as usize
    } else {
        distinct
    }
    .max(1);
    let mut rng = SplitMix64::new(seed);
    match shape {
        ListShape::Uniform => (0..n).map(|_| rng.below(distinct as u64) as i64).collect(),
        ListShape::Zipf => {
            let z = Zipf::new(distinct, 1.2);
            (0..n).map(|_| z.sample(&mut rng) as i64).collect()
        }
    }
}

pub fn list(n: usize, shape: ListShape, distinct: usize, seed: u64) -> LabeledList {
    let raw = list_values(n, shape, distinct, seed);
    LabeledList::from_raw(&raw).expect("n >= 1").0
}

/// Parent links (1-based external convention handled by callers; here node 0
/// is the root) plus labels for a tree instance.
pub fn tree(n: usize, shape: TreeShape, distinct: usize, seed: u64) -> LabeledTree {
    assert!(n >= 1);
    let distinct = if distinct == 0 {
        (n as f64).sqrt().ceil() as usize
    } else {
        distinct
    }
    .max(1);
    let mut rng = SplitMix64::new(seed ^ 0xA55A_5AA5_1234_5678);
    let mut parents: Vec<Option<u32>> = vec![None];
    for v in 1..n {
        let p = match shape {
            TreeShape::Random => rng.below(v as u64) as u32,
            TreeShape::Path => v as u32 - 1,
            TreeShape::Star => 0,
            TreeShape::Caterpillar => {
                // first half forms the spine, second half leaves off it
                let spine = (n / 2).max(1);
                if v < spine {
                    v as u32 - 1
                } else {
                    (v - spine) as u32
                }
            }
        };
        parents.push(Some(p));
    }
    let labels: Vec<Label> =
        (0..n).map(|_| Label(rng.below(distinct as u64) as u32)).collect();
    LabeledTree::from_parents(&parents, labels).expect("generated trees are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seed_deterministic() {
        assert_eq!(
            list_values(40, ListShape::Zipf, 0, 5),
            list_values(40, ListShape::Zipf, 0, 5)
        );
        let a = tree(30, TreeShape::Random, 4, 9);
        let b = tree(30, TreeShape::Random, 4, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn shapes_have_their_shapes() {
        let p = tree(10, TreeShape::Path, 3, 1);
        assert!((1..10).all(|v| p.parent(v).unwrap() == v - 1));
        let s = tree(10, TreeShape::Star, 3, 1);
        assert!((1..10).all(|v| s.parent(v).unwrap() == 0));
        let c = tree(12, TreeShape::Caterpillar, 3, 1);
        assert_eq!(c.len(), 12);
    }
}
