//! The range-tree median index: per-node sorted arrays over a complete
//! b-ary position tree, canonical range decomposition, multi-array rank
//! selection.
//!
//! Run with: cargo run --example median_range_tree

use rqkit::harness::gen::{self, ListShape};
use rqkit::median_list::RangeTreeIndex;
use rqkit::{oracle, IndexArtifact, ListRange, Probe};

fn main() {
    let n = 2000;
    let list = gen::list(n, ListShape::Zipf, 64, 4);
    for arity in [2usize, 8] {
        let index = RangeTreeIndex::new(&list, arity).unwrap();
        println!(
            "arity {arity}: height {}, {} stored elements",
            index.height(),
            index.words()
        );
        let r = ListRange::new(37, 1764);
        let parts = index.canonical_decomposition(r);
        let cap = arity * index.height() as usize + 2;
        let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
        println!(
            "  [{}..={}] decomposes into {} disjoint sorted arrays (cap {cap}): {sizes:?}",
            r.i,
            r.j,
            parts.len()
        );
        let mut probe = Probe::default();
        let answer = index.query_probed(r, &mut probe);
        assert_eq!(answer, oracle::median(list.range_slice(r)).unwrap());
        println!(
            "  median: label {} at rank {} ({} comparisons in the selection)",
            answer.value, answer.rank, probe.comparisons
        );
    }
}
