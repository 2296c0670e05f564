//! The recursive block median index: persistent prefix/suffix search trees
//! per block, candidate rank windows per block pair, recursion for
//! same-block ranges.
//!
//! Run with: cargo run --example median_block

use rqkit::harness::gen::{self, ListShape};
use rqkit::median_list::MedianBlockIndex;
use rqkit::{oracle, IndexArtifact, ListRange, Probe};

fn main() {
    let n = 4096;
    let list = gen::list(n, ListShape::Uniform, 200, 9);
    for branching in [2usize, 16] {
        let index = MedianBlockIndex::new(&list, branching).unwrap();
        println!(
            "b={branching}: {} levels deep, {} persistent nodes, {} words",
            index.depth(),
            index.persistent_nodes(),
            index.words()
        );
        for (i, j) in [(1u32, n as u32), (100, 3000), (7, 9), (2048, 2048)] {
            let r = ListRange::new(i, j);
            let mut probe = Probe::default();
            let answer = index.query_probed(r, &mut probe);
            assert_eq!(answer, oracle::median(list.range_slice(r)).unwrap());
            println!(
                "  median of [{i}..={j}]: label {} at rank {} ({} probes)",
                answer.value, answer.rank, probe.probes
            );
        }
    }
}
