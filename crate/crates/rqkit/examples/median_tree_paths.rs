//! Path median queries on a tree: centroid decomposition with persistent
//! path trees. Each level stores, per node, the multiset of labels on its
//! path to the level's centroid; a query selects a rank across two such
//! versions.
//!
//! Run with: cargo run --example median_tree_paths

use rqkit::harness::gen::{self, TreeShape};
use rqkit::median_tree::TreeMedianIndex;
use rqkit::{oracle, IndexArtifact, Probe};

fn main() {
    for shape in TreeShape::ALL {
        let n = 1000;
        let tree = gen::tree(n, shape, 25, 5);
        let index = TreeMedianIndex::new(&tree);
        let cap = (n as f64).log(1.5) + 2.0;
        println!(
            "{} tree, n={n}: depth {} (cap {:.1}), {} persistent nodes, {} words",
            shape.name(),
            index.depth(),
            cap,
            index.persistent_nodes(),
            index.words()
        );
        let mut worst = 0;
        for (u, v) in [(0u32, 999), (123, 877), (500, 501), (42, 42)] {
            let mut probe = Probe::default();
            let answer = index.query_probed(u, v, &mut probe).unwrap();
            let path = oracle::path_labels(&tree, u, v).unwrap();
            assert_eq!(answer, oracle::median(&path).unwrap());
            worst = worst.max(probe.probes);
        }
        println!("  4 queries verified against the oracle, worst {worst} probes\n");
    }
}
