//! Path mode queries on a tree: binarization, subtree components, per-label
//! contracted trees and the LCA counting formula, all behind one query call.
//!
//! Run with: cargo run --example mode_tree_paths

use rqkit::harness::gen::{self, TreeShape};
use rqkit::mode_tree::TreeModeIndex;
use rqkit::{oracle, IndexArtifact, Label, Probe};

fn main() {
    let n = 600;
    let tree = gen::tree(n, TreeShape::Random, 12, 3);
    let index = TreeModeIndex::new(&tree, 0.5).unwrap();
    println!(
        "built {} over n={n}: {} components, {} label-tree members, {} words",
        index.kind(),
        index.component_count(),
        index.label_tree_total(),
        index.words()
    );

    // per-label path counting is exposed directly
    let (u, v) = (5u32, 571);
    for x in 0..4u32 {
        let count = index.range_count(Label(x), u, v).unwrap();
        let check = oracle::count(&oracle::path_labels(&tree, u, v).unwrap(), Label(x));
        assert_eq!(count, check);
        println!("label {x} occurs {count} times on the {u}..{v} path");
    }

    for (u, v) in [(0u32, 599), (5, 571), (42, 42), (100, 101)] {
        let mut probe = Probe::default();
        let answer = index.query_probed(u, v, &mut probe).unwrap();
        let path = oracle::path_labels(&tree, u, v).unwrap();
        assert_eq!(answer.frequency, oracle::mode(&path).unwrap().frequency);
        println!(
            "mode on path {u}..{v} (len {}): label {} x{}  ({} candidates)",
            path.len(),
            answer.value,
            answer.frequency,
            probe.candidates
        );
    }
}
