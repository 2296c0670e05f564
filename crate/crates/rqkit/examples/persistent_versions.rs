//! The persistent augmented search tree underneath the median indexes:
//! every insert returns a new version by path copying, old versions stay
//! queryable, and each node's size field gives O(log n) rank and select.
//!
//! Run with: cargo run --example persistent_versions

use rqkit::pbst::{alloc_budget, PersistentTreeStore, VersionHandle};
use rqkit::select::select_three_trees;
use rqkit::{Label, Probe};

fn main() {
    let mut store = PersistentTreeStore::new();
    let mut versions = vec![VersionHandle::EMPTY];
    for value in [31u32, 4, 15, 9, 2, 6, 5, 35, 8, 9] {
        let before = store.nodes_allocated();
        let next = store.insert(*versions.last().unwrap(), Label(value));
        println!(
            "insert {value:2}: version of size {:2}, {} nodes copied (budget {})",
            next.len(),
            store.nodes_allocated() - before,
            alloc_budget(next.len() - 1),
        );
        versions.push(next);
    }

    // all earlier versions are intact
    for &v in &[versions[3], versions[6], versions[10]] {
        println!("version of size {:2}: {:?}", v.len(), store.in_order(v));
    }
    let five_in = store.rank_of(versions[10], Label(6));
    println!("elements < 6 in the final version: {five_in}");

    // rank selection over a union of versions (even from one store)
    let mut probe = Probe::default();
    let median = select_three_trees(
        (&store, versions[4]),
        (&store, versions[7]),
        (&store, VersionHandle::EMPTY),
        (versions[4].len() + versions[7].len() + 1) as u32 / 2,
        &mut probe,
    )
    .unwrap();
    println!(
        "median of version[4] ∪ version[7] is {median:?} in {} node visits",
        probe.probes
    );
}
