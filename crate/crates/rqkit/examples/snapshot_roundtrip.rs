//! Index persistence: any built structure serializes into a versioned
//! binary snapshot (`RQK1` magic) and answers identically after reload.
//! The same format backs `rqk build` / `rqk query`.
//!
//! Run with: cargo run --example snapshot_roundtrip

use rqkit::harness::gen::{self, TreeShape};
use rqkit::harness::{snapshot, BuildParams, BuiltIndex, Instance, StructureKind};
use rqkit::Probe;

fn main() {
    let tree = gen::tree(300, TreeShape::Caterpillar, 15, 99);
    let instance = Instance::Tree(tree);
    let index =
        BuiltIndex::build(StructureKind::MedianTree, &instance, &BuildParams::default()).unwrap();
    let snap = snapshot::Snapshot { dict: (0..15).collect(), index };

    let mut bytes = Vec::new();
    snapshot::save(&mut bytes, &snap).unwrap();
    println!(
        "median-tree over n=300 serialized into {} bytes (magic {:?})",
        bytes.len(),
        std::str::from_utf8(&bytes[..4]).unwrap()
    );

    let loaded = snapshot::load(bytes.as_slice()).unwrap();
    for (u, v) in [(0u32, 299), (10, 250), (42, 43)] {
        let a = snap.index.answer(u, v, &mut Probe::default()).unwrap();
        let b = loaded.index.answer(u, v, &mut Probe::default()).unwrap();
        assert_eq!(a, b);
        println!("query {u}..{v}: value {} rank {} before and after reload", a.0, a.1);
    }

    // tampered version fields are refused
    bytes[4] = 0xFF;
    assert!(snapshot::load(bytes.as_slice()).is_err());
    println!("tampered version header is rejected");
}
