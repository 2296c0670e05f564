//! The differential fuzzing harness: random lists and trees, every index
//! checked against the brute-force oracle, failing instances shrunk to
//! minimal reproducers. The same machinery backs `rqk fuzz`.
//!
//! Run with: cargo run --example oracle_fuzz

use rqkit::harness::fuzz::{self, FuzzConfig};

fn main() {
    let cfg = FuzzConfig { instances: 12, max_n: 80, seed: 0xD15C0, ..Default::default() };
    let outcome = fuzz::run(&cfg);
    print!("{}", outcome.report);
    assert!(outcome.failure.is_none());

    // self-check: inject an off-by-one into the checked answers and watch
    // the harness catch and shrink it
    let broken = FuzzConfig {
        instances: 4,
        max_n: 30,
        mutate: true,
        kinds: vec![rqkit::harness::StructureKind::MedianBlock],
        ..Default::default()
    };
    let outcome = fuzz::run(&broken);
    let failure = outcome.failure.expect("the injected defect must be found");
    println!("\nself-check caught the injected defect; minimized reproducer:");
    print!("{}", failure.reproducer);
}
