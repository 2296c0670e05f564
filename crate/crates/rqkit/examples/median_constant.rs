//! The constant-query median index: every cross-block answer is a pair
//! lookup, a shared-table read and one translation read — three probes,
//! independent of the list length.
//!
//! Run with: cargo run --example median_constant

use rqkit::harness::gen::{self, ListShape};
use rqkit::median_list::MedianConstantIndex;
use rqkit::{oracle, ListRange, Probe};

fn main() {
    let k = 6;
    for n in [512usize, 8192] {
        let list = gen::list(n, ListShape::Uniform, 40, 23);
        let index = MedianConstantIndex::new(&list, k).unwrap();
        let mut worst = 0;
        for q in 0..200u32 {
            let i = q % (n as u32 - 4 * k as u32) + 1;
            let j = i + 2 * k as u32 + q % (2 * k as u32); // always crosses blocks
            let r = ListRange::new(i, j);
            let mut probe = Probe::default();
            let answer = index.query_probed(r, &mut probe);
            assert_eq!(answer, oracle::median(list.range_slice(r)).unwrap());
            worst = worst.max(probe.probes);
        }
        println!(
            "n={n}, k={k}: 200 cross-block medians verified, worst case {worst} probes, {} distinct tables",
            index.distinct_tables()
        );
    }
}
