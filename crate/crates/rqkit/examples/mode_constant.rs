//! The constant-query mode index: shared outcome tables make every
//! cross-block query cost exactly 2k+4 probes regardless of the list
//! length.
//!
//! Run with: cargo run --example mode_constant

use rqkit::harness::gen::{self, ListShape};
use rqkit::mode_list::ModeConstantIndex;
use rqkit::{ListRange, Probe};

fn main() {
    let k = 8;
    for n in [1 << 10, 1 << 13] {
        let list = gen::list(n, ListShape::Uniform, 32, 11);
        let index = ModeConstantIndex::new(&list, k).unwrap();
        let mut probes = Vec::new();
        for start in [1u32, 100, 513] {
            let r = ListRange::new(start, start + 3 * k as u32); // spans a block pair
            let mut probe = Probe::default();
            let answer = index.query_probed(r, &mut probe);
            probes.push(probe.probes);
            println!(
                "n={n}: mode of [{}..={}] is label {} x{} in {} probes",
                r.i, r.j, answer.value, answer.frequency, probe.probes
            );
        }
        assert!(probes.iter().all(|&p| p == 2 * k as u64 + 4));
        println!(
            "n={n}: {} block pairs share {} distinct tables\n",
            n / k * (n / k - 1) / 2,
            index.distinct_tables()
        );
    }
}
