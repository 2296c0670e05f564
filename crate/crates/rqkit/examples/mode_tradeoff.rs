//! The block-decomposition range mode index: build at a chosen
//! space/time point, answer queries, and watch the instrumented
//! candidate counter stay within 2*ceil(n/b)+1.
//!
//! Run with: cargo run --example mode_tradeoff

use rqkit::harness::gen::{self, ListShape};
use rqkit::mode_list::ModeTradeoffIndex;
use rqkit::{oracle, IndexArtifact, ListRange, Probe};

fn main() {
    let n = 4096;
    let list = gen::list(n, ListShape::Zipf, 48, 7);
    // eps = 1/2 is the linear-space corner: ~sqrt(n) blocks
    let index = ModeTradeoffIndex::new(&list, 0.5).unwrap();
    println!(
        "built {} over n={n}: {} blocks of size {}, {} words",
        index.kind(),
        index.block_count(),
        index.block_size(),
        index.words()
    );

    let candidate_cap = 2 * index.block_size() as u64 + 1;
    for (i, j) in [(1, n as u32), (17, 1900), (2000, 2001), (5, 5)] {
        let r = ListRange::new(i, j);
        let mut probe = Probe::default();
        let answer = index.query_probed(r, &mut probe);
        let check = oracle::mode(list.range_slice(r)).unwrap();
        assert_eq!(answer.frequency, check.frequency);
        println!(
            "mode of [{i}..={j}]: label {} x{}  ({} candidates <= {candidate_cap}, {} probes)",
            answer.value, answer.frequency, probe.candidates, probe.probes
        );
    }
}
