//! Sampled oracle equivalence at sizes beyond the exhaustive sweeps:
//! n = 4096 lists across several parameter settings, including the extreme
//! block counts and table sizes.

use rqkit::harness::gen::{self, ListShape};
use rqkit::harness::rng::SplitMix64;
use rqkit::median_list::{MedianBlockIndex, MedianConstantIndex, RangeTreeIndex};
use rqkit::mode_list::{ModeConstantIndex, ModeTradeoffIndex};
use rqkit::{oracle, LabeledList, ListRange};

fn sampled_ranges(n: u32, count: usize, seed: u64) -> Vec<ListRange> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let i = rng.below(n as u64) as u32 + 1;
            let j = i + rng.below((n - i + 1) as u64) as u32;
            ListRange::new(i, j)
        })
        .collect()
}

#[test]
fn all_list_structures_at_n_4096() {
    let n = 4096usize;
    for (shape, seed) in [(ListShape::Uniform, 31u64), (ListShape::Zipf, 32)] {
        let list = gen::list(n, shape, 0, seed);
        let ranges = sampled_ranges(n as u32, 1500, seed ^ 0xFF);

        let tradeoff = ModeTradeoffIndex::new(&list, 0.5).unwrap();
        let tradeoff_third = ModeTradeoffIndex::new(&list, 0.34).unwrap();
        let mode_const = ModeConstantIndex::new(&list, 4).unwrap();
        let blocks = [
            MedianBlockIndex::new(&list, 2).unwrap(),
            MedianBlockIndex::new(&list, 16).unwrap(),
        ];
        let trees = [
            RangeTreeIndex::new(&list, 2).unwrap(),
            RangeTreeIndex::new(&list, 16).unwrap(),
        ];
        let med_const = MedianConstantIndex::new(&list, 4).unwrap();

        for &r in &ranges {
            let slice = list.range_slice(r);
            let want_mode = oracle::mode(slice).unwrap().frequency;
            for got in [tradeoff.query(r), tradeoff_third.query(r), mode_const.query(r)] {
                assert_eq!(got.frequency, want_mode, "{r:?}");
                assert_eq!(oracle::count(slice, got.value), got.frequency);
            }
            let want_median = oracle::median(slice).unwrap();
            for idx in &blocks {
                assert_eq!(idx.query(r), want_median, "block {r:?}");
            }
            for idx in &trees {
                assert_eq!(idx.query(r), want_median, "range-tree {r:?}");
            }
            assert_eq!(med_const.query(r), want_median, "constant {r:?}");
        }
    }
}

#[test]
fn extreme_parameters_on_a_mid_sized_list() {
    let n = 512usize;
    let list = gen::list(n, ListShape::Uniform, 6, 77);
    let ranges = sampled_ranges(n as u32, 800, 5);
    let all_equal = LabeledList::from_labels(vec![rqkit::Label(2); n]).unwrap();

    for l in [&list, &all_equal] {
        let b_n = MedianBlockIndex::new(l, n).unwrap(); // every block a singleton
        let k1_mode = ModeConstantIndex::new(l, 1).unwrap();
        let k3_mode = ModeConstantIndex::new(l, 3).unwrap();
        let k1_median = MedianConstantIndex::new(l, 1).unwrap();
        let k3_median = MedianConstantIndex::new(l, 3).unwrap();
        for &r in &ranges {
            let slice = l.range_slice(r);
            let want_mode = oracle::mode(slice).unwrap().frequency;
            assert_eq!(k1_mode.query(r).frequency, want_mode);
            assert_eq!(k3_mode.query(r).frequency, want_mode);
            let want_median = oracle::median(slice).unwrap();
            assert_eq!(b_n.query(r), want_median);
            assert_eq!(k1_median.query(r), want_median);
            assert_eq!(k3_median.query(r), want_median);
        }
    }
}
