use serde::{Deserialize, Serialize};

use crate::{IndexArtifact, Label, LabeledList, ListRange, Probe};

/// Per-label sorted occurrence positions: `positions[x]` holds every
/// 1-based position `p` with `list[p] == x`, strictly increasing. The union
/// of all arrays is `1..=n`, so total storage is one word per position.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OccurrenceIndex {
    positions: Vec<Vec<u32>>,
    n: u32,
    words: u64,
}

impl OccurrenceIndex {
    /// One pass over the list plus per-label appends.
    pub fn new(list: &LabeledList) -> Self {
        let mut positions = vec![Vec::new(); list.universe() as usize];
        for (idx, &x) in list.labels().iter().enumerate() {
            positions[x.0 as usize].push(idx as u32 + 1);
        }
        let words = list.len() as u64 + positions.len() as u64;
        OccurrenceIndex { positions, n: list.len() as u32, words }
    }

    /// Occurrences of `x` in `r`, by two binary searches in `positions[x]`.
    /// An unknown label counts zero. One probe per call.
    pub fn range_count(&self, x: Label, r: ListRange, probe: &mut Probe) -> u32 {
        probe.tick();
        assert!(r.j <= self.n, "range end beyond list");
        let arr = match self.positions.get(x.0 as usize) {
            Some(arr) => arr,
            None => return 0,
        };
        let below = arr.partition_point(|&p| p < r.i);
        let up_to = arr.partition_point(|&p| p <= r.j);
        (up_to - below) as u32
    }

    pub fn occurrences(&self, x: Label) -> &[u32] {
        self.positions.get(x.0 as usize).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

impl IndexArtifact for OccurrenceIndex {
    fn words(&self) -> u64 {
        self.words
    }
    fn kind(&self) -> &'static str {
        "occurrence"
    }
}
