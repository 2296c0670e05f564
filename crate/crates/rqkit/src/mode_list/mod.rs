//! Range mode indexes on lists.
//!
//! [`OccurrenceIndex`] answers range counting queries with two binary
//! searches per label. [`ModeTradeoffIndex`] trades space against query time
//! through a block decomposition with precomputed middle modes.
//! [`ModeConstantIndex`] pushes further: every cross-block answer is a table
//! lookup, tables are deduplicated by content across block pairs, and the
//! per-query probe count is independent of the list length.

mod constant;
mod occurrence;
mod tradeoff;

pub use constant::ModeConstantIndex;
pub use occurrence::OccurrenceIndex;
pub use tradeoff::ModeTradeoffIndex;

use serde::{Deserialize, Serialize};

/// Geometry of a fixed-size block decomposition of positions `1..=n`; the
/// final block may be short.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub(crate) struct Blocks {
    pub n: u32,
    pub size: u32,
    pub count: u32,
}

impl Blocks {
    pub fn with_size(n: u32, size: u32) -> Self {
        assert!(size >= 1);
        Blocks { n, size, count: n.div_ceil(size) }
    }

    /// 0-based block index of a 1-based position.
    #[inline]
    pub fn of_pos(&self, pos: u32) -> u32 {
        (pos - 1) / self.size
    }

    /// First position of block `b`, 1-based.
    #[inline]
    pub fn start(&self, b: u32) -> u32 {
        b * self.size + 1
    }

    /// Last position of block `b`, 1-based inclusive (short final block).
    #[inline]
    pub fn end(&self, b: u32) -> u32 {
        ((b + 1) * self.size).min(self.n)
    }

    #[inline]
    pub fn len(&self, b: u32) -> u32 {
        self.end(b) - self.start(b) + 1
    }
}

/// Dense id for the unordered pair `lo < hi` among `count` blocks.
#[inline]
pub(crate) fn pair_id(count: u32, lo: u32, hi: u32) -> usize {
    debug_assert!(lo < hi && hi < count);
    let lo = lo as usize;
    let hi = hi as usize;
    let count = count as usize;
    lo * (2 * count - lo - 1) / 2 + (hi - lo - 1)
}

pub(crate) fn pair_count(count: u32) -> usize {
    let c = count as usize;
    c * (c - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_geometry() {
        let b = Blocks::with_size(11, 4);
        assert_eq!(b.count, 3);
        assert_eq!((b.start(0), b.end(0)), (1, 4));
        assert_eq!((b.start(2), b.end(2)), (9, 11));
        assert_eq!(b.len(2), 3);
        assert_eq!(b.of_pos(1), 0);
        assert_eq!(b.of_pos(4), 0);
        assert_eq!(b.of_pos(5), 1);
        assert_eq!(b.of_pos(11), 2);
    }

    #[test]
    fn pair_ids_are_dense() {
        for count in 2..=9u32 {
            let mut seen = vec![false; pair_count(count)];
            for lo in 0..count {
                for hi in lo + 1..count {
                    let id = pair_id(count, lo, hi);
                    assert!(!seen[id]);
                    seen[id] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
