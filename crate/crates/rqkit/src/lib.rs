//! Preprocessing structures for range mode and range median queries on
//! labelled lists and labelled trees.
//!
//! A *range query* asks about the multiset of labels at positions `i..=j` of a
//! list; a *path query* is the tree analogue over the unique `u`-to-`v` path.
//! This crate builds several query structures trading preprocessing space
//! against query time:
//!
//! * [`mode_list`] — occurrence-array counting, a block-decomposition mode
//!   index, and a constant-query shared-table mode index.
//! * [`mode_tree`] — path mode queries via binarization, subtree partition,
//!   per-label contracted trees and an LCA counting formula.
//! * [`median_list`] — a recursive persistent-search-tree block median index,
//!   a constant-query table index, and a range-tree median index.
//! * [`median_tree`] — path median queries via centroid decomposition with
//!   persistent path trees.
//! * [`oracle`] — the brute-force reference that defines ground truth for
//!   every structure above; all tests compare against it.
//!
//! Every index carries instrumented counters: a words-used counter filled at
//! allocation time (see [`IndexArtifact`]) and per-query probe counters (see
//! [`Probe`]), so complexity claims are asserted on counters instead of
//! wall-clock time.
//!
//! The `rqk` binary wraps all of this into `build` / `query` / `fuzz` /
//! `bench` / `gen` subcommands; see [`harness`] and the `examples/` directory.

pub mod error;
pub mod harness;
pub mod label;
pub mod lca;
pub mod list;
pub mod median_list;
pub mod median_tree;
pub mod mode_list;
pub mod mode_tree;
pub mod oracle;
pub mod pbst;
pub mod probe;
pub mod select;
pub mod separator;
pub mod tree;

pub use error::{Error, Result};
pub use label::{normalize, Label};
pub use list::{LabeledList, ListRange};
pub use probe::{IndexArtifact, Probe};
pub use tree::{LabeledTree, NO_NODE};

use serde::{Deserialize, Serialize};

/// Result of a mode query: a maximal-frequency label and its exact frequency
/// in the queried multiset.
///
/// Indexes are free to return *any* label of maximal frequency, so tests
/// compare `frequency` (and re-count the returned value) rather than the
/// label identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeAnswer {
    pub value: Label,
    pub frequency: u32,
}

/// Result of a median query: the element at 1-indexed sorted position
/// `floor(m/2) + 1` of the m-element queried multiset, together with that
/// rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MedianAnswer {
    pub value: Label,
    pub rank: u32,
}

/// The rank selected by a median query on an `m`-element multiset:
/// `floor(m/2) + 1`, 1-indexed. For odd `m` this is the classical median,
/// for even `m` the upper-middle element.
#[inline]
pub fn median_rank(m: usize) -> u32 {
    debug_assert!(m > 0);
    (m / 2 + 1) as u32
}
