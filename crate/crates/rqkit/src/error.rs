use std::fmt;

use crate::Label;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by the query structures in this crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A structure was asked to index an empty list or tree.
    EmptyInput,
    /// A query addressed an empty multiset.
    EmptyRange,
    /// A selection rank fell outside `1..=size`.
    RankOutOfRange { rank: u32, size: u32 },
    /// A node id outside the tree.
    UnknownNode(u32),
    /// A label with no per-label structure.
    UnknownLabel(Label),
    /// Edge separators need at least two nodes.
    SingleNode,
    /// Block-tradeoff epsilon outside (0, 1/2].
    BadEpsilon(f64),
    /// Branching factor outside 2..=n.
    BadBranching(usize),
    /// An input array that must be sorted ascending was not.
    UnsortedInput,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput => write!(f, "input is empty"),
            Error::EmptyRange => write!(f, "query range is empty"),
            Error::RankOutOfRange { rank, size } => {
                write!(f, "rank {rank} out of range for multiset of size {size}")
            }
            Error::UnknownNode(id) => write!(f, "unknown node id {id}"),
            Error::UnknownLabel(x) => write!(f, "no structure for label {}", x.0),
            Error::SingleNode => write!(f, "tree has a single node, no edge to separate"),
            Error::BadEpsilon(e) => write!(f, "epsilon {e} outside (0, 1/2]"),
            Error::BadBranching(b) => write!(f, "branching factor {b} outside 2..=n"),
            Error::UnsortedInput => write!(f, "input array is not sorted ascending"),
        }
    }
}

impl std::error::Error for Error {}
