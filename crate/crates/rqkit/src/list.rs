use serde::{Deserialize, Serialize};

use crate::{normalize, Error, Label, Result};

/// A sequence of labels, the list query universe.
///
/// Positions are 1-indexed throughout the library.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledList {
    labels: Vec<Label>,
    universe: u32,
}

impl LabeledList {
    /// Build from already-normalized (or at least small, non-negative) label
    /// ids. The universe size is `max id + 1`.
    pub fn from_labels(labels: Vec<Label>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyInput);
        }
        let universe = labels.iter().map(|l| l.0).max().unwrap() + 1;
        Ok(LabeledList { labels, universe })
    }

    /// Normalize raw values and build the list; returns the inverse
    /// dictionary alongside.
    pub fn from_raw<T: Ord + Clone>(raw: &[T]) -> Result<(Self, Vec<T>)> {
        let (labels, dict) = normalize(raw)?;
        Ok((Self::from_labels(labels)?, dict))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    /// Number of possible label ids (`max id + 1`).
    #[inline]
    pub fn universe(&self) -> u32 {
        self.universe
    }

    /// Label at 1-indexed position `pos`.
    #[inline]
    pub fn get(&self, pos: u32) -> Label {
        self.labels[(pos - 1) as usize]
    }

    #[inline]
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// The labels of a 1-indexed inclusive range.
    #[inline]
    pub fn range_slice(&self, r: ListRange) -> &[Label] {
        assert!(r.j as usize <= self.len(), "range end beyond list");
        &self.labels[(r.i - 1) as usize..r.j as usize]
    }
}

/// A 1-indexed inclusive position range `i..=j` with `1 <= i <= j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListRange {
    pub i: u32,
    pub j: u32,
}

impl ListRange {
    pub fn new(i: u32, j: u32) -> Self {
        assert!(i >= 1 && i <= j, "invalid range {i}..={j}");
        ListRange { i, j }
    }

    #[inline]
    pub fn len(&self) -> usize {
        (self.j - self.i + 1) as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }
}
