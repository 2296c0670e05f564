use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A normalized label: a dense integer id.
///
/// After [`normalize`], input labels occupy `0..L` for `L` distinct raw
/// values. Tree binarization introduces *reserved* labels at ids `>= L`;
/// whether an id is reserved is decided against that boundary (see
/// [`crate::separator::Binarized`]), so reserved ids never collide with
/// normalized input ids.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(pub u32);

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Replace raw orderable values by dense 0-based ids preserving equality and
/// relative order. Returns the labels and the inverse dictionary (id -> raw
/// value), which is total over `0..L`.
///
/// ```
/// use rqkit::{normalize, Label};
/// let (ids, dict) = normalize(&[30, 10, 40, 10]).unwrap();
/// assert_eq!(ids, vec![Label(1), Label(0), Label(2), Label(0)]);
/// assert_eq!(dict, vec![10, 30, 40]);
/// ```
pub fn normalize<T: Ord + Clone>(raw: &[T]) -> Result<(Vec<Label>, Vec<T>)> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut dict: Vec<T> = raw.to_vec();
    dict.sort();
    dict.dedup();
    let labels = raw
        .iter()
        .map(|v| {
            let id = dict.binary_search(v).expect("value is in its own dictionary");
            Label(id as u32)
        })
        .collect();
    Ok((labels, dict))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_order_preserving_ranks() {
        let (ids, dict) = normalize(&[30, 10, 40, 10]).unwrap();
        assert_eq!(ids, vec![Label(1), Label(0), Label(2), Label(0)]);
        assert_eq!(dict, vec![10, 30, 40]);
        // ids are contiguous 0..L-1
        let mut seen: Vec<u32> = ids.iter().map(|l| l.0).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen, vec![0, 1, 2]);
    }

    #[test]
    fn singleton() {
        let (ids, dict) = normalize(&[7]).unwrap();
        assert_eq!(ids, vec![Label(0)]);
        assert_eq!(dict, vec![7]);
    }

    #[test]
    fn all_equal() {
        let (ids, dict) = normalize(&[5, 5, 5]).unwrap();
        assert_eq!(ids, vec![Label(0); 3]);
        assert_eq!(dict, vec![5]);
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(normalize::<i64>(&[]).unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn inverse_dictionary_is_total() {
        let raw = [9i64, -3, 9, 12, 0, -3, 7];
        let (ids, dict) = normalize(&raw).unwrap();
        for (i, l) in ids.iter().enumerate() {
            assert_eq!(dict[l.0 as usize], raw[i]);
        }
    }
}
