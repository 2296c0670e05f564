//! Text formats for instances and queries.
//!
//! List file: one integer label per line. Tree file: a first line `n root`,
//! then `n` lines `node_id parent_id label`, 1-based ids with parent `0`
//! marking the root. Query file: one `i j` (list, 1-based positions) or
//! `u v` (tree, 1-based node ids) pair per line.

use std::io::{BufRead, Write};

use super::HarnessError;
use crate::LabeledTree;

pub fn parse_list(reader: impl BufRead) -> Result<Vec<i64>, HarnessError> {
    let mut values = Vec::new();
    for (ln, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: i64 = t
            .parse()
            .map_err(|_| HarnessError::Parse(format!("line {}: not an integer: {t:?}", ln + 1)))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(HarnessError::Parse("list file has no labels".into()));
    }
    Ok(values)
}

pub fn write_list(mut w: impl Write, values: &[i64]) -> std::io::Result<()> {
    for v in values {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

/// Parse the tree format into parent links (0-based) and raw labels.
pub fn parse_tree(reader: impl BufRead) -> Result<(Vec<Option<u32>>, Vec<i64>), HarnessError> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| HarnessError::Parse("empty tree file".into()))??;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| HarnessError::Parse("header must be `n root`".into()))?;
    let root: u32 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| HarnessError::Parse("header must be `n root`".into()))?;
    if n == 0 || root == 0 || root as usize > n {
        return Err(HarnessError::Parse(format!("bad header: n={n} root={root}")));
    }
    let mut parents: Vec<Option<Option<u32>>> = vec![None; n];
    let mut labels = vec![0i64; n];
    let mut seen = 0usize;
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut it = t.split_whitespace();
        let mut next_int = || -> Result<i64, HarnessError> {
            it.next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| HarnessError::Parse(format!("bad tree line: {t:?}")))
        };
        let id = next_int()?;
        let parent = next_int()?;
        let label = next_int()?;
        if id < 1 || id as usize > n || parent < 0 || parent as usize > n {
            return Err(HarnessError::Parse(format!("node ids out of range: {t:?}")));
        }
        let slot = (id - 1) as usize;
        if parents[slot].is_some() {
            return Err(HarnessError::Parse(format!("duplicate node id {id}")));
        }
        parents[slot] = Some(if parent == 0 { None } else { Some(parent as u32 - 1) });
        labels[slot] = label;
        seen += 1;
    }
    if seen != n {
        return Err(HarnessError::Parse(format!("expected {n} node lines, found {seen}")));
    }
    let parents: Vec<Option<u32>> = parents.into_iter().map(|p| p.unwrap()).collect();
    if parents[(root - 1) as usize].is_some() {
        return Err(HarnessError::Parse(format!("declared root {root} has a parent")));
    }
    if parents.iter().filter(|p| p.is_none()).count() != 1 {
        return Err(HarnessError::Parse("exactly one node may have parent 0".into()));
    }
    Ok((parents, labels))
}

pub fn write_tree(mut w: impl Write, tree: &LabeledTree, dict: &[i64]) -> std::io::Result<()> {
    writeln!(w, "{} {}", tree.len(), tree.root() + 1)?;
    for v in 0..tree.len() as u32 {
        let parent = tree.parent(v).map_or(0, |p| p + 1);
        writeln!(w, "{} {} {}", v + 1, parent, dict[tree.label(v).0 as usize])?;
    }
    Ok(())
}

/// One query line: two positive integers.
pub fn parse_query_line(line: &str) -> Result<(u32, u32), HarnessError> {
    let mut it = line.split_whitespace();
    let a: i64 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| HarnessError::MalformedQuery(line.to_string()))?;
    let b: i64 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| HarnessError::MalformedQuery(line.to_string()))?;
    if it.next().is_some() || a < 1 || b < 1 || a > u32::MAX as i64 || b > u32::MAX as i64 {
        return Err(HarnessError::MalformedQuery(line.to_string()));
    }
    Ok((a as u32, b as u32))
}
