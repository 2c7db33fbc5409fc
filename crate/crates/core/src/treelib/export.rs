use std::io::{BufRead, Write};

use serde::Serialize;

use super::classify::{classify, TreeClassParams};
use super::stats::stats;
use super::tree::{decode, Tree};
use crate::error::Result;

/// One CSV row of an enumeration export.
#[derive(Debug, Clone, Serialize)]
pub struct TreeRow {
    pub encoding: String,
    pub size: usize,
    pub depth: usize,
    pub gamma: String,
    pub sigma: String,
    pub theta: usize,
    pub simple: bool,
    pub short: bool,
}

impl TreeRow {
    pub fn new(t: &Tree, p: &TreeClassParams) -> Self {
        let s = stats(t);
        let (simple, short) = classify(t, p);
        TreeRow {
            encoding: t.encode().to_string(),
            size: s.size,
            depth: s.depth,
            gamma: s.factorial.to_string(),
            sigma: s.symmetry.to_string(),
            theta: s.homogeneity,
            simple,
            short,
        }
    }
}

/// Write `encoding,size,depth,gamma,sigma,theta,simple,short` rows.
pub fn write_csv<'a, W: Write>(
    w: W,
    trees: impl IntoIterator<Item = &'a Tree>,
    p: &TreeClassParams,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for t in trees {
        out.serialize(TreeRow::new(t, p))?;
    }
    out.flush()?;
    Ok(())
}

/// One encoding per line.
pub fn write_lines<'a, W: Write>(mut w: W, trees: impl IntoIterator<Item = &'a Tree>) -> Result<()> {
    for t in trees {
        writeln!(w, "{}", t.encode())?;
    }
    Ok(())
}

/// Inverse of [`write_lines`]. Blank lines are skipped.
pub fn read_lines<R: BufRead>(r: R) -> Result<Vec<Tree>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if !line.is_empty() {
            out.push(decode(line)?);
        }
    }
    Ok(out)
}
