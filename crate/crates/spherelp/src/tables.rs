//! CSV tables with `#` comment headers.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use spherelp_core::bounds::{BoundKind, DensityBound};

use crate::docs::Meta;

/// One line of `n,m,sharp,delta,Delta,flag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: usize,
    pub m: u32,
    pub sharp: f64,
    pub delta: f64,
    #[serde(rename = "Delta")]
    pub big_delta: f64,
    pub flag: String,
}

impl BoundRow {
    pub fn from_bound(b: &DensityBound, sharp: f64) -> Self {
        BoundRow {
            n: b.n,
            m: b.provenance.ms.last().copied().unwrap_or(0),
            sharp,
            delta: b.delta,
            big_delta: b.big_delta,
            flag: match b.provenance.kind {
                BoundKind::PerM => "per-m".to_string(),
                BoundKind::SequenceLiminf => "sequence-liminf".to_string(),
            },
        }
    }
}

fn write_comments<W: Write>(w: &mut W, meta: &Meta) -> Result<()> {
    for line in meta.comment_lines() {
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn write_bounds(path: &Path, meta: &Meta, rows: &[BoundRow]) -> Result<()> {
    let mut f = File::create(path).with_context(|| format!("writing {}", path.display()))?;
    write_comments(&mut f, meta)?;
    let mut w = csv::Writer::from_writer(f);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bounds(path: &Path) -> Result<Vec<BoundRow>> {
    let f = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(BufReader::new(f));
    r.deserialize()
        .map(|row| row.with_context(|| format!("parsing {}", path.display())))
        .collect()
}

/// Writes `x_1,…,x_n,value` rows.
pub fn write_samples(path: &Path, meta: &Meta, n: usize, rows: &[(Vec<f64>, f64)]) -> Result<()> {
    let mut f = File::create(path).with_context(|| format!("writing {}", path.display()))?;
    write_comments(&mut f, meta)?;
    let mut w = csv::Writer::from_writer(f);
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("value".to_string());
    w.write_record(&header)?;
    for (x, v) in rows {
        let mut rec: Vec<String> = x.iter().map(|c| c.to_string()).collect();
        rec.push(v.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Whitespace-separated `m sharp` blocks, one per dimension, for gnuplot.
pub fn write_plot_data(path: &Path, meta: &Meta, blocks: &[(usize, Vec<(u32, f64)>)]) -> Result<()> {
    let mut f = File::create(path).with_context(|| format!("writing {}", path.display()))?;
    write_comments(&mut f, meta)?;
    for (i, (n, pts)) in blocks.iter().enumerate() {
        if i > 0 {
            writeln!(f)?;
            writeln!(f)?;
        }
        writeln!(f, "# n = {n}")?;
        writeln!(f, "# m sharp")?;
        for (m, s) in pts {
            writeln!(f, "{m} {s}")?;
        }
    }
    Ok(())
}

/// The `#` comment lines at the top of a file.
pub fn header_comments(path: &Path) -> Result<Vec<String>> {
    let f = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        if !line.starts_with('#') {
            break;
        }
        out.push(line);
    }
    Ok(out)
}
