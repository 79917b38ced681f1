//! Text formats for embeddings, category positions, traces and labelings.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! that reading a file back reproduces the exact `f64`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::CategoryEncoding;
use crate::metrics::RestartSummary;

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::FileNotFound(path.to_path_buf())),
        Err(e) => Err(Error::io(path, e)),
    }
}

fn push_row(line: &mut String, values: impl IntoIterator<Item = f64>) {
    for v in values {
        line.push('\t');
        line.push_str(&format_float(v));
    }
    line.push('\n');
}

fn coord_header(d: usize) -> String {
    (0..d).map(|l| format!("\tc{l}")).collect()
}

/// `node<TAB>c0..c{d-1}`, one row per node.
pub fn write_embedding<W: Write>(mut out: W, nodes: &[String], objects: ArrayView2<'_, f64>) -> std::io::Result<()> {
    writeln!(out, "node{}", coord_header(objects.ncols()))?;
    for (id, row) in nodes.iter().zip(objects.rows()) {
        let mut line = id.clone();
        push_row(&mut line, row.iter().copied());
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// `attribute<TAB>label<TAB>c0..`, one row per category.
pub fn write_categories<W: Write>(
    mut out: W,
    enc: &CategoryEncoding,
    attribute_names: &[String],
    categories: ArrayView2<'_, f64>,
) -> std::io::Result<()> {
    writeln!(out, "attribute\tlabel{}", coord_header(categories.ncols()))?;
    for ((j, label), row) in enc.categories().iter().zip(categories.rows()) {
        let mut line = format!("{}\t{label}", attribute_names[*j]);
        push_row(&mut line, row.iter().copied());
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn write_trace<W: Write>(mut out: W, trace: &[f64]) -> std::io::Result<()> {
    for f in trace {
        writeln!(out, "{}", format_float(*f))?;
    }
    Ok(())
}

/// `node<TAB>cluster`.
pub fn write_labels<W: Write>(mut out: W, nodes: &[String], labels: &[usize]) -> std::io::Result<()> {
    writeln!(out, "node\tcluster")?;
    for (id, l) in nodes.iter().zip(labels) {
        writeln!(out, "{id}\t{l}")?;
    }
    Ok(())
}

/// Writes through `f` into a freshly created file.
pub fn write_file(path: impl AsRef<Path>, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    f(&mut out).and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
}

/// Data lines of a TSV file with a header, split on tabs.
fn tsv_rows(path: &Path, header_prefix: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let name = path.display().to_string();
    let mut rows = Vec::new();
    for (idx, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = idx + 1;
        if idx == 0 {
            if !line.starts_with(header_prefix) {
                return Err(Error::parse(&name, lineno, format!("expected header starting with {header_prefix:?}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        rows.push((lineno, line.split('\t').map(str::to_string).collect()));
    }
    Ok(rows)
}

/// Reads a file written by [`write_embedding`].
pub fn read_embedding(path: impl AsRef<Path>) -> Result<(Vec<String>, Array2<f64>)> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let rows = tsv_rows(path, "node")?;
    let d = rows.first().map_or(0, |(_, r)| r.len() - 1);
    let mut nodes = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len() * d);
    for (lineno, row) in rows {
        if row.len() != d + 1 {
            return Err(Error::parse(&name, lineno, format!("expected {} columns, found {}", d + 1, row.len())));
        }
        for v in &row[1..] {
            values.push(v.trim().parse::<f64>().map_err(|_| Error::parse(&name, lineno, "non-numeric coordinate"))?);
        }
        nodes.push(row[0].clone());
    }
    if nodes.is_empty() {
        return Err(Error::parse(&name, 1, "embedding has no rows"));
    }
    let matrix = Array2::from_shape_vec((nodes.len(), d), values).expect("row lengths checked");
    Ok((nodes, matrix))
}

/// Reads a file written by [`write_labels`].
pub fn read_labels(path: impl AsRef<Path>) -> Result<(Vec<String>, Vec<usize>)> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let mut nodes = Vec::new();
    let mut labels = Vec::new();
    for (lineno, row) in tsv_rows(path, "node")? {
        if row.len() != 2 {
            return Err(Error::parse(&name, lineno, "expected node<TAB>cluster"));
        }
        let l = row[1].trim().parse().map_err(|_| Error::parse(&name, lineno, "non-integer cluster id"))?;
        nodes.push(row[0].clone());
        labels.push(l);
    }
    Ok((nodes, labels))
}

/// Reorders `labels` (keyed by `ids`) to follow `order`.
pub fn align_labels(order: &[String], ids: &[String], labels: &[usize]) -> Result<Vec<usize>> {
    if order.len() != ids.len() {
        return Err(Error::LengthMismatch {
            left: order.len(),
            right: ids.len(),
        });
    }
    let index: std::collections::HashMap<&str, usize> =
        ids.iter().zip(labels).map(|(id, &l)| (id.as_str(), l)).collect();
    order
        .iter()
        .map(|id| {
            index
                .get(id.as_str())
                .copied()
                .ok_or_else(|| Error::InvalidDataset(format!("node {id:?} has no label")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub nmi: f64,
    pub ari: f64,
    pub ncut: Option<f64>,
    pub restarts: Option<RestartSummary>,
}
