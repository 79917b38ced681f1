//! Partition agreement (NMI, ARI) and normalized cut.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Dataset;

/// Co-occurrence counts of two labelings.
///
/// Labels are compacted to dense row/column indices in order of first
/// appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<usize>>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    total: usize,
}

fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = HashMap::new();
    let ids = labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect();
    (ids, map.len())
}

impl ContingencyTable {
    pub fn new(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let (ra, r) = compact(a);
        let (rb, s) = compact(b);
        let mut counts = vec![vec![0usize; s]; r];
        for (&i, &j) in ra.iter().zip(&rb) {
            counts[i][j] += 1;
        }
        let row_sums = counts.iter().map(|row| row.iter().sum()).collect();
        let col_sums = (0..s).map(|j| counts.iter().map(|row| row[j]).sum()).collect();
        Ok(ContingencyTable {
            counts,
            row_sums,
            col_sums,
            total: a.len(),
        })
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

fn entropy(marginal: &[usize], n: f64) -> f64 {
    marginal
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information with arithmetic-mean normalization,
/// `2 I(a; b) / (H(a) + H(b))`, natural logarithms.
///
/// Two labelings that induce the same partition score exactly 1.
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    let t = ContingencyTable::new(a, b)?;
    let n = t.total as f64;
    let ha = entropy(&t.row_sums, n);
    let hb = entropy(&t.col_sums, n);
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    // same partition under renaming: exact 1 rather than a rounded ratio
    let bijective = t.counts.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, &c)| c == 0 || (c == t.row_sums[i] && c == t.col_sums[j]))
    });
    if bijective {
        return Ok(1.0);
    }
    let mut mi = 0.0;
    for (i, row) in t.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = c as f64;
            mi += c / n * (c * n / (t.row_sums[i] as f64 * t.col_sums[j] as f64)).ln();
        }
    }
    if mi <= 0.0 {
        return Ok(0.0);
    }
    Ok((2.0 * mi / (ha + hb)).min(1.0))
}

fn choose2(x: usize) -> u128 {
    let x = x as u128;
    x * x.saturating_sub(1) / 2
}

/// Adjusted Rand index (pair counting, chance-corrected).
///
/// When the index has no room above its expectation, which happens when both
/// labelings are all-singletons or both are a single cluster, the score is 1
/// for permutation-identical labelings and 0 otherwise.
pub fn ari(a: &[usize], b: &[usize]) -> Result<f64> {
    let t = ContingencyTable::new(a, b)?;
    let index: u128 = t.counts.iter().flatten().map(|&c| choose2(c)).sum();
    let sa: u128 = t.row_sums.iter().map(|&c| choose2(c)).sum();
    let sb: u128 = t.col_sums.iter().map(|&c| choose2(c)).sum();
    let pairs = choose2(t.total);

    if sa == sb && (sa == 0 || sa == pairs) {
        let identical = index == sa;
        return Ok(if identical { 1.0 } else { 0.0 });
    }
    // (index - sa*sb/P) / ((sa+sb)/2 - sa*sb/P), scaled by 2P to stay integral
    let (index, sa, sb, pairs) = (index as i128, sa as i128, sb as i128, pairs as i128);
    let num = 2 * pairs * index - 2 * sa * sb;
    let den = pairs * (sa + sb) - 2 * sa * sb;
    Ok(num as f64 / den as f64)
}

/// Normalized cut `sum_c cut(c, V \ c) / vol(c)` over the calibrated,
/// weight-aggregated graph. Volumes use absolute weights; clusters with zero
/// volume contribute nothing.
pub fn ncut(dataset: &Dataset, labels: &[usize]) -> Result<f64> {
    let n = dataset.num_nodes();
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: n,
        });
    }
    let alphas: Vec<f64> = dataset
        .layers()
        .iter()
        .map(|l| {
            let t = l.total_abs_weight();
            if t > 0.0 {
                1.0 / t
            } else {
                0.0
            }
        })
        .collect();
    let (ids, k) = compact(labels);
    let mut cut = vec![0.0; k];
    let mut vol = vec![0.0; k];
    for (layer, &alpha) in dataset.layers().iter().zip(&alphas) {
        for e in layer.edges() {
            let w = alpha * e.w;
            let (ci, cj) = (ids[e.i], ids[e.j]);
            vol[ci] += w.abs();
            vol[cj] += w.abs();
            if ci != cj {
                cut[ci] += w;
                cut[cj] += w;
            }
        }
    }
    Ok(cut
        .iter()
        .zip(&vol)
        .filter(|(_, &v)| v > 0.0)
        .map(|(c, v)| c / v)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RestartSummary {
    pub nmi_mean: f64,
    pub nmi_std: f64,
    pub ari_mean: f64,
    pub ari_std: f64,
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
