use ndarray::{Array2, ArrayView2, ArrayViewMut1, Axis};
use rayon::prelude::*;

use super::ModalityWeights;
use crate::graph::{CategoryEncoding, Dataset};

/// Row count from which the per-node update runs on the rayon pool.
const PARALLEL_MIN_ROWS: usize = 2048;

/// Precomputed neighbour lists for the per-node update.
///
/// Each row `i` holds `(p, alpha_r * w_ip)` for every incident edge over all
/// layers, in layer order then edge order, and `(category, alpha_j)` for every
/// observed attribute.
#[derive(Debug, Clone)]
pub(crate) struct Operator {
    offsets: Vec<usize>,
    neighbours: Vec<(usize, f64)>,
    attr_offsets: Vec<usize>,
    attrs: Vec<(usize, f64)>,
    norm: Vec<f64>,
}

impl Operator {
    pub(crate) fn new(dataset: &Dataset, enc: &CategoryEncoding, weights: &ModalityWeights) -> Self {
        let n = dataset.num_nodes();
        let mut degree = vec![0usize; n];
        for layer in dataset.layers() {
            for e in layer.edges() {
                degree[e.i] += 1;
                degree[e.j] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbours = vec![(0usize, 0.0f64); offsets[n]];
        for (layer, &alpha) in dataset.layers().iter().zip(&weights.relations) {
            for e in layer.edges() {
                let v = alpha * e.w;
                neighbours[cursor[e.i]] = (e.j, v);
                cursor[e.i] += 1;
                neighbours[cursor[e.j]] = (e.i, v);
                cursor[e.j] += 1;
            }
        }

        let mut attr_offsets = Vec::with_capacity(n + 1);
        attr_offsets.push(0);
        let mut attrs = Vec::new();
        for i in 0..n {
            for (j, cat) in enc.memberships(i).iter().enumerate() {
                if let Some(cat) = cat {
                    attrs.push((*cat, weights.attributes[j]));
                }
            }
            attr_offsets.push(attrs.len());
        }

        Operator {
            offsets,
            neighbours,
            attr_offsets,
            attrs,
            norm: weights.node_norm.clone(),
        }
    }

    fn row_into(&self, i: usize, objects: ArrayView2<'_, f64>, categories: ArrayView2<'_, f64>, mut out: ArrayViewMut1<'_, f64>) {
        out.fill(0.0);
        for &(p, a) in &self.neighbours[self.offsets[i]..self.offsets[i + 1]] {
            out.scaled_add(a, &objects.row(p));
        }
        for &(cat, a) in &self.attrs[self.attr_offsets[i]..self.attr_offsets[i + 1]] {
            out.scaled_add(a, &categories.row(cat));
        }
        out /= self.norm[i];
    }

    /// Weighted neighbour mean of every row, read from `objects` and
    /// `categories` as given.
    pub(crate) fn apply(&self, objects: ArrayView2<'_, f64>, categories: ArrayView2<'_, f64>) -> Array2<f64> {
        let mut out = Array2::zeros(objects.raw_dim());
        if objects.nrows() >= PARALLEL_MIN_ROWS {
            out.axis_iter_mut(Axis(0))
                .into_par_iter()
                .enumerate()
                .for_each(|(i, row)| self.row_into(i, objects, categories, row));
        } else {
            for (i, row) in out.axis_iter_mut(Axis(0)).enumerate() {
                self.row_into(i, objects, categories, row);
            }
        }
        out
    }

    pub(crate) fn node_norm(&self) -> &[f64] {
        &self.norm
    }
}

/// One synchronous object-coordinate update.
///
/// Row `i` becomes
/// `(sum_r alpha_r sum_p w_ip o_p + sum_j alpha_j m_{cat(i,j)}) / S_i`,
/// with every term read from the previous `objects` and `categories`. The
/// result is not orthonormalized.
pub fn update_object_coordinates(
    objects: ArrayView2<'_, f64>,
    categories: ArrayView2<'_, f64>,
    dataset: &Dataset,
    enc: &CategoryEncoding,
    weights: &ModalityWeights,
) -> Array2<f64> {
    Operator::new(dataset, enc, weights).apply(objects, categories)
}

/// Each category row becomes the centroid of its members' rows; empty
/// categories get a zero row.
pub fn update_category_coordinates(objects: ArrayView2<'_, f64>, enc: &CategoryEncoding) -> Array2<f64> {
    let d = objects.ncols();
    let mut out = Array2::zeros((enc.num_categories(), d));
    for (i, row) in objects.axis_iter(Axis(0)).enumerate() {
        for cat in enc.memberships(i).iter().flatten() {
            out.row_mut(*cat).scaled_add(1.0, &row);
        }
    }
    for (mut row, &tot) in out.axis_iter_mut(Axis(0)).zip(enc.tot()) {
        if tot > 0 {
            row /= tot as f64;
        }
    }
    out
}

fn sq_dist(a: ndarray::ArrayView1<'_, f64>, b: ndarray::ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Weighted sum of squared distances over all graph edges (each undirected
/// edge once) and all object-category links.
pub fn objective(
    objects: ArrayView2<'_, f64>,
    categories: ArrayView2<'_, f64>,
    dataset: &Dataset,
    enc: &CategoryEncoding,
    weights: &ModalityWeights,
) -> f64 {
    let mut graph = 0.0;
    for (layer, &alpha) in dataset.layers().iter().zip(&weights.relations) {
        let s: f64 = layer
            .edges()
            .iter()
            .map(|e| e.w * sq_dist(objects.row(e.i), objects.row(e.j)))
            .sum();
        graph += alpha * s;
    }
    let mut attr = 0.0;
    for i in 0..dataset.num_nodes() {
        for (j, cat) in enc.memberships(i).iter().enumerate() {
            if let Some(cat) = cat {
                attr += weights.attributes[j] * sq_dist(objects.row(i), categories.row(*cat));
            }
        }
    }
    graph + attr
}
