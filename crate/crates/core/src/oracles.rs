//! Dense reference solvers for small instances: Laplacian Eigenmaps,
//! Homogeneity Analysis and subspace comparison.
//!
//! Everything here is `O(n^3)` and refuses inputs above [`MAX_ORACLE_NODES`].

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array2, ArrayView2};

use crate::embed::{orthonormalize, update_category_coordinates};
use crate::error::{Error, Result};
use crate::graph::{encode_categories, AttributeTable, RelationLayer};

pub const MAX_ORACLE_NODES: usize = 200;

/// Column-orthonormal basis of a `d`-dimensional subspace of `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Array2<f64>,
}

impl Subspace {
    /// Orthonormalizes `columns`; fails if they are not linearly independent.
    pub fn from_columns(columns: ArrayView2<'_, f64>) -> Result<Self> {
        Ok(Subspace {
            basis: orthonormalize(columns)?,
        })
    }

    pub fn basis(&self) -> &Array2<f64> {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

fn to_dmatrix(a: ArrayView2<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

/// `1 - sigma_min(AᵀB)`: zero for identical subspaces, one when some
/// direction of one is orthogonal to the other.
pub fn principal_angle_distance(a: &Subspace, b: &Subspace) -> Result<f64> {
    if a.basis.dim() != b.basis.dim() {
        return Err(Error::ShapeMismatch(format!(
            "subspaces {:?} and {:?}",
            a.basis.dim(),
            b.basis.dim()
        )));
    }
    let cross = to_dmatrix(a.basis.t().dot(&b.basis).view());
    let sigma_min = cross
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok((1.0 - sigma_min).clamp(0.0, 1.0))
}

/// Eigenpairs sorted by ascending eigenvalue.
fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    (values, vectors)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn check_graph(layer: &RelationLayer, n: usize) -> Result<()> {
    if n > MAX_ORACLE_NODES {
        return Err(Error::Oracle(format!("n = {n} exceeds {MAX_ORACLE_NODES}")));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut components = n;
    for e in layer.edges() {
        if e.j >= n {
            return Err(Error::Oracle(format!("edge ({}, {}) out of range", e.i, e.j)));
        }
        if e.w < 0.0 {
            return Err(Error::Oracle("negative edge weight".into()));
        }
        let (a, b) = (find(&mut parent, e.i), find(&mut parent, e.j));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    if components != 1 {
        return Err(Error::Oracle(format!("graph has {components} connected components")));
    }
    Ok(())
}

/// Degrees and `D^{-1/2} L D^{-1/2}`.
fn normalized_laplacian(layer: &RelationLayer, n: usize) -> (Vec<f64>, DMatrix<f64>) {
    let mut w = DMatrix::zeros(n, n);
    for e in layer.edges() {
        w[(e.i, e.j)] += e.w;
        w[(e.j, e.i)] += e.w;
    }
    let deg: Vec<f64> = (0..n).map(|i| w.row(i).sum()).collect();
    let lap = DMatrix::from_fn(n, n, |i, j| {
        let l = if i == j { deg[i] - w[(i, j)] } else { -w[(i, j)] };
        l / (deg[i] * deg[j]).sqrt()
    });
    (deg, lap)
}

/// Eigenvalues of the normalized Laplacian in ascending order, the trivial
/// zero first. These are also the generalized eigenvalues of `L y = λ D y`.
pub fn normalized_laplacian_spectrum(layer: &RelationLayer, n: usize) -> Result<Vec<f64>> {
    check_graph(layer, n)?;
    Ok(sorted_eigen(normalized_laplacian(layer, n).1).0)
}

/// Span of the generalized eigenvectors `L y = λ D y` for the `d` smallest
/// eigenvalues after the trivial one.
pub fn laplacian_eigenmaps(layer: &RelationLayer, n: usize, d: usize) -> Result<Subspace> {
    check_graph(layer, n)?;
    if d == 0 || d >= n {
        return Err(Error::Oracle(format!("need 1 <= d < n, got d = {d}, n = {n}")));
    }
    let (deg, lap) = normalized_laplacian(layer, n);
    let (_, vectors) = sorted_eigen(lap);
    let y = Array2::from_shape_fn((n, d), |(i, l)| vectors[(i, l + 1)] / deg[i].sqrt());
    Subspace::from_columns(y.view())
}

/// Object scores and category quantifications of a homogeneity analysis.
#[derive(Debug, Clone)]
pub struct Homogeneity {
    pub scores: Subspace,
    /// `C × d`; each row is the centroid of its members' scores.
    pub quantifications: Array2<f64>,
    /// Nontrivial eigenvalues of the normalized indicator Gram matrix,
    /// descending. The first `d` belong to the returned scores.
    pub eigenvalues: Vec<f64>,
}

/// Dominant nontrivial singular subspace of the normalized indicator matrix
/// `D_r^{-1/2} G T^{-1/2}`, back-transformed to object scores.
///
/// `G` is the `n × C` node-category indicator, `D_r` the per-node count of
/// observed attributes and `T` the category sizes. The scores are the fixed
/// point of alternating "object = mean of its categories" and
/// "category = centroid of its objects" with orthonormalization.
pub fn homogeneity_analysis(table: &AttributeTable, d: usize) -> Result<Homogeneity> {
    let n = table.num_rows();
    if n > MAX_ORACLE_NODES {
        return Err(Error::Oracle(format!("n = {n} exceeds {MAX_ORACLE_NODES}")));
    }
    if d == 0 || d >= n {
        return Err(Error::Oracle(format!("need 1 <= d < n, got d = {d}, n = {n}")));
    }
    let enc = encode_categories(table);
    let c = enc.num_categories();
    assert!(enc.tot().iter().all(|&t| t > 0), "encoded category without members");

    let mut rows = vec![0.0; n];
    for (i, r) in rows.iter_mut().enumerate() {
        *r = enc.memberships(i).iter().flatten().count() as f64;
        if *r == 0.0 {
            return Err(Error::Oracle(format!("row {i} has no observed attribute")));
        }
    }
    let z = DMatrix::from_fn(n, c, |i, k| {
        if enc.memberships(i).contains(&Some(k)) {
            1.0 / (rows[i] * enc.tot()[k] as f64).sqrt()
        } else {
            0.0
        }
    });
    let mut gram = &z * z.transpose();
    // remove the trivial eigenvector (eigenvalue 1)
    let total: f64 = rows.iter().sum();
    let u0 = DMatrix::from_fn(n, 1, |i, _| (rows[i] / total).sqrt());
    gram -= &u0 * u0.transpose();

    let (values, vectors) = sorted_eigen(gram);
    let top: Vec<usize> = (0..n).rev().collect();
    let y = Array2::from_shape_fn((n, d), |(i, l)| vectors[(i, top[l])] / rows[i].sqrt());
    let scores = Subspace::from_columns(y.view())?;
    let quantifications = update_category_coordinates(scores.basis().view(), &enc);
    Ok(Homogeneity {
        scores,
        quantifications,
        eigenvalues: top.iter().take(n - 1).map(|&k| values[k]).collect(),
    })
}
