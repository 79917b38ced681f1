//! Joint embedding of nodes and attribute categories.
//!
//! Minimizes the weighted sum of squared distances between linked nodes and
//! between every node and the category it takes under each attribute, over
//! column-orthonormal node coordinates `O` (`n × d`) and free category
//! coordinates `M` (`C × d`).
//!
//! Each iteration of [`embed`]:
//!
//! 1. moves every node halfway towards the weighted mean of its graph
//!    neighbours and its categories ([`update_object_coordinates`]),
//! 2. removes the `S`-weighted column means, which suppresses the constant
//!    solution,
//! 3. re-orthonormalizes the columns with modified Gram-Schmidt,
//! 4. moves every category to the centroid of its members,
//! 5. evaluates the objective.
//!
//! The loop stops once two consecutive objective values differ by less than
//! `epsilon`, or after `max_iterations`.

mod ortho;
mod update;
mod weights;

pub use ortho::{orthonormality_error, orthonormalize, RANK_TOLERANCE};
pub use update::{objective, update_category_coordinates, update_object_coordinates};
pub use weights::{calibrate_weights, ModalityWeights, Weighting};

use ndarray::{Array2, ArrayView2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Dataset;
use update::Operator;

/// `n × d` node coordinates.
pub type ObjectCoords = Array2<f64>;
/// `C × d` category coordinates.
pub type CategoryCoords = Array2<f64>;

pub const DEFAULT_EPSILON: f64 = 1e-4;
pub const DEFAULT_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedConfig {
    pub d: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub weighting: Weighting,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_max_iterations() -> usize {
    DEFAULT_MAX_ITERATIONS
}

impl EmbedConfig {
    pub fn new(d: usize) -> Self {
        EmbedConfig {
            d,
            epsilon: DEFAULT_EPSILON,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            seed: 0,
            weighting: Weighting::Calibrated,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_weighting(mut self, weighting: Weighting) -> Self {
        self.weighting = weighting;
        self
    }

    /// Checks the config against a dataset with `n` nodes.
    ///
    /// `d` must be below `n`: centering confines the columns to an
    /// `(n - 1)`-dimensional subspace.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidConfig("d must be at least 1".into()));
        }
        if self.d >= n {
            return Err(Error::InvalidConfig(format!(
                "d = {} must be smaller than the number of nodes ({n})",
                self.d
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingResult {
    pub objects: ObjectCoords,
    pub categories: CategoryCoords,
    /// Objective at initialization followed by one value per iteration.
    pub objective_trace: Vec<f64>,
    pub iterations_run: usize,
    pub converged: bool,
    pub weights: ModalityWeights,
}

impl EmbeddingResult {
    pub fn final_objective(&self) -> f64 {
        *self.objective_trace.last().expect("trace holds the initial value")
    }

    pub fn dim(&self) -> usize {
        self.objects.ncols()
    }
}

/// Seeded standard-normal `n × d` matrix with orthonormal columns.
pub fn init_coordinates(n: usize, d: usize, seed: u64) -> Result<ObjectCoords> {
    if d == 0 || d > n {
        return Err(Error::InvalidConfig(format!(
            "cannot draw {d} orthonormal columns in dimension {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = Array2::from_shape_simple_fn((n, d), || StandardNormal.sample(&mut rng));
    orthonormalize(raw.view())
}

/// Subtracts the `weights`-weighted mean from every column.
fn center_columns(matrix: &mut Array2<f64>, weights: &[f64]) {
    let total: f64 = weights.iter().sum();
    let mut means = vec![0.0; matrix.ncols()];
    for (row, &w) in matrix.axis_iter(Axis(0)).zip(weights) {
        for (m, x) in means.iter_mut().zip(row) {
            *m += w * x;
        }
    }
    means.iter_mut().for_each(|m| *m /= total);
    for mut row in matrix.axis_iter_mut(Axis(0)) {
        for (x, m) in row.iter_mut().zip(&means) {
            *x -= m;
        }
    }
}

/// Runs the alternating updates from a seeded random start.
pub fn embed(dataset: &Dataset, config: &EmbedConfig) -> Result<EmbeddingResult> {
    config.validate(dataset.num_nodes())?;
    let init = init_coordinates(dataset.num_nodes(), config.d, config.seed)?;
    embed_from(dataset, config, init)
}

/// Runs the alternating updates from caller-provided starting coordinates.
/// `config.seed` is ignored.
pub fn embed_from(dataset: &Dataset, config: &EmbedConfig, init: ObjectCoords) -> Result<EmbeddingResult> {
    embed_observed(dataset, config, init, |_| {})
}

/// State handed to the observer of [`embed_observed`] after every iteration.
#[derive(Debug)]
pub struct Iteration<'a> {
    /// 1-based iteration number.
    pub index: usize,
    pub objects: &'a ObjectCoords,
    pub categories: &'a CategoryCoords,
    pub objective: f64,
}

/// [`embed_from`] that calls `observer` after each iteration.
pub fn embed_observed(
    dataset: &Dataset,
    config: &EmbedConfig,
    init: ObjectCoords,
    mut observer: impl FnMut(&Iteration<'_>),
) -> Result<EmbeddingResult> {
    let n = dataset.num_nodes();
    config.validate(n)?;
    if init.dim() != (n, config.d) {
        return Err(Error::ShapeMismatch(format!(
            "initial coordinates are {:?}, expected ({n}, {})",
            init.dim(),
            config.d
        )));
    }
    let weights = calibrate_weights(dataset, &config.weighting)?;
    let enc = dataset.encode();
    let op = Operator::new(dataset, &enc, &weights);

    let mut objects = init;
    let mut categories = update_category_coordinates(objects.view(), &enc);
    let mut trace = vec![objective(objects.view(), categories.view(), dataset, &enc, &weights)];
    let mut converged = false;
    let mut iterations_run = 0;

    for t in 1..=config.max_iterations {
        let next = step(&op, objects.view(), categories.view()).map_err(|e| match e {
            Error::RankDeficient { column, .. } => Error::RankDeficient {
                column,
                iteration: Some(t),
            },
            other => other,
        })?;
        objects = next;
        categories = update_category_coordinates(objects.view(), &enc);
        let f = objective(objects.view(), categories.view(), dataset, &enc, &weights);
        observer(&Iteration {
            index: t,
            objects: &objects,
            categories: &categories,
            objective: f,
        });
        let prev = *trace.last().unwrap();
        trace.push(f);
        iterations_run = t;
        if (prev - f).abs() < config.epsilon {
            converged = true;
            break;
        }
    }

    Ok(EmbeddingResult {
        objects,
        categories,
        objective_trace: trace,
        iterations_run,
        converged,
        weights,
    })
}

/// Damped update, centering and orthonormalization.
fn step(op: &Operator, objects: ArrayView2<'_, f64>, categories: ArrayView2<'_, f64>) -> Result<ObjectCoords> {
    let mut next = op.apply(objects, categories);
    next += &objects;
    next *= 0.5;
    center_columns(&mut next, op.node_norm());
    orthonormalize(next.view())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{AttributeTable, RelationLayer};

    fn path(n: usize) -> Dataset {
        let layer = RelationLayer::new("p", n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap();
        Dataset::new(
            (0..n).map(|i| i.to_string()).collect(),
            vec![layer],
            AttributeTable::empty(n),
        )
        .unwrap()
    }

    #[test]
    fn init_is_deterministic_and_orthonormal() {
        let a = init_coordinates(4, 2, 7).unwrap();
        let b = init_coordinates(4, 2, 7).unwrap();
        assert_eq!(a, b);
        assert!(orthonormality_error(a.view()) <= 1e-8);
        assert_ne!(a, init_coordinates(4, 2, 8).unwrap());
        assert!(init_coordinates(3, 4, 0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(EmbedConfig::new(0).validate(5).is_err());
        assert!(EmbedConfig::new(5).validate(5).is_err());
        assert!(EmbedConfig::new(2).with_epsilon(0.0).validate(5).is_err());
        assert!(EmbedConfig::new(2).with_max_iterations(0).validate(5).is_err());
        assert!(EmbedConfig::new(4).validate(5).is_ok());
    }

    #[test]
    fn trace_starts_with_initial_objective() {
        let ds = path(12);
        let res = embed(&ds, &EmbedConfig::new(2).with_seed(3)).unwrap();
        assert_eq!(res.objective_trace.len(), res.iterations_run + 1);
        assert!(res.final_objective() < res.objective_trace[0]);
        assert!(orthonormality_error(res.objects.view()) <= 1e-8);
    }

    #[test]
    fn columns_are_centered() {
        let ds = path(10);
        let res = embed(&ds, &EmbedConfig::new(3).with_seed(1)).unwrap();
        let s = &res.weights.node_norm;
        for col in res.objects.axis_iter(Axis(1)) {
            let m: f64 = col.iter().zip(s).map(|(x, w)| x * w).sum();
            assert!(m.abs() < 1e-12);
        }
    }

    #[test]
    fn stops_at_max_iterations() {
        let ds = path(30);
        let res = embed(&ds, &EmbedConfig::new(3).with_epsilon(1e-300).with_max_iterations(5)).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations_run, 5);
        assert_eq!(res.objective_trace.len(), 6);
    }

    #[test]
    fn isolated_node_fails() {
        let layer = RelationLayer::new("r", 4, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let ds = Dataset::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![layer],
            AttributeTable::empty(4),
        )
        .unwrap();
        assert!(matches!(
            embed(&ds, &EmbedConfig::new(1)),
            Err(Error::IsolatedNode { .. })
        ));
    }

    #[test]
    fn init_shape_is_checked() {
        let ds = path(6);
        let err = embed_from(&ds, &EmbedConfig::new(2), Array2::zeros((6, 3))).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));
    }

    #[test]
    fn degenerate_start_reports_iteration() {
        let ds = path(6);
        let mut init = Array2::zeros((6, 2));
        init.column_mut(0).fill(1.0);
        init[[0, 1]] = 1.0;
        // the constant column vanishes after centering
        match embed_from(&ds, &EmbedConfig::new(2), init) {
            Err(Error::RankDeficient { column, iteration }) => {
                assert_eq!(column, 0);
                assert_eq!(iteration, Some(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
