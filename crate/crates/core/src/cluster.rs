//! K-means with k-means++ seeding and best-of-restarts selection.

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::EmbeddingResult;
use crate::error::{Error, Result};

/// Cluster id per node, each below `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<usize>,
    k: usize,
}

impl Labeling {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidConfig(format!("label {bad} is not below k = {k}")));
        }
        Ok(Labeling { labels, k })
    }

    /// Uses `max label + 1` as `k`.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        Labeling { labels, k }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KMeansConfig {
    /// `None` means `d - 1` when clustering an embedding.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_restarts() -> usize {
    100
}
fn default_max_iters() -> usize {
    300
}
fn default_tol() -> f64 {
    1e-6
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            k: None,
            restarts: default_restarts(),
            max_iters: default_max_iters(),
            tol: default_tol(),
            seed: 0,
        }
    }
}

impl KMeansConfig {
    pub fn with_k(k: usize) -> Self {
        KMeansConfig {
            k: Some(k),
            ..Default::default()
        }
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One Lloyd run.
#[derive(Debug, Clone)]
pub struct KMeansRun {
    pub labeling: Labeling,
    pub inertia: f64,
    pub centroids: Array2<f64>,
    /// Inertia after each assignment step.
    pub history: Vec<f64>,
}

fn sq_dist(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// D² seeding: the first centroid is uniform, each next one is drawn with
/// probability proportional to the squared distance to the nearest chosen
/// centroid.
pub fn kmeans_pp_init<R: Rng + ?Sized>(points: ArrayView2<'_, f64>, k: usize, rng: &mut R) -> Result<Array2<f64>> {
    let n = points.nrows();
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    if n < k {
        return Err(Error::TooFewPoints { n, k });
    }
    let mut chosen = Vec::with_capacity(k);
    chosen.push(rng.random_range(0..n));
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| sq_dist(points.row(i), points.row(chosen[0])))
        .collect();
    while chosen.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 && total.is_finite() {
            WeightedIndex::new(&nearest)
                .expect("weights are finite and non-negative")
                .sample(rng)
        } else {
            // every point coincides with a centroid; pick among unchosen ones
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen.push(next);
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sq_dist(points.row(i), points.row(next)));
        }
    }
    Ok(points.select(Axis(0), &chosen))
}

/// Assigns every point to its nearest centroid (lowest index on ties).
fn assign(points: ArrayView2<'_, f64>, centroids: &Array2<f64>, labels: &mut [usize]) -> f64 {
    let mut inertia = 0.0;
    for (i, label) in labels.iter_mut().enumerate() {
        let mut best = (0, f64::INFINITY);
        for (c, centroid) in centroids.axis_iter(Axis(0)).enumerate() {
            let d = sq_dist(points.row(i), centroid);
            if d < best.1 {
                best = (c, d);
            }
        }
        *label = best.0;
        inertia += best.1;
    }
    inertia
}

/// Lloyd iterations from the given centroids.
pub fn lloyd(points: ArrayView2<'_, f64>, mut centroids: Array2<f64>, max_iters: usize, tol: f64) -> KMeansRun {
    let (n, d) = points.dim();
    let k = centroids.nrows();
    let mut labels = vec![0; n];
    let mut history = Vec::new();

    for _ in 0..max_iters.max(1) {
        history.push(assign(points, &centroids, &mut labels));

        let mut sums = Array2::<f64>::zeros((k, d));
        let mut counts = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            sums.row_mut(l).scaled_add(1.0, &points.row(i));
            counts[l] += 1;
        }
        let mut updated = centroids.clone();
        for c in 0..k {
            if counts[c] > 0 {
                let mut row = updated.row_mut(c);
                row.assign(&sums.row(c));
                row /= counts[c] as f64;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            // reseed on the point farthest from its own centroid
            let mut far = (0, -1.0);
            for (i, &l) in labels.iter().enumerate() {
                if counts[l] <= 1 {
                    continue;
                }
                let dist = sq_dist(points.row(i), updated.row(l));
                if dist > far.1 {
                    far = (i, dist);
                }
            }
            if far.1 >= 0.0 {
                counts[labels[far.0]] -= 1;
                labels[far.0] = c;
                counts[c] = 1;
                updated.row_mut(c).assign(&points.row(far.0));
            }
        }

        let shift = centroids
            .axis_iter(Axis(0))
            .zip(updated.axis_iter(Axis(0)))
            .map(|(a, b)| sq_dist(a, b).sqrt())
            .fold(0.0, f64::max);
        centroids = updated;
        if shift < tol {
            break;
        }
    }
    let inertia = assign(points, &centroids, &mut labels);
    history.push(inertia);
    KMeansRun {
        labeling: Labeling { labels, k },
        inertia,
        centroids,
        history,
    }
}

/// RNG for restart `index`: one ChaCha stream per restart of the same seed.
pub fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn resolve_k(config: &KMeansConfig) -> Result<usize> {
    config
        .k
        .ok_or_else(|| Error::InvalidConfig("k must be set for plain k-means".into()))
}

/// Every restart, in restart order.
pub fn kmeans_runs(points: ArrayView2<'_, f64>, config: &KMeansConfig) -> Result<Vec<KMeansRun>> {
    let k = resolve_k(config)?;
    if config.restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    if points.nrows() < k {
        return Err(Error::TooFewPoints { n: points.nrows(), k });
    }
    (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(config.seed, r);
            let init = kmeans_pp_init(points, k, &mut rng)?;
            Ok(lloyd(points, init, config.max_iters, config.tol))
        })
        .collect()
}

/// Index of the lowest-inertia run; earlier restarts win ties.
pub fn best_run(runs: &[KMeansRun]) -> usize {
    let mut best = 0;
    for (i, run) in runs.iter().enumerate().skip(1) {
        if run.inertia < runs[best].inertia {
            best = i;
        }
    }
    best
}

/// Best labeling over `config.restarts` seeded runs, and its inertia.
pub fn kmeans(points: ArrayView2<'_, f64>, config: &KMeansConfig) -> Result<(Labeling, f64)> {
    let mut runs = kmeans_runs(points, config)?;
    let run = runs.swap_remove(best_run(&runs));
    Ok((run.labeling, run.inertia))
}

/// `k` for an embedding of dimension `d`: explicit, or `d - 1`.
pub fn resolve_embedding_k(config: &KMeansConfig, d: usize) -> Result<usize> {
    match config.k {
        Some(k) => Ok(k),
        None if d >= 2 => Ok(d - 1),
        None => Err(Error::InvalidConfig(
            "default k = d - 1 needs d >= 2; pass k explicitly".into(),
        )),
    }
}

/// Clusters the rows of a node embedding.
pub fn cluster_embedding(result: &EmbeddingResult, config: &KMeansConfig) -> Result<Labeling> {
    cluster_rows(result.objects.view(), config).map(|(l, _)| l)
}

/// [`kmeans`] on embedding rows with the `d - 1` default for `k`.
pub fn cluster_rows(points: ArrayView2<'_, f64>, config: &KMeansConfig) -> Result<(Labeling, f64)> {
    let k = resolve_embedding_k(config, points.ncols())?;
    kmeans(
        points,
        &KMeansConfig {
            k: Some(k),
            ..config.clone()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn pp_init_with_k_equal_n_is_a_permutation() {
        let pts = array![[0.0, 0.0], [1.0, 0.0], [0.0, 3.0], [5.0, 5.0]];
        let mut rng = restart_rng(4, 0);
        let c = kmeans_pp_init(pts.view(), 4, &mut rng).unwrap();
        let mut rows: Vec<Vec<f64>> = c.axis_iter(Axis(0)).map(|r| r.to_vec()).collect();
        rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expected: Vec<Vec<f64>> = pts.axis_iter(Axis(0)).map(|r| r.to_vec()).collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(rows, expected);
    }

    #[test]
    fn pp_init_k1_and_errors() {
        let pts = array![[0.0], [1.0], [2.0]];
        let mut rng = restart_rng(0, 0);
        let c = kmeans_pp_init(pts.view(), 1, &mut rng).unwrap();
        assert_eq!(c.nrows(), 1);
        assert!(pts.axis_iter(Axis(0)).any(|r| r == c.row(0)));
        assert!(matches!(
            kmeans_pp_init(pts.view(), 4, &mut rng),
            Err(Error::TooFewPoints { n: 3, k: 4 })
        ));
    }

    #[test]
    fn pp_init_prefers_far_outlier() {
        // four points near the origin and one far away
        let pts = array![[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [0.1, 0.1], [50.0, 50.0]];
        let trials = 1000;
        let mut outlier_second = 0;
        let mut first_not_outlier = 0;
        for t in 0..trials {
            let mut rng = restart_rng(99, t);
            let c = kmeans_pp_init(pts.view(), 2, &mut rng).unwrap();
            if c.row(0) != pts.row(4) {
                first_not_outlier += 1;
                if c.row(1) == pts.row(4) {
                    outlier_second += 1;
                }
            }
        }
        let rate = outlier_second as f64 / first_not_outlier as f64;
        assert!(rate >= 0.9, "outlier chosen second in {rate} of trials");
    }

    #[test]
    fn identical_pairs() {
        let pts = array![[0.0, 0.0], [0.0, 0.0], [4.0, 4.0], [4.0, 4.0]];
        let (lab, inertia) = kmeans(pts.view(), &KMeansConfig::with_k(2).restarts(5)).unwrap();
        assert_eq!(inertia, 0.0);
        let l = lab.labels();
        assert_eq!(l[0], l[1]);
        assert_eq!(l[2], l[3]);
        assert_ne!(l[0], l[2]);
    }

    #[test]
    fn k1_inertia_is_total_scatter() {
        let pts = array![[0.0, 1.0], [2.0, 3.0], [4.0, -1.0], [1.0, 1.0]];
        let (lab, inertia) = kmeans(pts.view(), &KMeansConfig::with_k(1).restarts(3)).unwrap();
        assert!(lab.labels().iter().all(|&l| l == 0));
        // n times the per-point variance summed over coordinates
        let n = pts.nrows() as f64;
        let mean = pts.mean_axis(Axis(0)).unwrap();
        let var: f64 = pts
            .axis_iter(Axis(1))
            .zip(mean.iter())
            .map(|(col, m)| col.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n)
            .sum();
        assert!((inertia - var * n).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_split() {
        let pts = array![[0.0], [0.1], [10.0], [10.1]];
        let (lab, inertia) = kmeans(pts.view(), &KMeansConfig::with_k(2).restarts(10)).unwrap();
        // oracle: enumerate every 2-partition and take the cheapest
        let xs = [0.0, 0.1, 10.0, 10.1];
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << 4) - 1 {
            let cost = |side: bool| {
                let grp: Vec<f64> = (0..4).filter(|&i| ((mask >> i) & 1 == 1) == side).map(|i| xs[i]).collect();
                let m = grp.iter().sum::<f64>() / grp.len() as f64;
                grp.iter().map(|x| (x - m).powi(2)).sum::<f64>()
            };
            best = best.min(cost(true) + cost(false));
        }
        assert!((inertia - best).abs() < 1e-12);
        let l = lab.labels();
        assert_eq!(l[0], l[1]);
        assert_eq!(l[2], l[3]);
        assert_ne!(l[1], l[2]);
    }

    #[test]
    fn lloyd_inertia_never_increases() {
        let pts = Array2::from_shape_fn((60, 2), |(i, j)| ((i * 37 + j * 11) % 17) as f64 + (i / 20) as f64 * 9.0);
        for seed in 0..10 {
            let mut rng = restart_rng(seed, 0);
            let init = kmeans_pp_init(pts.view(), 4, &mut rng).unwrap();
            let run = lloyd(pts.view(), init, 300, 1e-9);
            for w in run.history.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "{:?}", run.history);
            }
        }
    }

    #[test]
    fn empty_cluster_is_reseeded() {
        let pts = array![[0.0], [1.0], [2.0], [10.0]];
        // second centroid far away gets no points in the first assignment
        let init = array![[1.0], [100.0]];
        let run = lloyd(pts.view(), init, 50, 1e-12);
        assert!(run.labeling.labels().contains(&1));
        assert!(run.inertia < 2.0 + 1e-12);
    }

    #[test]
    fn default_k_is_d_minus_one() {
        let cfg = KMeansConfig::default();
        assert_eq!(resolve_embedding_k(&cfg, 4).unwrap(), 3);
        assert!(resolve_embedding_k(&cfg, 1).is_err());
        assert_eq!(resolve_embedding_k(&KMeansConfig::with_k(3), 1).unwrap(), 3);
    }

    #[test]
    fn restarts_are_deterministic() {
        let pts = Array2::from_shape_fn((40, 3), |(i, j)| ((i * 7 + j * 3) % 11) as f64);
        let cfg = KMeansConfig::with_k(3).restarts(8).seed(5);
        assert_eq!(kmeans(pts.view(), &cfg).unwrap(), kmeans(pts.view(), &cfg).unwrap());
    }
}
