//! k-means with restarts on a point cloud, scored with NMI and ARI.
//!
//! cargo run --release --example clustering_metrics

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use spectralmix::cluster::{best_run, kmeans_runs};
use spectralmix::metrics::{ari, mean_std, nmi};
use spectralmix::KMeansConfig;

fn main() -> spectralmix::Result<()> {
    let centres = [(0.0, 0.0), (3.0, 0.0), (1.5, 2.5)];
    let per = 100;
    let noise = Normal::new(0.0, 0.8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut points = Array2::zeros((centres.len() * per, 2));
    let mut truth = Vec::new();
    for (c, &(x, y)) in centres.iter().enumerate() {
        for i in 0..per {
            let row = c * per + i;
            points[(row, 0)] = x + noise.sample(&mut rng);
            points[(row, 1)] = y + noise.sample(&mut rng);
            truth.push(c);
        }
    }

    let runs = kmeans_runs(points.view(), &KMeansConfig::with_k(3).restarts(50).seed(1))?;
    let nmis: Vec<f64> = runs.iter().map(|r| nmi(&truth, r.labeling.labels())).collect::<Result<_, _>>()?;
    let aris: Vec<f64> = runs.iter().map(|r| ari(&truth, r.labeling.labels())).collect::<Result<_, _>>()?;
    let best = &runs[best_run(&runs)];
    let (nm, ns) = mean_std(&nmis);
    let (am, as_) = mean_std(&aris);
    println!("best inertia {:.3}", best.inertia);
    println!("best run: NMI {:.4} ARI {:.4}", nmi(&truth, best.labeling.labels())?, ari(&truth, best.labeling.labels())?);
    println!("over {} restarts: NMI {nm:.4} ± {ns:.4}, ARI {am:.4} ± {as_:.4}", runs.len());
    Ok(())
}
