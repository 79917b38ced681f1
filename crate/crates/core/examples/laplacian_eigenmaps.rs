//! With a single connected layer and no attributes the embedding spans the
//! same subspace as Laplacian eigenmaps.
//!
//! cargo run --release --example laplacian_eigenmaps

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectralmix::oracles::{laplacian_eigenmaps, principal_angle_distance, Subspace};
use spectralmix::{embed, AttributeTable, Dataset, EmbedConfig, RelationLayer};

fn main() -> spectralmix::Result<()> {
    // a path for connectivity plus random chords; generic weights keep the
    // low end of the spectrum simple
    let n = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut edges: Vec<(usize, usize, f64)> = (1..n).map(|i| (i - 1, i, rng.random_range(0.5..2.0))).collect();
    for i in 0..n {
        for j in i + 2..n {
            if rng.random::<f64>() < 0.08 {
                edges.push((i, j, rng.random_range(0.5..2.0)));
            }
        }
    }
    let layer = RelationLayer::new("g", n, edges)?;
    let ids = (0..n).map(|i| format!("v{i}")).collect();
    let dataset = Dataset::new(ids, vec![layer.clone()], AttributeTable::empty(n))?;

    for d in 1..=3 {
        let config = EmbedConfig::new(d).with_epsilon(1e-14).with_max_iterations(50_000);
        let result = embed(&dataset, &config)?;
        let ours = Subspace::from_columns(result.objects.view())?;
        let reference = laplacian_eigenmaps(&layer, n, d)?;
        println!(
            "d = {d}: {} iterations, subspace distance {:.2e}",
            result.iterations_run,
            principal_angle_distance(&ours, &reference)?
        );
    }
    Ok(())
}
