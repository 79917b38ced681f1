//! Compare modality weighting policies on a dataset where one relation layer
//! is noise and carries far more weight than the informative one.
//!
//! cargo run --release --example weighting_ablation

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectralmix::metrics::nmi;
use spectralmix::{cluster_embedding, embed, generate, Dataset, EmbedConfig, KMeansConfig, RelationLayer, SynthSpec, Weighting};

fn main() -> spectralmix::Result<()> {
    let spec = SynthSpec {
        n: 300,
        k: 3,
        num_relations: 1,
        p_in: 0.2,
        p_out: 0.02,
        c: 2,
        attr_noise: 0.4,
        seed: 9,
    };
    let (base, truth) = generate(&spec)?;

    // dense random layer with large weights
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut edges = Vec::new();
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            if rng.random::<f64>() < 0.1 {
                edges.push((i, j, 10.0));
            }
        }
    }
    let mut layers = base.layers().to_vec();
    layers.push(RelationLayer::new("noise", spec.n, edges)?);
    let dataset = Dataset::new(base.nodes().to_vec(), layers, base.attributes().clone())?;

    let policies = [
        ("calibrated", Weighting::Calibrated),
        ("uniform", Weighting::Uniform),
        ("uniform-attrs", Weighting::UniformAttrs),
        ("uniform-relations", Weighting::UniformRelations),
        (
            "explicit (noise off)",
            Weighting::Explicit {
                relations: vec![1.0, 0.0],
                attributes: vec![1.0, 1.0],
            },
        ),
    ];
    for (name, weighting) in policies {
        let config = EmbedConfig::new(3).with_seed(4).with_max_iterations(500).with_weighting(weighting);
        let result = embed(&dataset, &config)?;
        let labels = cluster_embedding(&result, &KMeansConfig::with_k(3).restarts(20))?;
        println!(
            "{name:<22} iterations {:>3}  NMI {:.3}",
            result.iterations_run,
            nmi(truth.labels(), labels.labels())?
        );
    }
    Ok(())
}
