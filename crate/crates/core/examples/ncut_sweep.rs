//! Without ground truth, scan k and report the normalized cut of each
//! clustering.
//!
//! cargo run --release --example ncut_sweep

use spectralmix::metrics::ncut;
use spectralmix::{cluster_embedding, embed, generate, EmbedConfig, KMeansConfig, SynthSpec};

fn main() -> spectralmix::Result<()> {
    let (dataset, _) = generate(&SynthSpec {
        n: 400,
        k: 4,
        num_relations: 2,
        p_in: 0.15,
        p_out: 0.01,
        seed: 2,
        ..Default::default()
    })?;
    let result = embed(&dataset, &EmbedConfig::new(5).with_seed(0))?;
    for k in 2..=7 {
        let labels = cluster_embedding(&result, &KMeansConfig::with_k(k).restarts(20))?;
        println!("k = {k}: NCut = {:.4}", ncut(&dataset, labels.labels())?);
    }
    Ok(())
}
