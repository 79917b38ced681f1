//! Planted-partition generator for multi-relational attributed graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cluster::Labeling;
use crate::error::{Error, Result};
use crate::graph::{AttributeTable, Dataset, Edge, RelationLayer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub n: usize,
    pub k: usize,
    #[serde(default = "default_relations")]
    pub num_relations: usize,
    #[serde(default = "default_p_in")]
    pub p_in: f64,
    #[serde(default = "default_p_out")]
    pub p_out: f64,
    #[serde(default = "default_attributes")]
    pub c: usize,
    #[serde(default = "default_noise")]
    pub attr_noise: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_relations() -> usize {
    2
}
fn default_p_in() -> f64 {
    0.3
}
fn default_p_out() -> f64 {
    0.01
}
fn default_attributes() -> usize {
    3
}
fn default_noise() -> f64 {
    0.1
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n: 300,
            k: 3,
            num_relations: default_relations(),
            p_in: default_p_in(),
            p_out: default_p_out(),
            c: default_attributes(),
            attr_noise: default_noise(),
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if self.k == 0 || self.k > self.n {
            return bad("k must satisfy 1 <= k <= n");
        }
        if !(0.0..=1.0).contains(&self.p_in) || !(0.0..=1.0).contains(&self.p_out) {
            return bad("edge probabilities must lie in [0, 1]");
        }
        if self.p_out > self.p_in {
            return bad("p_out > p_in");
        }
        if !(0.0..=1.0).contains(&self.attr_noise) {
            return bad("attr_noise must lie in [0, 1]");
        }
        if self.num_relations == 0 && self.c == 0 {
            return bad("need at least one relation or attribute");
        }
        Ok(())
    }
}

/// Block of node `i` when `n` nodes are split into `k` contiguous,
/// near-equal blocks.
pub fn block_of(i: usize, n: usize, k: usize) -> usize {
    i * k / n
}

/// Draws a dataset and its planted labels. Relations are sampled first, in
/// order, then attributes; all randomness comes from one seeded stream.
pub fn generate(spec: &SynthSpec) -> Result<(Dataset, Labeling)> {
    spec.validate()?;
    let n = spec.n;
    let labels: Vec<usize> = (0..n).map(|i| block_of(i, n, spec.k)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut layers = Vec::with_capacity(spec.num_relations);
    for r in 0..spec.num_relations {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let p = if labels[i] == labels[j] { spec.p_in } else { spec.p_out };
                if rng.random::<f64>() < p {
                    edges.push(Edge { i, j, w: 1.0 });
                }
            }
        }
        layers.push(RelationLayer::from_canonical(format!("r{r}"), edges)?);
    }

    let names: Vec<String> = (0..spec.c).map(|j| format!("a{j}")).collect();
    let mut rows = vec![Vec::with_capacity(spec.c); n];
    for _ in 0..spec.c {
        for (row, &block) in rows.iter_mut().zip(&labels) {
            let value = if rng.random::<f64>() < spec.attr_noise {
                rng.random_range(0..spec.k)
            } else {
                block
            };
            row.push(Some(format!("v{value}")));
        }
    }
    let attributes = AttributeTable::new(names, rows)?;
    let nodes = (0..n).map(|i| i.to_string()).collect();
    let dataset = Dataset::new(nodes, layers, attributes)?;
    Ok((dataset, Labeling::new(labels, spec.k)?))
}
