use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Dataset;

/// How the per-modality factors are chosen.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy")]
pub enum Weighting {
    /// Each relation layer and each attribute contributes total weight 1.
    #[default]
    Calibrated,
    /// Every factor is 1.
    Uniform,
    /// Attribute factors set to 1, relation factors calibrated.
    UniformAttrs,
    /// Relation factors set to 1, attribute factors calibrated.
    UniformRelations,
    /// Caller-provided factors, one per layer and one per attribute.
    Explicit {
        relations: Vec<f64>,
        attributes: Vec<f64>,
    },
}

/// Factors `alpha_r` (per layer), `alpha_j` (per attribute) and the per-node
/// normalizer they induce.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModalityWeights {
    pub relations: Vec<f64>,
    pub attributes: Vec<f64>,
    /// `S_i = sum_r alpha_r sum_{p in N_r(i)} |w_ip| + sum_{j observed} alpha_j`.
    pub node_norm: Vec<f64>,
}

fn reciprocal_or_zero(x: f64) -> f64 {
    if x > 0.0 {
        1.0 / x
    } else {
        0.0
    }
}

pub fn calibrate_weights(dataset: &Dataset, policy: &Weighting) -> Result<ModalityWeights> {
    let layers = dataset.layers();
    let table = dataset.attributes();
    let c = table.num_attributes();

    let calibrated_r = || -> Vec<f64> {
        layers
            .iter()
            .map(|l| reciprocal_or_zero(l.total_abs_weight()))
            .collect()
    };
    let calibrated_a =
        || -> Vec<f64> { (0..c).map(|j| reciprocal_or_zero(table.observed_count(j) as f64)).collect() };

    let (relations, attributes) = match policy {
        Weighting::Calibrated => (calibrated_r(), calibrated_a()),
        Weighting::Uniform => (vec![1.0; layers.len()], vec![1.0; c]),
        Weighting::UniformAttrs => (calibrated_r(), vec![1.0; c]),
        Weighting::UniformRelations => (vec![1.0; layers.len()], calibrated_a()),
        Weighting::Explicit {
            relations,
            attributes,
        } => {
            if relations.len() != layers.len() {
                return Err(Error::InvalidConfig(format!(
                    "expected {} relation weights, got {}",
                    layers.len(),
                    relations.len()
                )));
            }
            if attributes.len() != c {
                return Err(Error::InvalidConfig(format!(
                    "expected {c} attribute weights, got {}",
                    attributes.len()
                )));
            }
            if let Some(a) = relations
                .iter()
                .chain(attributes)
                .find(|a| !a.is_finite() || **a < 0.0)
            {
                return Err(Error::InvalidConfig(format!(
                    "modality weights must be finite and non-negative, got {a}"
                )));
            }
            (relations.clone(), attributes.clone())
        }
    };

    let mut node_norm = vec![0.0; dataset.num_nodes()];
    for (layer, &alpha) in layers.iter().zip(&relations) {
        for e in layer.edges() {
            let v = alpha * e.w.abs();
            node_norm[e.i] += v;
            node_norm[e.j] += v;
        }
    }
    for (i, row) in table.rows().iter().enumerate() {
        for (cell, &alpha) in row.iter().zip(&attributes) {
            if cell.is_some() {
                node_norm[i] += alpha;
            }
        }
    }
    if let Some(i) = node_norm.iter().position(|&s| !(s > 0.0)) {
        return Err(Error::IsolatedNode {
            node: dataset.nodes()[i].clone(),
        });
    }

    Ok(ModalityWeights {
        relations,
        attributes,
        node_norm,
    })
}
