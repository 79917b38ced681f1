use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    create_dir, embed_to_dir, read_json, score_restarts, write_generated, write_json, EmbedSummary, SweepPoint,
    EXIT_NOT_CONVERGED, EXIT_OK,
};
use crate::cluster::{kmeans, resolve_embedding_k, KMeansConfig};
use crate::embed::EmbedConfig;
use crate::error::{Error, Result};
use crate::graph::{load_manifest, DatasetStats};
use crate::io::{self, MetricsReport};
use crate::metrics::ncut;
use crate::synth::SynthSpec;

/// Everything one `pipeline` run needs. Relative paths are resolved against
/// the directory of the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Existing dataset; exclusive with `synth`.
    #[serde(default)]
    pub manifest: Option<PathBuf>,
    /// Generate a dataset into `<out>/data` instead of loading one.
    #[serde(default)]
    pub synth: Option<SynthSpec>,
    /// Ground-truth labels TSV. Defaults to the generated labels with `synth`.
    #[serde(default)]
    pub truth: Option<PathBuf>,
    pub out: PathBuf,
    pub embed: EmbedConfig,
    #[serde(default)]
    pub kmeans: KMeansConfig,
    /// Inclusive `[a, b]` range of k for an NCut sweep.
    #[serde(default)]
    pub k_sweep: Option<(usize, usize)>,
}

#[derive(Debug, Serialize)]
struct ClusterSummary {
    k: usize,
    restarts: usize,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct PipelineReport {
    dataset: DatasetStats,
    embedding: EmbedSummary,
    clustering: ClusterSummary,
    metrics: Option<MetricsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_sweep: Option<Vec<SweepPoint>>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Runs the full pipeline described by the JSON file at `config_path`.
pub fn run_pipeline(config_path: &Path, record_time: bool) -> Result<u8> {
    let config: RunConfig = read_json(config_path)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let out = resolve(base, &config.out);
    create_dir(&out)?;

    let (dataset, truth_path) = match (&config.manifest, &config.synth) {
        (Some(m), None) => (load_manifest(resolve(base, m))?, config.truth.as_ref().map(|t| resolve(base, t))),
        (None, Some(spec)) => {
            let data = out.join("data");
            let (dataset, _) = write_generated(spec, &data)?;
            let truth = config.truth.as_ref().map(|t| resolve(base, t)).unwrap_or(data.join("labels.tsv"));
            (dataset, Some(truth))
        }
        _ => {
            return Err(Error::InvalidConfig(
                "config needs exactly one of \"manifest\" and \"synth\"".into(),
            ))
        }
    };
    let truth = truth_path
        .map(|p| {
            let (ids, labels) = io::read_labels(&p)?;
            io::align_labels(dataset.nodes(), &ids, &labels)
        })
        .transpose()?;

    let embed_config: &EmbedConfig = &config.embed;
    let (result, summary) = embed_to_dir(&dataset, embed_config, &out, record_time)?;

    let points = result.objects.view();
    let k = resolve_embedding_k(&config.kmeans, points.ncols())?;
    let (labels, metrics) = match &truth {
        Some(t) => {
            let (labels, report) = score_restarts(points, &config.kmeans, t, Some(&dataset))?;
            (labels, Some(report))
        }
        None => {
            let kc = KMeansConfig { k: Some(k), ..config.kmeans.clone() };
            (kmeans(points, &kc)?.0.labels().to_vec(), None)
        }
    };
    io::write_file(out.join("labels.tsv"), |w| io::write_labels(w, dataset.nodes(), &labels))?;

    let k_sweep = match config.k_sweep {
        Some((a, b)) if a >= 1 && a <= b => {
            let mut sweep = Vec::new();
            for k in a..=b {
                let kc = KMeansConfig { k: Some(k), ..config.kmeans.clone() };
                let (labeling, _) = kmeans(points, &kc)?;
                sweep.push(SweepPoint {
                    k,
                    ncut: ncut(&dataset, labeling.labels())?,
                });
            }
            Some(sweep)
        }
        Some(_) => return Err(Error::InvalidConfig("k_sweep needs 1 <= a <= b".into())),
        None => None,
    };

    let report = PipelineReport {
        dataset: dataset.stats(),
        clustering: ClusterSummary {
            k,
            restarts: config.kmeans.restarts,
            seed: config.kmeans.seed,
        },
        embedding: summary,
        metrics,
        k_sweep,
    };
    write_json(&out.join("report.json"), &report)?;
    if let Some(m) = &report.metrics {
        println!("nmi={} ari={}", m.nmi, m.ari);
    }
    Ok(if result.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}
