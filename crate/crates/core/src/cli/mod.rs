//! Command-line front end. The `spectralmix` binary only calls [`main`].
//!
//! Exit codes: 0 success, 2 bad input (including unknown flags), 3 the
//! embedding hit `max_iterations` without converging. Outputs are written in
//! the non-converged case too.

mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cluster::{kmeans_runs, best_run, resolve_embedding_k, KMeansConfig};
use crate::embed::{embed, EmbedConfig, EmbeddingResult, Weighting};
use crate::error::{Error, Result};
use crate::graph::{load_manifest, write_dataset, Dataset};
use crate::io::{self, MetricsReport};
use crate::metrics::{ari, mean_std, ncut, nmi, RestartSummary};
use crate::synth::{generate, SynthSpec};

pub use pipeline::{run_pipeline, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "spectralmix", version, about = "Spectral embedding and clustering of attributed multi-relational graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a planted-partition dataset with ground-truth labels.
    Gen(GenArgs),
    /// Embed a dataset described by a manifest.
    Embed(EmbedArgs),
    /// Run k-means on the rows of an embedding.
    Cluster(ClusterArgs),
    /// Score a labeling against ground truth, or sweep NCut over k.
    Eval(EvalArgs),
    /// Generate or load, embed, cluster and evaluate from one JSON config.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// JSON file with a generator spec; flags given explicitly are ignored then.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub relations: usize,
    #[arg(long, default_value_t = 0.3)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.01)]
    pub p_out: f64,
    /// Number of categorical attributes.
    #[arg(long, default_value_t = 3)]
    pub attributes: usize,
    #[arg(long, default_value_t = 0.1)]
    pub attr_noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (created if absent).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    Calibrated,
    Uniform,
    UniformAttrs,
    UniformRelations,
    Explicit,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Embedding dimensionality.
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = crate::embed::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = crate::embed::DEFAULT_MAX_ITERATIONS)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = WeightingArg::Calibrated)]
    pub weighting: WeightingArg,
    /// Comma-separated relation factors for `--weighting explicit`.
    #[arg(long, value_delimiter = ',')]
    pub alpha_relations: Vec<f64>,
    /// Comma-separated attribute factors for `--weighting explicit`.
    #[arg(long, value_delimiter = ',')]
    pub alpha_attributes: Vec<f64>,
    /// Output directory (created if absent).
    #[arg(long)]
    pub out: PathBuf,
    /// Include wall-clock time in summary.json (makes it non-reproducible).
    #[arg(long)]
    pub record_time: bool,
}

#[derive(Debug, Args)]
pub struct KMeansArgs {
    /// Number of clusters; defaults to d - 1.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub restarts: usize,
    #[arg(long, default_value_t = 300)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl KMeansArgs {
    fn config(&self) -> KMeansConfig {
        KMeansConfig {
            k: self.k,
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Embedding TSV written by `embed`.
    pub embedding: PathBuf,
    #[command(flatten)]
    pub kmeans: KMeansArgs,
    /// Labels TSV to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Labels TSV to score.
    #[arg(long, conflicts_with = "embedding")]
    pub labels: Option<PathBuf>,
    /// Embedding TSV; every k-means restart is scored and summarized.
    #[arg(long)]
    pub embedding: Option<PathBuf>,
    /// Ground-truth labels TSV.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Manifest of the dataset, enables NCut.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Inclusive range `a..b`; reports NCut of the best k-means run per k.
    #[arg(long, value_parser = parse_range, requires_all = ["embedding", "manifest"])]
    pub k_sweep: Option<(usize, usize)>,
    #[command(flatten)]
    pub kmeans: KMeansArgs,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Run config JSON.
    pub config: PathBuf,
    /// Include wall-clock time in summary.json (makes it non-reproducible).
    #[arg(long)]
    pub record_time: bool,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower bound {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper bound {b:?}"))?;
    if a == 0 || a > b {
        return Err("need 1 <= a <= b".into());
    }
    Ok((a, b))
}

/// Parses `std::env::args`, runs the command and returns the exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

/// Sizes the global rayon pool from `SPECTRALMIX_THREADS` (0 or unset = auto).
fn configure_threads() {
    let threads = std::env::var("SPECTRALMIX_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if threads > 0 {
        // fails only if the pool was already built
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Embed(a) => cmd_embed(&a),
        Command::Cluster(a) => cmd_cluster(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Pipeline(a) => run_pipeline(&a.config, a.record_time),
    }
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::io(path, e),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes the generated dataset plus `labels.tsv`; returns the manifest path.
pub(crate) fn write_generated(spec: &SynthSpec, out: &Path) -> Result<(Dataset, PathBuf)> {
    let (dataset, truth) = generate(spec)?;
    create_dir(out)?;
    let manifest = write_dataset(&dataset, out)?;
    io::write_file(out.join("labels.tsv"), |w| io::write_labels(w, dataset.nodes(), truth.labels()))?;
    Ok((dataset, manifest))
}

pub fn cmd_gen(args: &GenArgs) -> Result<u8> {
    let spec = match &args.spec {
        Some(path) => read_json(path)?,
        None => SynthSpec {
            n: args.n,
            k: args.k,
            num_relations: args.relations,
            p_in: args.p_in,
            p_out: args.p_out,
            c: args.attributes,
            attr_noise: args.attr_noise,
            seed: args.seed,
        },
    };
    let (dataset, _) = write_generated(&spec, &args.out)?;
    println!("{}", dataset.stats());
    Ok(EXIT_OK)
}

fn weighting_from(arg: WeightingArg, relations: &[f64], attributes: &[f64]) -> Result<Weighting> {
    if arg != WeightingArg::Explicit && !(relations.is_empty() && attributes.is_empty()) {
        return Err(Error::InvalidConfig("--alpha-* flags need --weighting explicit".into()));
    }
    Ok(match arg {
        WeightingArg::Calibrated => Weighting::Calibrated,
        WeightingArg::Uniform => Weighting::Uniform,
        WeightingArg::UniformAttrs => Weighting::UniformAttrs,
        WeightingArg::UniformRelations => Weighting::UniformRelations,
        WeightingArg::Explicit => Weighting::Explicit {
            relations: relations.to_vec(),
            attributes: attributes.to_vec(),
        },
    })
}

#[derive(Debug, Serialize)]
pub(crate) struct EmbedSummary {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub iterations_run: usize,
    pub converged: bool,
    pub final_objective: f64,
    pub alpha_relations: Vec<f64>,
    pub alpha_attributes: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

/// Embeds and writes `embedding.tsv`, `categories.tsv`, `trace.txt` and
/// `summary.json` into `out`.
pub(crate) fn embed_to_dir(
    dataset: &Dataset,
    config: &EmbedConfig,
    out: &Path,
    record_time: bool,
) -> Result<(EmbeddingResult, EmbedSummary)> {
    let start = Instant::now();
    let result = embed(dataset, config)?;
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!(
        "embedded n={} d={} in {} iterations ({:.3} s), converged: {}",
        dataset.num_nodes(),
        config.d,
        result.iterations_run,
        elapsed,
        result.converged
    );

    create_dir(out)?;
    io::write_file(out.join("embedding.tsv"), |w| {
        io::write_embedding(w, dataset.nodes(), result.objects.view())
    })?;
    let enc = dataset.encode();
    io::write_file(out.join("categories.tsv"), |w| {
        io::write_categories(w, &enc, dataset.attributes().names(), result.categories.view())
    })?;
    io::write_file(out.join("trace.txt"), |w| io::write_trace(w, &result.objective_trace))?;
    let summary = EmbedSummary {
        n: dataset.num_nodes(),
        d: config.d,
        seed: config.seed,
        iterations_run: result.iterations_run,
        converged: result.converged,
        final_objective: result.final_objective(),
        alpha_relations: result.weights.relations.clone(),
        alpha_attributes: result.weights.attributes.clone(),
        wall_time_s: record_time.then_some(elapsed),
    };
    write_json(&out.join("summary.json"), &summary)?;
    Ok((result, summary))
}

pub fn cmd_embed(args: &EmbedArgs) -> Result<u8> {
    let dataset = load_manifest(&args.manifest)?;
    let config = EmbedConfig {
        d: args.d,
        epsilon: args.epsilon,
        max_iterations: args.max_iters,
        seed: args.seed,
        weighting: weighting_from(args.weighting, &args.alpha_relations, &args.alpha_attributes)?,
    };
    let (result, _) = embed_to_dir(&dataset, &config, &args.out, args.record_time)?;
    Ok(if result.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

pub fn cmd_cluster(args: &ClusterArgs) -> Result<u8> {
    let (nodes, points) = io::read_embedding(&args.embedding)?;
    let config = args.kmeans.config();
    let (labeling, inertia) = crate::cluster::cluster_rows(points.view(), &config)?;
    if let Some(dir) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    io::write_file(&args.out, |w| io::write_labels(w, &nodes, labeling.labels()))?;
    eprintln!("k={} inertia={}", labeling.k(), io::format_float(inertia));
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub k: usize,
    pub ncut: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    #[serde(flatten)]
    pub metrics: Option<MetricsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_sweep: Option<Vec<SweepPoint>>,
}

/// Scores every restart against `truth`; the headline NMI/ARI belong to the
/// lowest-inertia run.
pub(crate) fn score_restarts(
    points: ndarray::ArrayView2<'_, f64>,
    config: &KMeansConfig,
    truth: &[usize],
    dataset: Option<&Dataset>,
) -> Result<(Vec<usize>, MetricsReport)> {
    let k = resolve_embedding_k(config, points.ncols())?;
    let config = KMeansConfig { k: Some(k), ..config.clone() };
    let runs = kmeans_runs(points, &config)?;
    let mut nmis = Vec::with_capacity(runs.len());
    let mut aris = Vec::with_capacity(runs.len());
    for run in &runs {
        nmis.push(nmi(run.labeling.labels(), truth)?);
        aris.push(ari(run.labeling.labels(), truth)?);
    }
    let best = best_run(&runs);
    let (nmi_mean, nmi_std) = mean_std(&nmis);
    let (ari_mean, ari_std) = mean_std(&aris);
    let labels = runs[best].labeling.labels().to_vec();
    let ncut = dataset.map(|d| ncut(d, &labels)).transpose()?;
    Ok((
        labels,
        MetricsReport {
            nmi: nmis[best],
            ari: aris[best],
            ncut,
            restarts: Some(RestartSummary {
                nmi_mean,
                nmi_std,
                ari_mean,
                ari_std,
            }),
        },
    ))
}

fn check_nodes(dataset: &Dataset, ids: &[String]) -> Result<()> {
    if dataset.nodes() != ids {
        return Err(Error::InvalidDataset(
            "node order differs from the manifest's node list".into(),
        ));
    }
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs) -> Result<u8> {
    let dataset = args.manifest.as_deref().map(load_manifest).transpose()?;
    let truth = args.truth.as_deref().map(io::read_labels).transpose()?;
    let config = args.kmeans.config();

    let metrics = match (&args.labels, &args.embedding, &truth) {
        (Some(path), _, Some((tids, tl))) => {
            let (ids, labels) = io::read_labels(path)?;
            let truth = io::align_labels(&ids, tids, tl)?;
            let ncut = match &dataset {
                Some(ds) => Some(ncut(ds, &io::align_labels(ds.nodes(), &ids, &labels)?)?),
                None => None,
            };
            Some(MetricsReport {
                nmi: nmi(&labels, &truth)?,
                ari: ari(&labels, &truth)?,
                ncut,
                restarts: None,
            })
        }
        (None, Some(path), Some((tids, tl))) => {
            let (ids, points) = io::read_embedding(path)?;
            if let Some(ds) = &dataset {
                check_nodes(ds, &ids)?;
            }
            let truth = io::align_labels(&ids, tids, tl)?;
            Some(score_restarts(points.view(), &config, &truth, dataset.as_ref())?.1)
        }
        (Some(_), _, None) => return Err(Error::InvalidConfig("--labels needs --truth".into())),
        _ => None,
    };

    let k_sweep = match (args.k_sweep, &args.embedding, &dataset) {
        (Some((a, b)), Some(path), Some(ds)) => {
            let (ids, points) = io::read_embedding(path)?;
            check_nodes(ds, &ids)?;
            let mut sweep = Vec::new();
            for k in a..=b {
                let (labeling, _) = crate::cluster::kmeans(points.view(), &KMeansConfig { k: Some(k), ..config.clone() })?;
                sweep.push(SweepPoint {
                    k,
                    ncut: ncut(ds, labeling.labels())?,
                });
            }
            Some(sweep)
        }
        _ => None,
    };

    if metrics.is_none() && k_sweep.is_none() {
        return Err(Error::InvalidConfig(
            "nothing to evaluate: give --truth with --labels or --embedding, or --k-sweep".into(),
        ));
    }
    let report = EvalReport { metrics, k_sweep };
    let text = serde_json::to_string(&report).expect("serializable");
    println!("{text}");
    if let Some(out) = &args.out {
        std::fs::write(out, format!("{text}\n")).map_err(|e| Error::io(out, e))?;
    }
    Ok(EXIT_OK)
}
