//! Joint spectral embedding of attributed multi-relational graphs.
//!
//! A [`Dataset`] holds one node set, any number of weighted relation layers
//! and a table of categorical attributes. [`embed`] places nodes and
//! attribute categories in a shared `d`-dimensional space so that linked
//! nodes, and nodes and their categories, end up close together.
//! [`cluster::cluster_embedding`] then runs k-means on the node coordinates.
//!
//! ```no_run
//! use spectralmix::{embed, load_manifest, EmbedConfig};
//!
//! let dataset = load_manifest("data/manifest.json")?;
//! let result = embed(&dataset, &EmbedConfig::new(4).with_seed(1))?;
//! println!("{} iterations, F = {}", result.iterations_run, result.final_objective());
//! # Ok::<(), spectralmix::Error>(())
//! ```

pub mod cli;
pub mod cluster;
pub mod embed;
mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod oracles;
pub mod synth;

pub use cluster::{cluster_embedding, kmeans, KMeansConfig, Labeling};
pub use embed::{embed, embed_from, EmbedConfig, EmbeddingResult, Weighting};
pub use error::{Error, Result};
pub use graph::{load_manifest, AttributeTable, Dataset, RelationLayer};
pub use synth::{generate, SynthSpec};
