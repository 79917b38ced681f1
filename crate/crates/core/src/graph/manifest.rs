//! JSON manifest tying a node list, edge files and an attribute file together.
//!
//! ```json
//! {"nodes": "nodes.txt",
//!  "layers": [{"id": "friends", "path": "friends.tsv"}],
//!  "attributes": "attributes.csv"}
//! ```
//!
//! Paths are relative to the manifest. Edge files name nodes by id.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::parse::{read_attribute_table, read_edges, write_attribute_table, write_edge_list};
use super::{AttributeTable, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub nodes: String,
    pub layers: Vec<ManifestLayer>,
    #[serde(default)]
    pub attributes: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestLayer {
    pub id: String,
    pub path: String,
}

fn open(path: &Path, missing: impl FnOnce(PathBuf) -> Error) -> Result<File> {
    File::open(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            missing(path.to_path_buf())
        } else {
            Error::io(path, e)
        }
    })
}

fn read_nodes(path: &Path) -> Result<Vec<String>> {
    let reader = BufReader::new(open(path, Error::FileNotFound)?);
    let name = path.display().to_string();
    let mut nodes = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let id = line.trim();
        if id.is_empty() {
            continue;
        }
        if let Some(prev) = seen.insert(id.to_string(), lineno) {
            return Err(Error::parse(
                &name,
                lineno,
                format!("duplicate node id {id:?}, first seen on line {prev}"),
            ));
        }
        nodes.push(id.to_string());
    }
    if nodes.is_empty() {
        return Err(Error::parse(&name, 0, "node list is empty"));
    }
    Ok(nodes)
}

/// Loads and validates a dataset. Node order follows the node file.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = open(path, Error::FileNotFound)?;
    let manifest: Manifest = serde_json::from_reader(BufReader::new(file)).map_err(|e| {
        Error::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    let nodes = read_nodes(&base.join(&manifest.nodes))?;
    let n = nodes.len();
    let index: HashMap<&str, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();

    let mut layers = Vec::with_capacity(manifest.layers.len());
    for spec in &manifest.layers {
        let layer_path = base.join(&spec.path);
        let reader = BufReader::new(open(&layer_path, Error::LayerFileNotFound)?);
        let layer = read_edges(
            reader,
            &layer_path.display().to_string(),
            &spec.id,
            n,
            |tok| index.get(tok).copied(),
        )?;
        layers.push(layer);
    }

    let attributes = match &manifest.attributes {
        None => AttributeTable::empty(n),
        Some(rel) => {
            let attr_path = base.join(rel);
            let file = open(&attr_path, Error::FileNotFound)?;
            read_attribute_table(file, &attr_path.display().to_string(), &nodes)?
        }
    };

    Dataset::new(nodes, layers, attributes)
}

/// Writes `manifest.json`, `nodes.txt`, one edge file per layer and, when
/// the dataset has attribute columns, `attributes.csv` into `dir`.
/// Returns the manifest path.
pub fn write_dataset(dataset: &Dataset, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let write = |name: &str, f: &dyn Fn(&mut BufWriter<File>) -> std::io::Result<()>| -> Result<()> {
        let p = dir.join(name);
        let file = File::create(&p).map_err(|e| Error::io(&p, e))?;
        let mut w = BufWriter::new(file);
        f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(&p, e))
    };

    write("nodes.txt", &|w| {
        for id in dataset.nodes() {
            writeln!(w, "{id}")?;
        }
        Ok(())
    })?;

    let mut layers = Vec::new();
    for (r, layer) in dataset.layers().iter().enumerate() {
        let file = format!("layer_{r}.tsv");
        write(&file, &|w| write_edge_list(&mut *w, layer, dataset.nodes()))?;
        layers.push(ManifestLayer {
            id: layer.id().to_string(),
            path: file,
        });
    }

    let attributes = if dataset.attributes().num_attributes() > 0 {
        write("attributes.csv", &|w| {
            write_attribute_table(&mut *w, dataset.attributes(), dataset.nodes())
        })?;
        Some("attributes.csv".to_string())
    } else {
        None
    };

    let manifest = Manifest {
        nodes: "nodes.txt".into(),
        layers,
        attributes,
    };
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
