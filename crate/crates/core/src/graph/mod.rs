//! Attributed multi-relational graphs.
//!
//! A [`Dataset`] is one node set shared by any number of undirected weighted
//! relation layers and a table of categorical attributes. Nodes are addressed
//! by dense indices that follow the order of the node list.

mod encoding;
mod manifest;
mod parse;

pub use encoding::{encode_categories, CategoryEncoding};
pub use manifest::{load_manifest, write_dataset, Manifest, ManifestLayer};
pub use parse::{parse_attribute_table, parse_edge_list, write_attribute_table, write_edge_list};

use std::collections::HashMap;

use crate::error::{Error, Result};

/// One undirected edge, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// The edge set of a single relation type.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationLayer {
    id: String,
    edges: Vec<Edge>,
}

impl RelationLayer {
    /// Builds a layer over `n` nodes.
    ///
    /// Each pair is canonicalized to `i < j` and the edge list is sorted.
    /// Self-loops, out-of-range indices, zero or non-finite weights and
    /// repeated pairs are rejected.
    pub fn new(
        id: impl Into<String>,
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let id = id.into();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            let edge = canonical_edge(a, b, w, n).map_err(|m| {
                Error::InvalidDataset(format!("layer {id:?}: {m} ({a}, {b}, {w})"))
            })?;
            out.push(edge);
        }
        Self::from_canonical(id, out)
    }

    pub(crate) fn from_canonical(id: String, mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_by_key(|e| (e.i, e.j));
        if let Some(pair) = edges.windows(2).find(|p| (p[0].i, p[0].j) == (p[1].i, p[1].j)) {
            return Err(Error::InvalidDataset(format!(
                "layer {id:?}: duplicate pair ({}, {})",
                pair[0].i, pair[0].j
            )));
        }
        Ok(RelationLayer { id, edges })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Sum of absolute edge weights.
    pub fn total_abs_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w.abs()).sum()
    }

    /// Same edges with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        RelationLayer {
            id: self.id.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge { w: e.w * factor, ..*e })
                .collect(),
        }
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        Self::new(
            self.id.clone(),
            n,
            self.edges.iter().map(|e| (perm[e.i], perm[e.j], e.w)),
        )
    }
}

pub(crate) fn canonical_edge(a: usize, b: usize, w: f64, n: usize) -> Result<Edge, &'static str> {
    if a == b {
        return Err("self-loop");
    }
    if a >= n || b >= n {
        return Err("node index out of range");
    }
    if !w.is_finite() {
        return Err("non-finite weight");
    }
    if w == 0.0 {
        return Err("zero weight");
    }
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    Ok(Edge { i, j, w })
}

/// `n × c` grid of categorical values. `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AttributeTable {
    names: Vec<String>,
    rows: Vec<Vec<Option<String>>>,
}

impl AttributeTable {
    pub fn new(names: Vec<String>, rows: Vec<Vec<Option<String>>>) -> Result<Self> {
        let c = names.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != c) {
            return Err(Error::InvalidDataset(format!(
                "attribute row {i} has {} cells, expected {c}",
                row.len()
            )));
        }
        Ok(AttributeTable { names, rows })
    }

    /// A table with no attribute columns for `n` nodes.
    pub fn empty(n: usize) -> Self {
        AttributeTable {
            names: Vec::new(),
            rows: vec![Vec::new(); n],
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_attributes(&self) -> usize {
        self.names.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Option<String>>] {
        &self.rows
    }

    pub fn value(&self, node: usize, attribute: usize) -> Option<&str> {
        self.rows[node][attribute].as_deref()
    }

    /// True when there are no columns or every cell is missing.
    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Option::is_none))
    }

    /// Number of non-missing cells in column `j`.
    pub fn observed_count(&self, j: usize) -> usize {
        self.rows.iter().filter(|r| r[j].is_some()).count()
    }

    /// Row `i` of the result is row `perm_inv[i]` of `self`; i.e. node `k`
    /// moves to position `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut rows = vec![Vec::new(); self.rows.len()];
        for (k, &p) in perm.iter().enumerate() {
            rows[p] = self.rows[k].clone();
        }
        AttributeTable {
            names: self.names.clone(),
            rows,
        }
    }
}

/// A validated attributed multi-relational graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    nodes: Vec<String>,
    layers: Vec<RelationLayer>,
    attributes: AttributeTable,
}

impl Dataset {
    pub fn new(
        nodes: Vec<String>,
        layers: Vec<RelationLayer>,
        attributes: AttributeTable,
    ) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::InvalidDataset("node list is empty".into()));
        }
        let mut seen = HashMap::with_capacity(n);
        for (i, id) in nodes.iter().enumerate() {
            if let Some(prev) = seen.insert(id.as_str(), i) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate node id {id:?} (positions {prev} and {i})"
                )));
            }
        }
        for layer in &layers {
            if let Some(e) = layer.edges.iter().find(|e| e.j >= n) {
                return Err(Error::InvalidDataset(format!(
                    "layer {:?} references node {} but n = {n}",
                    layer.id, e.j
                )));
            }
        }
        if attributes.num_rows() != n {
            return Err(Error::InvalidDataset(format!(
                "attribute table has {} rows for {n} nodes",
                attributes.num_rows()
            )));
        }
        if layers.is_empty() && attributes.is_empty() {
            return Err(Error::InvalidDataset(
                "dataset has neither relation layers nor attribute values".into(),
            ));
        }
        Ok(Dataset {
            nodes,
            layers,
            attributes,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn layers(&self) -> &[RelationLayer] {
        &self.layers
    }

    pub fn attributes(&self) -> &AttributeTable {
        &self.attributes
    }

    pub fn num_edges(&self) -> usize {
        self.layers.iter().map(RelationLayer::num_edges).sum()
    }

    pub fn node_index(&self) -> HashMap<&str, usize> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect()
    }

    pub fn encode(&self) -> CategoryEncoding {
        encode_categories(&self.attributes)
    }

    /// Summary counts in the column order nodes/relations/edges/attributes/categories.
    pub fn stats(&self) -> DatasetStats {
        DatasetStats {
            nodes: self.num_nodes(),
            relations: self.layers.len(),
            edges: self.num_edges(),
            edges_per_relation: self.layers.iter().map(RelationLayer::num_edges).collect(),
            attributes: self.attributes.num_attributes(),
            categories: self.encode().num_categories(),
        }
    }

    /// Copy with the weights of one layer multiplied by `factor`.
    pub fn with_layer_scaled(&self, layer: usize, factor: f64) -> Self {
        let mut out = self.clone();
        out.layers[layer] = self.layers[layer].scaled(factor);
        out
    }

    /// Moves node `k` to position `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_nodes();
        if perm.len() != n {
            return Err(Error::LengthMismatch {
                left: perm.len(),
                right: n,
            });
        }
        let mut nodes = vec![String::new(); n];
        for (k, &p) in perm.iter().enumerate() {
            nodes[p] = self.nodes[k].clone();
        }
        let layers = self
            .layers
            .iter()
            .map(|l| l.permuted(perm))
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(nodes, layers, self.attributes.permuted(perm))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DatasetStats {
    pub nodes: usize,
    pub relations: usize,
    pub edges: usize,
    pub edges_per_relation: Vec<usize>,
    pub attributes: usize,
    pub categories: usize,
}

impl std::fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let per: Vec<String> = self.edges_per_relation.iter().map(|e| e.to_string()).collect();
        write!(
            f,
            "relations={} nodes={} edges={} ({}) atts={} categories={}",
            self.relations,
            self.nodes,
            self.edges,
            per.join("+"),
            self.attributes,
            self.categories
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_canonicalizes_and_sorts() {
        let layer = RelationLayer::new("r", 3, [(2, 0, 1.0), (0, 1, 2.5)]).unwrap();
        let pairs: Vec<_> = layer.edges().iter().map(|e| (e.i, e.j, e.w)).collect();
        assert_eq!(pairs, vec![(0, 1, 2.5), (0, 2, 1.0)]);
    }

    #[test]
    fn layer_rejects_bad_edges() {
        assert!(RelationLayer::new("r", 3, [(1, 1, 1.0)]).is_err());
        assert!(RelationLayer::new("r", 3, [(0, 3, 1.0)]).is_err());
        assert!(RelationLayer::new("r", 3, [(0, 1, 0.0)]).is_err());
        assert!(RelationLayer::new("r", 3, [(0, 1, f64::NAN)]).is_err());
        let dup = RelationLayer::new("r", 3, [(0, 1, 1.0), (1, 0, 2.0)]).unwrap_err();
        assert!(dup.to_string().contains("duplicate"));
    }

    #[test]
    fn dataset_requires_a_modality() {
        let nodes = vec!["a".to_string(), "b".to_string()];
        let err = Dataset::new(nodes.clone(), vec![], AttributeTable::empty(2)).unwrap_err();
        assert!(matches!(err, Error::InvalidDataset(_)));
        let layer = RelationLayer::new("r", 2, [(0, 1, 1.0)]).unwrap();
        assert!(Dataset::new(nodes, vec![layer], AttributeTable::empty(2)).is_ok());
    }

    #[test]
    fn dataset_rejects_duplicate_ids_and_bad_rows() {
        let layer = RelationLayer::new("r", 2, [(0, 1, 1.0)]).unwrap();
        let err = Dataset::new(
            vec!["a".into(), "a".into()],
            vec![layer.clone()],
            AttributeTable::empty(2),
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate node id"));
        let err = Dataset::new(
            vec!["a".into(), "b".into()],
            vec![layer],
            AttributeTable::empty(3),
        )
        .unwrap_err();
        assert!(err.to_string().contains("rows"));
    }

    #[test]
    fn negative_weights_are_kept() {
        let layer = RelationLayer::new("r", 2, [(0, 1, -0.7)]).unwrap();
        assert_eq!(layer.edges()[0].w, -0.7);
        assert_eq!(layer.total_abs_weight(), 0.7);
    }
}
