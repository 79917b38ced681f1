use std::collections::HashMap;

use super::AttributeTable;

/// Global indexing of every observed (attribute, label) pair.
///
/// Categories are ordered by attribute index, then by the first row in which
/// the label appears. Each observed cell is one edge of the bipartite
/// object-category graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryEncoding {
    categories: Vec<(usize, String)>,
    membership: Vec<Vec<Option<usize>>>,
    tot: Vec<usize>,
    offsets: Vec<usize>,
}

impl CategoryEncoding {
    pub fn num_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn num_attributes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_nodes(&self) -> usize {
        self.membership.len()
    }

    /// `(attribute index, label)` for every category.
    pub fn categories(&self) -> &[(usize, String)] {
        &self.categories
    }

    /// Global category of node `i` under attribute `j`, if observed.
    pub fn category_of(&self, node: usize, attribute: usize) -> Option<usize> {
        self.membership[node][attribute]
    }

    /// Per-node memberships, one entry per attribute.
    pub fn memberships(&self, node: usize) -> &[Option<usize>] {
        &self.membership[node]
    }

    /// Number of nodes in each category.
    pub fn tot(&self) -> &[usize] {
        &self.tot
    }

    pub fn attribute_of(&self, category: usize) -> usize {
        self.categories[category].0
    }

    /// Categories of attribute `j` occupy `range(j)` in the global order.
    pub fn range(&self, attribute: usize) -> std::ops::Range<usize> {
        self.offsets[attribute]..self.offsets[attribute + 1]
    }

    /// Number of distinct observed labels of attribute `j`.
    pub fn num_levels(&self, attribute: usize) -> usize {
        self.range(attribute).len()
    }
}

pub fn encode_categories(table: &AttributeTable) -> CategoryEncoding {
    let n = table.num_rows();
    let c = table.num_attributes();
    let mut categories = Vec::new();
    let mut tot = Vec::new();
    let mut offsets = Vec::with_capacity(c + 1);
    let mut membership = vec![vec![None; c]; n];

    for j in 0..c {
        offsets.push(categories.len());
        let mut local: HashMap<&str, usize> = HashMap::new();
        for (i, row) in table.rows().iter().enumerate() {
            let Some(label) = row[j].as_deref() else {
                continue;
            };
            let idx = *local.entry(label).or_insert_with(|| {
                categories.push((j, label.to_string()));
                tot.push(0);
                categories.len() - 1
            });
            tot[idx] += 1;
            membership[i][j] = Some(idx);
        }
    }
    offsets.push(categories.len());

    CategoryEncoding {
        categories,
        membership,
        tot,
        offsets,
    }
}
