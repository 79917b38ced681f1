//! Brute-force reference evaluators and random instance generators shared by
//! the integration tests.
#![allow(dead_code)]

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectralmix::embed::ModalityWeights;
use spectralmix::{AttributeTable, Dataset, RelationLayer};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Objective by nested loops over a dense adjacency per layer and a string
/// lookup of every category.
pub fn objective_brute_force(
    objects: &Array2<f64>,
    categories: &Array2<f64>,
    dataset: &Dataset,
    weights: &ModalityWeights,
) -> f64 {
    let n = dataset.num_nodes();
    let d = objects.ncols();
    let dist = |a: &[f64], b: &[f64]| -> f64 { (0..d).map(|l| (a[l] - b[l]).powi(2)).sum() };
    let row = |m: &Array2<f64>, i: usize| m.row(i).to_vec();

    let mut total = 0.0;
    for (r, layer) in dataset.layers().iter().enumerate() {
        let mut w = vec![vec![0.0; n]; n];
        for e in layer.edges() {
            w[e.i][e.j] = e.w;
            w[e.j][e.i] = e.w;
        }
        for i in 0..n {
            for p in i + 1..n {
                if w[i][p] != 0.0 {
                    total += weights.relations[r] * w[i][p] * dist(&row(objects, i), &row(objects, p));
                }
            }
        }
    }

    // category index = position of (attribute, label) in first-appearance order
    let table = dataset.attributes();
    let mut cats: Vec<(usize, String)> = Vec::new();
    for j in 0..table.num_attributes() {
        for i in 0..n {
            if let Some(v) = table.value(i, j) {
                if !cats.iter().any(|(a, l)| *a == j && l == v) {
                    cats.push((j, v.to_string()));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..table.num_attributes() {
            if let Some(v) = table.value(i, j) {
                let k = cats.iter().position(|(a, l)| *a == j && l == v).unwrap();
                total += weights.attributes[j] * dist(&row(objects, i), &row(categories, k));
            }
        }
    }
    total
}

/// ARI by enumerating every unordered pair of items.
pub fn ari_pairs(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut n11, mut n10, mut n01, mut n00) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => n11 += 1.0,
                (true, false) => n10 += 1.0,
                (false, true) => n01 += 1.0,
                (false, false) => n00 += 1.0,
            }
        }
    }
    let den = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00);
    if den == 0.0 {
        // no pair structure to adjust against: equal partitions score 1
        let same = (0..n).all(|i| (0..n).all(|j| (a[i] == a[j]) == (b[i] == b[j])));
        return if same { 1.0 } else { 0.0 };
    }
    2.0 * (n11 * n00 - n10 * n01) / den
}

/// NMI from an explicit joint probability table.
pub fn nmi_table(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![vec![0usize; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        counts[x][y] += 1;
    }
    let joint: Vec<Vec<f64>> = counts.iter().map(|r| r.iter().map(|&c| c as f64 / n).collect()).collect();
    let pa: Vec<f64> = counts.iter().map(|r| r.iter().sum::<usize>() as f64 / n).collect();
    let pb: Vec<f64> = (0..kb).map(|y| counts.iter().map(|r| r[y]).sum::<usize>() as f64 / n).collect();
    let h = |p: &[f64]| -> f64 { p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum() };
    let (ha, hb) = (h(&pa), h(&pb));
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    let mut mi = 0.0;
    for x in 0..ka {
        for y in 0..kb {
            let p = joint[x][y];
            if p > 0.0 {
                mi += p * (p / (pa[x] * pb[y])).ln();
            }
        }
    }
    if mi <= 0.0 {
        0.0
    } else {
        2.0 * mi / (ha + hb)
    }
}

/// Restricted-growth strings of length `n` with at most `k` blocks: one
/// canonical labeling per set partition.
pub fn restricted_growth(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, n: usize, k: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let limit = if cur.is_empty() { 0 } else { (max + 1).min(k - 1) };
        for v in 0..=limit {
            cur.push(v);
            rec(cur, n, k, max.max(v), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(&mut Vec::new(), n, k, 0, &mut out);
    }
    out
}

/// Every labeling in `{0..k}^n`.
pub fn all_labelings(n: usize, k: usize) -> Vec<Vec<usize>> {
    let total = k.pow(n as u32);
    (0..total)
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let v = x % k;
                    x /= k;
                    v
                })
                .collect()
        })
        .collect()
}

/// Random connected weighted graph: a random spanning tree plus extra edges
/// with probability `p`; weights uniform in `[0.1, 2)`.
pub fn random_connected_layer(rng: &mut ChaCha8Rng, n: usize, p: f64) -> RelationLayer {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = std::collections::BTreeSet::new();
    for t in 1..n {
        let parent = order[rng.random_range(0..t)];
        let (a, b) = (order[t].min(parent), order[t].max(parent));
        pairs.insert((a, b));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                pairs.insert((i, j));
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(i, j)| (i, j, rng.random_range(0.1..2.0)))
        .collect();
    RelationLayer::new("g", n, edges).unwrap()
}

/// Attribute table with `c` columns of up to `levels` labels each; cells are
/// missing with probability `missing`.
pub fn random_table(rng: &mut ChaCha8Rng, n: usize, c: usize, levels: usize, missing: f64) -> AttributeTable {
    let names = (0..c).map(|j| format!("att{j}")).collect();
    let rows = (0..n)
        .map(|_| {
            (0..c)
                .map(|_| {
                    if rng.random::<f64>() < missing {
                        None
                    } else {
                        Some(format!("L{}", rng.random_range(0..levels)))
                    }
                })
                .collect()
        })
        .collect();
    AttributeTable::new(names, rows).unwrap()
}

/// Random multi-layer dataset with signed weights and missing cells; may
/// contain isolated nodes.
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, layers: usize, c: usize) -> Dataset {
    let layers: Vec<RelationLayer> = (0..layers)
        .map(|r| {
            let p = rng.random_range(0.05..0.5);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < p {
                        let w: f64 = rng.random_range(-1.0..3.0);
                        edges.push((i, j, if w == 0.0 { 1.0 } else { w }));
                    }
                }
            }
            RelationLayer::new(format!("r{r}"), n, edges).unwrap()
        })
        .collect();
    let table = random_table(rng, n, c, 4, 0.2);
    Dataset::new(ids(n), layers, table).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || rng.random_range(-1.0..1.0))
}
