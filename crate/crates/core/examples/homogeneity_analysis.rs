//! Attributes only: the embedding reproduces homogeneity analysis scores and
//! the categories sit at the centroids of their members.
//!
//! cargo run --release --example homogeneity_analysis

use spectralmix::oracles::{homogeneity_analysis, principal_angle_distance, Subspace};
use spectralmix::{embed, AttributeTable, Dataset, EmbedConfig};

fn main() -> spectralmix::Result<()> {
    let rows = [
        ["red", "small", "round"],
        ["red", "small", "round"],
        ["red", "large", "round"],
        ["blue", "large", "square"],
        ["blue", "large", "square"],
        ["blue", "small", "square"],
        ["green", "small", "round"],
        ["green", "large", "square"],
        ["red", "small", "square"],
        ["blue", "large", "round"],
    ];
    let n = rows.len();
    let names = vec!["colour".into(), "size".into(), "shape".into()];
    let cells = rows
        .iter()
        .map(|r| r.iter().map(|v| Some(v.to_string())).collect())
        .collect();
    let table = AttributeTable::new(names, cells)?;
    let ids = (0..n).map(|i| format!("item{i}")).collect();
    let dataset = Dataset::new(ids, vec![], table.clone())?;

    let d = 2;
    let result = embed(&dataset, &EmbedConfig::new(d).with_epsilon(1e-14).with_max_iterations(50_000))?;
    let ha = homogeneity_analysis(&table, d)?;
    let ours = Subspace::from_columns(result.objects.view())?;
    println!("eigenvalues {:?}", &ha.eigenvalues[..d]);
    println!("subspace distance {:.2e}", principal_angle_distance(&ours, &ha.scores)?);

    let enc = dataset.encode();
    for (k, (attr, label)) in enc.categories().iter().enumerate() {
        let row = result.categories.row(k);
        println!("{:>7}={:<7} ({:+.3}, {:+.3})", table.names()[*attr], label, row[0], row[1]);
    }
    Ok(())
}
