//! Write a small dataset to disk in the manifest format and load it back.
//!
//! cargo run --example load_manifest [-- path/to/manifest.json]

use std::fs;

use spectralmix::load_manifest;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = match std::env::args().nth(1) {
        Some(p) => p.into(),
        None => {
            let dir = std::env::temp_dir().join("spectralmix-manifest-example");
            fs::create_dir_all(&dir)?;
            fs::write(dir.join("nodes.txt"), "alice\nbob\ncarol\ndave\n")?;
            fs::write(dir.join("follows.tsv"), "# src dst weight\nalice bob\nbob carol 2\ncarol dave\n")?;
            fs::write(dir.join("blocks.tsv"), "alice dave -1.5\n")?;
            fs::write(dir.join("profile.csv"), "node,city,team\nalice,Oslo,red\nbob,Oslo,\ndave,Rome,blue\n")?;
            fs::write(
                dir.join("manifest.json"),
                r#"{
  "nodes": "nodes.txt",
  "layers": [
    {"id": "follows", "path": "follows.tsv"},
    {"id": "blocks", "path": "blocks.tsv"}
  ],
  "attributes": "profile.csv"
}"#,
            )?;
            dir.join("manifest.json")
        }
    };

    let dataset = load_manifest(&path)?;
    println!("{:#?}", dataset.stats());
    for layer in dataset.layers() {
        for e in layer.edges() {
            println!("{}: {} - {} ({})", layer.id(), dataset.nodes()[e.i], dataset.nodes()[e.j], e.w);
        }
    }
    let enc = dataset.encode();
    for (attr, label) in enc.categories() {
        println!("category {}={}", dataset.attributes().names()[*attr], label);
    }
    Ok(())
}
