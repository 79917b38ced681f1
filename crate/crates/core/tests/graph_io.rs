use std::fs;
use std::path::Path;

use spectralmix::graph::{load_manifest, write_dataset};
use spectralmix::synth::{generate, SynthSpec};
use spectralmix::Error;

fn write(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

fn manifest(dir: &Path, layers: &[(&str, &str)], attributes: Option<&str>) -> std::path::PathBuf {
    let layers: Vec<String> = layers
        .iter()
        .map(|(id, p)| format!(r#"{{"id": "{id}", "path": "{p}"}}"#))
        .collect();
    let attrs = attributes.map_or("null".to_string(), |a| format!("\"{a}\""));
    let body = format!(r#"{{"nodes": "nodes.txt", "layers": [{}], "attributes": {attrs}}}"#, layers.join(", "));
    let path = dir.join("manifest.json");
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn five_nodes_one_layer() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "nodes.txt", "a\nb\nc\nd\ne\n");
    write(dir.path(), "e.tsv", "# friendships\na b\nb c 2.5\nd c\ne a -0.7\n");
    let ds = load_manifest(manifest(dir.path(), &[("friends", "e.tsv")], None)).unwrap();
    assert_eq!(ds.num_nodes(), 5);
    assert_eq!(ds.layers().len(), 1);
    assert_eq!(ds.num_edges(), 4);
    assert!(ds.attributes().is_empty());
    let edges: Vec<(usize, usize, f64)> = ds.layers()[0].edges().iter().map(|e| (e.i, e.j, e.w)).collect();
    assert_eq!(edges, vec![(0, 1, 1.0), (0, 4, -0.7), (1, 2, 2.5), (2, 3, 1.0)]);
}

#[test]
fn missing_layer_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "nodes.txt", "a\nb\n");
    let err = load_manifest(manifest(dir.path(), &[("x", "nope.tsv")], None)).unwrap_err();
    assert!(matches!(err, Error::LayerFileNotFound(_)));
    assert!(err.to_string().starts_with("layer file not found"));
}

#[test]
fn brain_network_shape() {
    // 116 regions, 51 weighted layers, 6 attributes
    let dir = tempfile::tempdir().unwrap();
    let n = 116;
    let nodes: Vec<String> = (0..n).map(|i| format!("roi{i}")).collect();
    write(dir.path(), "nodes.txt", &nodes.join("\n"));
    let mut layers = Vec::new();
    for r in 0..51 {
        let mut body = String::new();
        for i in 0..n {
            let j = (i + 1 + r) % n;
            if i < j {
                let w = (r + 1) as f64 * if i % 2 == 0 { 0.1 } else { -0.05 };
                body.push_str(&format!("roi{i} roi{j} {w}\n"));
            }
        }
        let name = format!("layer{r}.tsv");
        write(dir.path(), &name, &body);
        layers.push((format!("subject{r}"), name));
    }
    let mut csv = String::from("node,lobe,hemisphere,a3,a4,a5,a6\n");
    for (i, id) in nodes.iter().enumerate() {
        csv.push_str(&format!("{id},L{},{},x{},y{},,z\n", i % 5, if i % 2 == 0 { "left" } else { "right" }, i % 3, i % 7));
    }
    write(dir.path(), "atts.csv", &csv);
    let refs: Vec<(&str, &str)> = layers.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let ds = load_manifest(manifest(dir.path(), &refs, Some("atts.csv"))).unwrap();
    assert_eq!(ds.num_nodes(), 116);
    assert_eq!(ds.layers().len(), 51);
    assert_eq!(ds.attributes().num_attributes(), 6);
    // the fully empty column yields no categories
    assert_eq!(ds.stats().categories, 5 + 2 + 3 + 7 + 1);
}

#[test]
fn unknown_node_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "nodes.txt", "a\nb\nc\n");
    write(dir.path(), "e.tsv", "a b\n\nb zz 1.0\n");
    let err = load_manifest(manifest(dir.path(), &[("r", "e.tsv")], None)).unwrap_err();
    match err {
        Error::Parse { source_name, line, message } => {
            assert!(source_name.ends_with("e.tsv"));
            assert_eq!(line, 3);
            assert!(message.contains("unknown node id"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn duplicate_node_id_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "nodes.txt", "a\nb\na\n");
    write(dir.path(), "e.tsv", "a b\n");
    let err = load_manifest(manifest(dir.path(), &[("r", "e.tsv")], None)).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
}

#[test]
fn attribute_errors_report_line() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "nodes.txt", "a\nb\n");
    write(dir.path(), "e.tsv", "a b\n");
    write(dir.path(), "atts.csv", "node,colour\na,red\nb,blue,extra\n");
    let err = load_manifest(manifest(dir.path(), &[("r", "e.tsv")], Some("atts.csv"))).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    assert!(err.to_string().contains("ragged row"));

    write(dir.path(), "atts.csv", "node,colour\na,red\na,blue\n");
    let err = load_manifest(manifest(dir.path(), &[("r", "e.tsv")], Some("atts.csv"))).unwrap_err();
    assert!(err.to_string().contains("duplicate node row"), "{err}");
}

#[test]
fn written_dataset_loads_back_identically() {
    let (ds, _) = generate(&SynthSpec { n: 60, seed: 3, ..Default::default() }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = write_dataset(&ds, dir.path()).unwrap();
    assert_eq!(load_manifest(path).unwrap(), ds);
}

#[test]
fn generator_output_is_byte_identical() {
    let spec = SynthSpec { n: 80, num_relations: 3, seed: 12, ..Default::default() };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_dataset(&generate(&spec).unwrap().0, a.path()).unwrap();
    write_dataset(&generate(&spec).unwrap().0, b.path()).unwrap();
    for name in ["manifest.json", "nodes.txt", "layer_0.tsv", "layer_1.tsv", "layer_2.tsv", "attributes.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn intra_block_density_matches_p_in() {
    let spec = SynthSpec {
        n: 240,
        k: 3,
        num_relations: 2,
        p_in: 0.3,
        p_out: 0.02,
        c: 0,
        seed: 8,
        ..Default::default()
    };
    let (ds, truth) = generate(&spec).unwrap();
    let labels = truth.labels();
    let block = spec.n / spec.k;
    let pairs = (spec.k * block * (block - 1) / 2) as f64;
    for layer in ds.layers() {
        let intra = layer.edges().iter().filter(|e| labels[e.i] == labels[e.j]).count() as f64;
        let sd = (pairs * spec.p_in * (1.0 - spec.p_in)).sqrt();
        assert!((intra - pairs * spec.p_in).abs() <= 3.0 * sd, "{intra} vs {}", pairs * spec.p_in);
    }
}
