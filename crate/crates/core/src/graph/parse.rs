//! Plain-text readers and writers for edge lists and attribute tables.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{canonical_edge, AttributeTable, Edge, RelationLayer};
use crate::error::{Error, Result};

/// Reads `src dst [weight]` lines where `src` and `dst` are dense node
/// indices below `n`. Blank lines and `#` comments are skipped; a missing
/// weight means 1.0.
pub fn parse_edge_list<R: BufRead>(reader: R, n: usize) -> Result<RelationLayer> {
    read_edges(reader, "<edges>", "0", n, |tok| {
        tok.parse::<usize>().ok().filter(|&i| i < n)
    })
}

/// Shared edge-list reader. `resolve` maps a node token to its index.
pub(crate) fn read_edges<R: BufRead>(
    reader: R,
    source_name: &str,
    layer_id: &str,
    n: usize,
    resolve: impl Fn(&str) -> Option<usize>,
) -> Result<RelationLayer> {
    let mut edges = Vec::new();
    let mut first_seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("expected `src dst [weight]`, got {} fields", fields.len()),
            ));
        }
        let node = |tok: &str| {
            resolve(tok).ok_or_else(|| {
                Error::parse(
                    source_name,
                    lineno,
                    format!("unknown node id or index out of range: {tok:?}"),
                )
            })
        };
        let a = node(fields[0])?;
        let b = node(fields[1])?;
        let w = match fields.get(2) {
            None => 1.0,
            Some(tok) => tok.parse::<f64>().map_err(|_| {
                Error::parse(source_name, lineno, format!("non-numeric weight {tok:?}"))
            })?,
        };
        let edge: Edge =
            canonical_edge(a, b, w, n).map_err(|m| Error::parse(source_name, lineno, m))?;
        if let Some(prev) = first_seen.insert((edge.i, edge.j), lineno) {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("duplicate pair ({}, {}), first seen on line {prev}", fields[0], fields[1]),
            ));
        }
        edges.push(edge);
    }
    RelationLayer::from_canonical(layer_id.to_string(), edges)
}

/// Reads a CSV table with header `node,attr1,...,attrc`.
///
/// Rows may come in any order; nodes without a row get an all-missing row.
/// Empty cells are missing values.
pub fn parse_attribute_table<R: std::io::Read>(reader: R, nodes: &[String]) -> Result<AttributeTable> {
    read_attribute_table(reader, "<attributes>", nodes)
}

pub(crate) fn read_attribute_table<R: std::io::Read>(
    reader: R,
    source_name: &str,
    nodes: &[String],
) -> Result<AttributeTable> {
    let index: HashMap<&str, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = rdr
        .headers()
        .map_err(|e| Error::parse(source_name, 1, e.to_string()))?
        .clone();
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(Error::parse(source_name, 1, "missing header `node,...`"));
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let c = names.len();

    let mut rows: Vec<Option<Vec<Option<String>>>> = vec![None; nodes.len()];
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::parse(source_name, line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != c + 1 {
            return Err(Error::parse(
                source_name,
                line,
                format!("ragged row: {} fields, header has {}", record.len(), c + 1),
            ));
        }
        let id = &record[0];
        let &i = index
            .get(id)
            .ok_or_else(|| Error::parse(source_name, line, format!("unknown node id {id:?}")))?;
        if rows[i].is_some() {
            return Err(Error::parse(
                source_name,
                line,
                format!("duplicate node row for {id:?}"),
            ));
        }
        let cells = record
            .iter()
            .skip(1)
            .map(|s| (!s.is_empty()).then(|| s.to_string()))
            .collect();
        rows[i] = Some(cells);
    }
    let rows = rows
        .into_iter()
        .map(|r| r.unwrap_or_else(|| vec![None; c]))
        .collect();
    AttributeTable::new(names, rows)
}

/// Writes edges as `src<TAB>dst<TAB>weight` using node ids.
pub fn write_edge_list<W: Write>(mut out: W, layer: &RelationLayer, nodes: &[String]) -> std::io::Result<()> {
    for e in layer.edges() {
        writeln!(out, "{}\t{}\t{}", nodes[e.i], nodes[e.j], e.w)?;
    }
    Ok(())
}

/// Writes the CSV form read by [`parse_attribute_table`].
pub fn write_attribute_table<W: Write>(
    out: W,
    table: &AttributeTable,
    nodes: &[String],
) -> std::io::Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header = vec!["node".to_string()];
    header.extend(table.names().iter().cloned());
    wtr.write_record(&header)?;
    for (id, row) in nodes.iter().zip(table.rows()) {
        let mut record = vec![id.as_str()];
        record.extend(row.iter().map(|c| c.as_deref().unwrap_or("")));
        wtr.write_record(&record)?;
    }
    wtr.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn canonicalizes_edges() {
        let layer = parse_edge_list("0 1 2.5\n2 0 1.0\n".as_bytes(), 3).unwrap();
        let got: Vec<_> = layer.edges().iter().map(|e| (e.i, e.j, e.w)).collect();
        assert_eq!(got, vec![(0, 1, 2.5), (0, 2, 1.0)]);
    }

    #[test]
    fn default_weight_and_comments() {
        let src = "# header\n\n0 1   # trailing\n1\t2 3\n";
        let layer = parse_edge_list(src.as_bytes(), 3).unwrap();
        let got: Vec<_> = layer.edges().iter().map(|e| (e.i, e.j, e.w)).collect();
        assert_eq!(got, vec![(0, 1, 1.0), (1, 2, 3.0)]);
    }

    #[test]
    fn negative_weight_accepted() {
        let layer = parse_edge_list("0 1 -0.7".as_bytes(), 2).unwrap();
        assert_eq!(layer.edges()[0].w, -0.7);
    }

    #[test]
    fn edge_errors_carry_line_numbers() {
        let err = parse_edge_list("0 1\n3 3 1.0\n".as_bytes(), 4).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("self-loop"), "{msg}");
        assert!(msg.contains(":2:"), "{msg}");

        let err = parse_edge_list("0 9".as_bytes(), 4).unwrap_err();
        assert!(err.to_string().contains("out of range"));

        let err = parse_edge_list("0 1 abc".as_bytes(), 4).unwrap_err();
        assert!(err.to_string().contains("non-numeric weight"));

        let err = parse_edge_list("0 1\n1 0 2\n".as_bytes(), 4).unwrap_err();
        assert!(err.to_string().contains("duplicate pair"));
    }

    #[test]
    fn attribute_rows_in_any_order() {
        let nodes = ids(3);
        let csv = "node,Hometown\nv2,Vienna\nv0,Vienna\nv1,Rome\n";
        let t = parse_attribute_table(csv.as_bytes(), &nodes).unwrap();
        assert_eq!(t.num_attributes(), 1);
        assert_eq!(t.value(0, 0), Some("Vienna"));
        assert_eq!(t.value(1, 0), Some("Rome"));
        let enc = super::super::encode_categories(&t);
        assert_eq!(enc.num_levels(0), 2);
    }

    #[test]
    fn empty_body_is_all_missing() {
        let nodes = ids(2);
        let t = parse_attribute_table("node,a,b\n".as_bytes(), &nodes).unwrap();
        assert_eq!(t.num_attributes(), 2);
        assert!(t.is_empty());
        assert_eq!(t.rows(), &[vec![None, None], vec![None, None]]);
    }

    #[test]
    fn attribute_errors() {
        let nodes = ids(2);
        let dup = parse_attribute_table("node,a\nv0,x\nv0,y\n".as_bytes(), &nodes).unwrap_err();
        assert!(dup.to_string().contains("duplicate node row"), "{dup}");
        let unknown = parse_attribute_table("node,a\nzz,x\n".as_bytes(), &nodes).unwrap_err();
        assert!(unknown.to_string().contains("unknown node id"));
        let ragged = parse_attribute_table("node,a\nv0,x,y\n".as_bytes(), &nodes).unwrap_err();
        assert!(ragged.to_string().contains("ragged row"), "{ragged}");
    }

    #[test]
    fn missing_cells() {
        let nodes = ids(2);
        let t = parse_attribute_table("node,a,b\nv0,,y\nv1,x,\n".as_bytes(), &nodes).unwrap();
        assert_eq!(t.value(0, 0), None);
        assert_eq!(t.value(0, 1), Some("y"));
        assert_eq!(t.value(1, 1), None);
    }

    #[test]
    fn attribute_table_round_trip() {
        let nodes = ids(3);
        let csv = "node,a,b\nv0,x,\nv1,\"y, z\",q\n";
        let t = parse_attribute_table(csv.as_bytes(), &nodes).unwrap();
        let mut buf = Vec::new();
        write_attribute_table(&mut buf, &t, &nodes).unwrap();
        let back = parse_attribute_table(buf.as_slice(), &nodes).unwrap();
        assert_eq!(t, back);
    }
}
