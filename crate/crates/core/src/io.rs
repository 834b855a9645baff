//! Readers for edge lists, Matrix Market coordinate files and vertex label
//! tables.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{load_graph, Graph};

/// Parses whitespace-separated `u v [w]` lines. `#` starts a comment; the
/// weight defaults to 1.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let weight = match fields.len() {
            2 => 1.0,
            3 => fields[2].parse::<f64>().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("weight {:?} is not a number", fields[2]),
            })?,
            k => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected `u v [w]`, found {k} fields"),
                })
            }
        };
        edges.push((fields[0].to_string(), fields[1].to_string(), weight));
    }
    load_graph(edges)
}

/// Parses a Matrix Market `coordinate` file (`real`, `integer` or `pattern`,
/// `symmetric` or `general`). General matrices must be numerically
/// symmetric. All `n` rows become vertices labelled `1..=n`, including rows
/// without entries.
pub fn parse_matrix_market(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptyGraph)?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::Parse { line: 1, message: "missing %%MatrixMarket matrix header".into() });
    }
    if tokens[2] != "coordinate" {
        return Err(Error::Parse { line: 1, message: "only coordinate format is supported".into() });
    }
    let pattern = match tokens[3].as_str() {
        "real" | "integer" => false,
        "pattern" => true,
        other => {
            return Err(Error::Parse { line: 1, message: format!("unsupported field type {other}") })
        }
    };
    let symmetric = match tokens[4].as_str() {
        "symmetric" => true,
        "general" => false,
        other => {
            return Err(Error::Parse { line: 1, message: format!("unsupported symmetry {other}") })
        }
    };

    let parse_err = |line: usize, message: String| Error::Parse { line: line + 1, message };
    let mut size: Option<(usize, usize, usize)> = None;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for (lineno, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let int = |s: &str| s.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad integer {s:?}")));
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "size line must hold `rows cols entries`".into()));
                }
                let (r, c, nnz) = (int(fields[0])?, int(fields[1])?, int(fields[2])?);
                if r != c {
                    return Err(parse_err(lineno, format!("adjacency must be square, got {r}x{c}")));
                }
                size = Some((r, c, nnz));
            }
            Some((n, _, _)) => {
                let want = if pattern { 2 } else { 3 };
                if fields.len() < want {
                    return Err(parse_err(lineno, format!("expected {want} fields")));
                }
                let (i, j) = (int(fields[0])?, int(fields[1])?);
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(lineno, format!("index ({i}, {j}) outside 1..={n}")));
                }
                let w = if pattern {
                    1.0
                } else {
                    fields[2].parse::<f64>().map_err(|_| parse_err(lineno, format!("bad value {:?}", fields[2])))?
                };
                entries.push((i - 1, j - 1, w));
            }
        }
    }
    let (n, _, nnz) = size.ok_or(Error::EmptyGraph)?;
    if entries.len() != nnz {
        log::warn!("matrix market header announces {nnz} entries, found {}", entries.len());
    }

    let edges: Vec<(usize, usize, f64)> = if symmetric {
        entries
    } else {
        let mut cells: HashMap<(usize, usize), f64> = HashMap::new();
        for &(i, j, w) in &entries {
            *cells.entry((i, j)).or_insert(0.0) += w;
        }
        for (&(i, j), &w) in &cells {
            let mirror = cells.get(&(j, i)).copied().unwrap_or(0.0);
            if (w - mirror).abs() > 1e-12 * w.abs().max(1.0) {
                return Err(Error::Invalid(format!(
                    "general matrix is not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
        let mut upper: Vec<_> = cells.into_iter().filter(|&((i, j), _)| i <= j).map(|((i, j), w)| (i, j, w)).collect();
        upper.sort_by_key(|&(i, j, _)| (i, j));
        upper
    };
    let labels = (1..=n).map(|i| i.to_string()).collect();
    Graph::from_indexed(labels, &edges)
}

/// Reads a graph file, choosing the Matrix Market reader when the first line
/// carries the `%%MatrixMarket` banner.
pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().to_ascii_lowercase().starts_with("%%matrixmarket") {
        parse_matrix_market(&text)
    } else {
        parse_edge_list(&text)
    }
}

/// Serializes `g` as `u v w` lines over its original labels, each edge once.
/// Isolated vertices are not representable and are lost.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for i in 0..g.n() {
        for &(j, w) in g.neighbors(i) {
            if j >= i {
                out.push_str(&format!("{} {} {}\n", g.label(i), g.label(j), w));
            }
        }
    }
    out
}

/// Serializes `g` as a symmetric Matrix Market file (lower triangle) with
/// rows in vertex order. Keeps isolated vertices; labels are not stored.
pub fn write_matrix_market(g: &Graph) -> String {
    let mut body = String::new();
    let mut nnz = 0;
    for i in 0..g.n() {
        for &(j, w) in g.neighbors(i) {
            if j <= i {
                body.push_str(&format!("{} {} {}\n", i + 1, j + 1, w));
                nnz += 1;
            }
        }
    }
    format!("%%MatrixMarket matrix coordinate real symmetric\n{} {} {}\n{}", g.n(), g.n(), nnz, body)
}

/// Parses a two-column `vertex,label` CSV. A header row is skipped when its
/// first cell is literally `vertex`.
pub fn parse_labels(text: &str) -> Result<Vec<(String, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
        if record.len() < 2 {
            return Err(Error::Parse { line: i + 1, message: "expected `vertex,label`".into() });
        }
        if i == 0 && record[0].eq_ignore_ascii_case("vertex") {
            continue;
        }
        out.push((record[0].to_string(), record[1].to_string()));
    }
    Ok(out)
}

pub fn read_labels(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    parse_labels(&fs::read_to_string(path)?)
}

/// Aligns a label table with the vertices of `g`, encoding classes as
/// `1..=k` in order of first appearance along the vertex order. Every vertex
/// must have a label.
pub fn align_labels(g: &Graph, table: &[(String, String)]) -> Result<Vec<usize>> {
    let by_vertex: HashMap<&str, &str> = table.iter().map(|(v, l)| (v.as_str(), l.as_str())).collect();
    let mut codes: HashMap<&str, usize> = HashMap::new();
    let mut out = Vec::with_capacity(g.n());
    for label in g.labels() {
        let class = by_vertex
            .get(label.as_str())
            .ok_or_else(|| Error::Invalid(format!("vertex {label} has no class label")))?;
        let next = codes.len() + 1;
        out.push(*codes.entry(class).or_insert(next));
    }
    Ok(out)
}
