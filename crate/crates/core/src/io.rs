//! Text formats: whitespace edge lists, attribute CSV, pair TSV, dense
//! similarity CSV and line-delimited iteration traces.
//!
//! External node ids are arbitrary tokens; they are remapped to dense ids in
//! order of first appearance, and the map is kept for output.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::error::{AlignError, Result};
use crate::graph::Graph;
use crate::matcher::IterationTrace;
use crate::similarity::SimilarityMatrix;

/// Bidirectional map between external node names and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeIds {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeIds {
    /// `"0", "1", ..., "n-1"`.
    pub fn numeric(n: usize) -> Self {
        let mut ids = NodeIds::default();
        for i in 0..n {
            ids.intern(&i.to_string());
        }
        ids
    }

    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub ids: NodeIds,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| AlignError::io(path, e))
}

pub(crate) fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| AlignError::io(path, e))
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> AlignError {
    AlignError::Parse {
        path: path.to_owned(),
        line,
        message: message.into(),
    }
}

/// Parses `u v` lines; `#` starts a comment line. A line holding a single
/// token declares a node without edges.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<LoadedGraph> {
    let mut ids = NodeIds::default();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [node] => {
                ids.intern(node);
            }
            [u, v] => {
                let u = ids.intern(u);
                let v = ids.intern(v);
                edges.push((u, v));
            }
            _ => {
                return Err(parse_error(
                    path,
                    lineno + 1,
                    format!("expected `u v`, found {} fields", tokens.len()),
                ))
            }
        }
    }
    let graph = Graph::new(ids.len(), edges, None)?;
    Ok(LoadedGraph { graph, ids })
}

pub fn load_edge_list(path: &Path) -> Result<LoadedGraph> {
    parse_edge_list(&read(path)?, path)
}

/// Ordering on external names: integers numerically, before other names.
fn name_key(name: &str) -> (bool, u128, &str) {
    match name.parse::<u128>() {
        Ok(v) => (false, v, name),
        Err(_) => (true, 0, name),
    }
}

/// Edge list ordered by external names, so that writing a reloaded file
/// reproduces it byte for byte. Nodes without edges follow as single tokens.
pub fn format_edge_list(graph: &Graph, ids: &NodeIds) -> String {
    let mut lines: Vec<(&str, &str)> = graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (ids.name(u), ids.name(v));
            if name_key(a) <= name_key(b) {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    lines.sort_by(|x, y| (name_key(x.0), name_key(x.1)).cmp(&(name_key(y.0), name_key(y.1))));
    let mut isolated: Vec<&str> = (0..graph.node_count())
        .filter(|&i| graph.degree(i) == 0)
        .map(|i| ids.name(i))
        .collect();
    isolated.sort_by_key(|n| name_key(n));
    let mut out = String::new();
    for (a, b) in lines {
        let _ = writeln!(out, "{a} {b}");
    }
    for n in isolated {
        let _ = writeln!(out, "{n}");
    }
    out
}

pub fn write_edge_list(path: &Path, graph: &Graph, ids: &NodeIds) -> Result<()> {
    write(path, &format_edge_list(graph, ids))
}

/// Comma-separated numeric rows, row `i` = dense node `i`.
pub fn parse_attributes(text: &str, n: usize, path: &Path) -> Result<Array2<f64>> {
    let mut data = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|cell| {
                cell.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_error(path, lineno + 1, format!("row {rows}: bad number `{}`", cell.trim())))
            })
            .collect::<Result<_>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_error(
                    path,
                    lineno + 1,
                    format!("row {rows} has {} columns, expected {w}", row.len()),
                ))
            }
            _ => {}
        }
        data.extend(row);
        rows += 1;
    }
    if rows != n {
        return Err(parse_error(
            path,
            text.lines().count(),
            format!("expected {n} attribute rows, found {rows}"),
        ));
    }
    Array2::from_shape_vec((rows, width.unwrap_or(0)), data)
        .map_err(|e| AlignError::Shape(e.to_string()))
}

pub fn load_attributes(path: &Path, n: usize) -> Result<Array2<f64>> {
    parse_attributes(&read(path)?, n, path)
}

pub fn format_matrix_csv(m: &Array2<f64>) -> String {
    let mut out = String::new();
    for row in m.outer_iter() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_attributes(path: &Path, m: &Array2<f64>) -> Result<()> {
    write(path, &format_matrix_csv(m))
}

pub fn write_similarity(path: &Path, s: &SimilarityMatrix) -> Result<()> {
    write(path, &format_matrix_csv(&s.values))
}

/// Tab-separated `src tgt` lines of external names.
pub fn parse_name_pairs(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        match fields.as_slice() {
            [s, t] if !s.is_empty() && !t.is_empty() => out.push((s.to_string(), t.to_string())),
            _ => return Err(parse_error(path, lineno + 1, "expected `src<TAB>tgt`")),
        }
    }
    Ok(out)
}

pub fn load_name_pairs(path: &Path) -> Result<Vec<(String, String)>> {
    parse_name_pairs(&read(path)?, path)
}

/// Loads a pair file and resolves names against both id maps.
pub fn load_pairs(path: &Path, source: &NodeIds, target: &NodeIds) -> Result<Vec<(usize, usize)>> {
    load_name_pairs(path)?
        .into_iter()
        .enumerate()
        .map(|(i, (s, t))| {
            let u = source
                .get(&s)
                .ok_or_else(|| parse_error(path, i + 1, format!("unknown source node `{s}`")))?;
            let v = target
                .get(&t)
                .ok_or_else(|| parse_error(path, i + 1, format!("unknown target node `{t}`")))?;
            Ok((u, v))
        })
        .collect()
}

pub fn format_pairs(pairs: &[(usize, usize)], source: &NodeIds, target: &NodeIds) -> String {
    let mut out = String::new();
    for &(u, v) in pairs {
        let _ = writeln!(out, "{}\t{}", source.name(u), target.name(v));
    }
    out
}

pub fn write_pairs(path: &Path, pairs: &[(usize, usize)], source: &NodeIds, target: &NodeIds) -> Result<()> {
    write(path, &format_pairs(pairs, source, target))
}

/// One JSON object per line.
pub fn format_trace(trace: &[IterationTrace]) -> String {
    let mut out = String::new();
    for record in trace {
        out.push_str(&serde_json::to_string(record).expect("trace serializes"));
        out.push('\n');
    }
    out
}
