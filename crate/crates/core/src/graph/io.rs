//! Graph file formats.
//!
//! * Edge list: one `u v` pair per line, optional `# n=<count>` header,
//!   other `#` lines are comments. Integer labels are used as vertex ids;
//!   any other labels are numbered in order of first appearance.
//! * JSON: `{"vertices": [...], "edges": [[a, b], ...], "coords": [[x, y], ...]}`
//!   with `coords` optional. Edge endpoints refer to entries of `vertices`.
//!
//! Saving always writes integer ids, so `save(load(save(g)))` reproduces the
//! same bytes.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde_json::Value;

use super::{Coord, Graph, GraphDoc, GraphError, VertexSet, MAX_VERTICES};

/// A loaded graph together with the label each vertex had in the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_edge_list(text: &str) -> Result<LabeledGraph, GraphError> {
    let mut declared_n: Option<usize> = None;
    let mut pairs: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(count) = comment.trim().strip_prefix("n=") {
                let n = count
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad vertex count {count:?}")))?;
                declared_n = Some(n);
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => pairs.push((line_no, a.to_string(), b.to_string())),
            _ => return Err(parse_err(line_no, "expected exactly two labels")),
        }
    }

    let numeric = pairs
        .iter()
        .all(|(_, a, b)| a.parse::<usize>().is_ok() && b.parse::<usize>().is_ok());
    let (labels, edges) = if numeric {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .map(|(_, a, b)| (a.parse().unwrap(), b.parse().unwrap()))
            .collect();
        let max_id = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        let n = declared_n.unwrap_or(max_id);
        if max_id > n {
            return Err(parse_err(0, format!("vertex id {} exceeds n={n}", max_id - 1)));
        }
        ((0..n).map(|v| v.to_string()).collect::<Vec<_>>(), edges)
    } else {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut id = |s: &str| {
            *index.entry(s.to_string()).or_insert_with(|| {
                labels.push(s.to_string());
                labels.len() - 1
            })
        };
        let edges: Vec<(usize, usize)> = pairs.iter().map(|(_, a, b)| (id(a), id(b))).collect();
        if let Some(n) = declared_n {
            if n != labels.len() {
                return Err(parse_err(
                    0,
                    format!("header declares n={n} but {} labels were used", labels.len()),
                ));
            }
        }
        (labels, edges)
    };
    let graph = Graph::from_edges(labels.len(), &edges)?;
    Ok(LabeledGraph { graph, labels })
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("# n={}\n", g.n());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

fn label_of(v: &Value) -> Result<String, GraphError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(GraphError::Document(format!(
            "vertex labels must be strings or numbers, got {other}"
        ))),
    }
}

impl Graph {
    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.vertices().map(Value::from).collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(u, v)| [Value::from(u), Value::from(v)])
                .collect(),
            coords: self.coords().map(|c| c.iter().map(|&(x, y)| [x, y]).collect()),
        }
    }

    /// Builds a graph from a document, checking the grid invariant when
    /// coordinates are supplied.
    pub fn from_doc(doc: &GraphDoc) -> Result<LabeledGraph, GraphError> {
        let n = doc.vertices.len();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let labels = doc.vertices.iter().map(label_of).collect::<Result<Vec<_>, _>>()?;
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GraphError::Document(format!("duplicate vertex label {l:?}")));
            }
        }
        let lookup = |v: &Value| -> Result<usize, GraphError> {
            let l = label_of(v)?;
            index
                .get(&l)
                .copied()
                .ok_or_else(|| GraphError::Document(format!("edge refers to unknown vertex {l:?}")))
        };
        let edges = doc
            .edges
            .iter()
            .map(|[a, b]| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        let mut graph = Graph::from_edges(n, &edges)?;
        if let Some(coords) = &doc.coords {
            if coords.len() != n {
                return Err(GraphError::Document(format!(
                    "{} coordinates for {n} vertices",
                    coords.len()
                )));
            }
            let coords: Vec<Coord> = coords.iter().map(|&[x, y]| (x, y)).collect();
            check_grid_edges(&graph, &coords)?;
            graph = graph.with_coords(coords);
        }
        Ok(LabeledGraph { graph, labels })
    }
}

fn check_grid_edges(g: &Graph, coords: &[Coord]) -> Result<(), GraphError> {
    let mut index = HashMap::with_capacity(coords.len());
    for (i, &c) in coords.iter().enumerate() {
        if index.insert(c, i).is_some() {
            return Err(GraphError::DuplicateCoord(c.0, c.1));
        }
    }
    for (v, &(x, y)) in coords.iter().enumerate() {
        let unit: VertexSet = [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
            .iter()
            .filter_map(|c| index.get(c).copied())
            .collect();
        if unit != g.neighbor_set(v) {
            return Err(GraphError::Document(format!(
                "edges at vertex {v} do not match unit-distance grid adjacency"
            )));
        }
    }
    Ok(())
}

pub fn parse_json(text: &str) -> Result<LabeledGraph, GraphError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| GraphError::Document(e.to_string()))?;
    Graph::from_doc(&doc)
}

pub fn to_json(g: &Graph) -> String {
    let mut s = serde_json::to_string(&g.to_doc()).expect("graph documents always serialize");
    s.push('\n');
    s
}

/// Parses either format, deciding by the first non-blank character.
pub fn parse_any(text: &str) -> Result<LabeledGraph, GraphError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}
