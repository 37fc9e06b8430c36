//! Plain-text edge list format.
//!
//! One edge per line: `u v w` (two node ids and a weight, whitespace
//! separated). Lines starting with `#` or `%` are comments; blank lines are
//! ignored. An optional first data line with exactly two integer tokens
//! `n m` declares the node and edge counts up front, which preserves
//! trailing isolated nodes; without it the node count is `1 + max id`.
//! Weights are written with shortest round-trip precision, so
//! write-then-read reproduces the edge set exactly.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::graph::{DynamicGraph, GraphError, NodeId};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: expected `u v w`, got {tokens} token(s)")]
    WrongArity { line: usize, tokens: usize },
    #[error("line {line}: invalid node id `{token}`")]
    BadNodeId { line: usize, token: String },
    #[error("line {line}: invalid weight `{token}`")]
    BadWeight { line: usize, token: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("header declares {declared} edges but {actual} were listed")]
    EdgeCountMismatch { declared: usize, actual: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_node(token: &str, line: usize) -> Result<NodeId, ParseError> {
    token.parse().map_err(|_| ParseError::BadNodeId {
        line,
        token: token.to_string(),
    })
}

/// Parse an edge list from a reader. The node count is taken from the header
/// if present, otherwise inferred as `1 + max id`.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<DynamicGraph, ParseError> {
    let mut edges: Vec<(NodeId, NodeId, f64, usize)> = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut saw_data = false;
    let mut max_id: Option<NodeId> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.len() {
            2 if !saw_data => {
                let n = parse_node(tokens[0], line_no)? as usize;
                let m = parse_node(tokens[1], line_no)? as usize;
                header = Some((n, m));
                saw_data = true;
            }
            3 => {
                saw_data = true;
                let u = parse_node(tokens[0], line_no)?;
                let v = parse_node(tokens[1], line_no)?;
                let w: f64 = tokens[2].parse().map_err(|_| ParseError::BadWeight {
                    line: line_no,
                    token: tokens[2].to_string(),
                })?;
                max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
                edges.push((u, v, w, line_no));
            }
            n => return Err(ParseError::WrongArity { line: line_no, tokens: n }),
        }
    }

    let n = match header {
        Some((n, _)) => n,
        None => max_id.map_or(0, |m| m as usize + 1),
    };
    let mut g = DynamicGraph::new(n);
    for (u, v, w, line) in edges {
        g.add_edge(u, v, w)
            .map_err(|source| ParseError::Graph { line, source })?;
    }
    if let Some((_, m)) = header {
        if m != g.edge_count() {
            return Err(ParseError::EdgeCountMismatch {
                declared: m,
                actual: g.edge_count(),
            });
        }
    }
    Ok(g)
}

/// Serialize the edge list (sorted, `u < v` per line) without a header.
pub fn write_edge_list<W: Write>(g: &DynamicGraph, mut writer: W) -> io::Result<()> {
    writer.write_all(format_edge_list(g, false).as_bytes())
}

/// Serialize with a leading `n m` header so the node count survives
/// round-trips even with trailing isolated nodes.
pub fn write_edge_list_with_header<W: Write>(g: &DynamicGraph, mut writer: W) -> io::Result<()> {
    writer.write_all(format_edge_list(g, true).as_bytes())
}

fn format_edge_list(g: &DynamicGraph, header: bool) -> String {
    let mut out = String::new();
    if header {
        let _ = writeln!(out, "{} {}", g.node_count(), g.edge_count());
    }
    for e in g.edges() {
        // `{}` on f64 prints the shortest string that parses back exactly.
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
    }
    out
}
