//! Plain-text edge-list format.
//!
//! ```text
//! n m
//! u_1 v_1
//! ...
//! u_m v_m
//! b l_1 l_2 ...      (optional: left side of a bipartite instance)
//! ```
//!
//! Vertex ids are 0-based. Blank lines are ignored. The writer emits edges
//! in canonical order, so writing then reading reproduces the same edge ids.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("header promises {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<usize, EdgeListError> {
    let tok = tok.ok_or_else(|| EdgeListError::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| EdgeListError::Parse {
        line,
        msg: format!("bad {what} {tok:?}"),
    })
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph, EdgeListError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut left: Option<Vec<usize>> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let mut toks = line.split_whitespace().peekable();
        let Some(&first) = toks.peek() else {
            continue;
        };
        if header.is_none() {
            let n = parse_num(toks.next(), line_no, "vertex count")?;
            let m = parse_num(toks.next(), line_no, "edge count")?;
            header = Some((n, m));
        } else if first == "b" {
            if left.is_some() {
                return Err(EdgeListError::Parse {
                    line: line_no,
                    msg: "duplicate bipartition line".into(),
                });
            }
            toks.next();
            let vs = toks
                .map(|t| parse_num(Some(t), line_no, "left vertex"))
                .collect::<Result<Vec<_>, _>>()?;
            left = Some(vs);
            continue;
        } else {
            let u = parse_num(toks.next(), line_no, "endpoint")?;
            let v = parse_num(toks.next(), line_no, "endpoint")?;
            edges.push((u, v));
            edge_lines.push(line_no);
        }
        if toks.next().is_some() {
            return Err(EdgeListError::Parse {
                line: line_no,
                msg: "trailing tokens".into(),
            });
        }
    }
    let (n, m) = header.ok_or(EdgeListError::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    if edges.len() != m {
        return Err(EdgeListError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    let graph = Graph::new(n, edges.iter().copied()).map_err(|e| {
        // point the diagnostic at the first offending input line
        let line = locate(&e, &edges, &edge_lines);
        EdgeListError::Graph { line, source: e }
    })?;
    match left {
        Some(left) => graph
            .with_bipartition(&left)
            .map_err(|e| EdgeListError::Graph { line: 0, source: e }),
        None => Ok(graph),
    }
}

fn locate(err: &GraphError, edges: &[(usize, usize)], lines: &[usize]) -> usize {
    let same = |a: (usize, usize), u: usize, v: usize| (a.0.min(a.1), a.0.max(a.1)) == (u.min(v), u.max(v));
    let pos = match *err {
        GraphError::ParallelEdge { u, v } => edges
            .iter()
            .enumerate()
            .filter(|(_, &e)| same(e, u, v))
            .nth(1)
            .map(|(i, _)| i),
        GraphError::SelfLoop(u) => edges.iter().position(|&(a, b)| a == u && b == u),
        GraphError::VertexOutOfRange { u, v, .. } => edges.iter().position(|&e| e == (u, v)),
        _ => None,
    };
    pos.map_or(0, |i| lines[i])
}

pub fn format_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", graph.num_vertices(), graph.num_edges()).unwrap();
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    if let Some(left) = graph.left_vertices() {
        out.push('b');
        for v in left {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_edge_list<W: Write>(graph: &Graph, mut w: W) -> io::Result<()> {
    w.write_all(format_edge_list(graph).as_bytes())
}
