//! Instance parsing and serialization: plain edge lists and similarity
//! matrices where every non-negative score is an edge.

use thiserror::Error;

use crate::graph::{Graph, GraphError, MAX_NODES};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InstanceFormat {
    EdgeList,
    SimilarityMatrix,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {0}: expected two whitespace-separated node ids, got {1:?}")]
    MalformedLine(usize, String),
    #[error("line {0}: self-loop on node {1}")]
    SelfLoop(usize, usize),
    #[error("input contains no nodes")]
    Empty,
    #[error("line {0}: {1}")]
    BadNumber(usize, String),
    #[error("expected {expected} rows of scores, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("line {0}: expected {1} scores, found {2}")]
    ColumnCount(usize, usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn parse(text: &str, format: InstanceFormat) -> Result<Graph, ParseError> {
    match format {
        InstanceFormat::EdgeList => parse_edge_list(text),
        InstanceFormat::SimilarityMatrix => parse_similarity_matrix(text),
    }
}

/// Lines of `u v` node ids; `#` starts a comment line. Duplicates and both
/// orientations are fine, self-loops are not. n is the largest id plus one.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_id = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(ParseError::MalformedLine(lineno + 1, line.to_string()));
        };
        let u: usize = a
            .parse()
            .map_err(|_| ParseError::MalformedLine(lineno + 1, line.to_string()))?;
        let v: usize = b
            .parse()
            .map_err(|_| ParseError::MalformedLine(lineno + 1, line.to_string()))?;
        if u == v {
            return Err(ParseError::SelfLoop(lineno + 1, u));
        }
        if u.max(v) >= MAX_NODES {
            return Err(GraphError::TooLarge(u.max(v) + 1, MAX_NODES).into());
        }
        max_id = Some(max_id.map_or(u.max(v), |m: usize| m.max(u.max(v))));
        edges.push((u, v));
    }
    let Some(max_id) = max_id else {
        return Err(ParseError::Empty);
    };
    let mut g = Graph::new(max_id + 1)?;
    for (u, v) in edges {
        g.add_edge(u, v);
    }
    Ok(g)
}

/// First line n, then n rows of n real scores. {i,j} is an edge iff either
/// of the two scores is non-negative; the diagonal is ignored.
pub fn parse_similarity_matrix(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((lineno, header)) = lines.next() else {
        return Err(ParseError::Empty);
    };
    let n: usize = header
        .parse()
        .map_err(|_| ParseError::BadNumber(lineno, format!("bad node count {:?}", header)))?;
    if n == 0 {
        return Err(GraphError::Empty.into());
    }
    if n > MAX_NODES {
        return Err(GraphError::TooLarge(n, MAX_NODES).into());
    }
    let mut scores: Vec<Vec<f64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let Some((lineno, row)) = lines.next() else {
            return Err(ParseError::RowCount {
                expected: n,
                found: scores.len(),
            });
        };
        let vals: Result<Vec<f64>, _> = row.split_whitespace().map(str::parse).collect();
        let vals =
            vals.map_err(|e| ParseError::BadNumber(lineno, format!("bad score: {}", e)))?;
        if vals.len() != n {
            return Err(ParseError::ColumnCount(lineno, n, vals.len()));
        }
        scores.push(vals);
    }
    let mut g = Graph::new(n)?;
    for i in 0..n {
        for j in i + 1..n {
            if scores[i][j] >= 0.0 || scores[j][i] >= 0.0 {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for u in 0..g.n() {
        for v in g.neighbors(u) {
            if u < v {
                out.push_str(&format!("{} {}\n", u, v));
            }
        }
    }
    out
}

pub fn serialize_similarity_matrix(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for u in 0..g.n() {
        let row: Vec<&str> = (0..g.n())
            .map(|v| if u != v && g.has_edge(u, v) { "1.0" } else { "-1.0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
