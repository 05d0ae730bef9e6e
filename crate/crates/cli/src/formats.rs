//! Text formats: edge-list graph documents, linear-order permutations, and
//! coloring serialization.
//!
//! A graph document starts with a header line `n m`, followed by exactly
//! `m` lines `u v` with `1 <= u, v <= n` and `u != v`. Blank lines are
//! skipped and `#` starts a comment line. Orders are whitespace-separated
//! permutations of `1..=n`, with the same comment rules.

use std::fmt;

use colorsampler_core::coloring::Coloring;
use colorsampler_core::graph::{Graph, LinearOrder};

/// Parse failure, with the 1-based line number when one applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn whole(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

/// Lines that carry content, tagged with their 1-based position.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed))
        }
    })
}

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    token
        .parse::<usize>()
        .map_err(|_| ParseError::at(line, format!("{what} `{token}` is not a non-negative integer")))
}

/// Parses an edge-list document into a graph.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| ParseError::whole("empty document: expected a header line `n m`"))?;
    let mut tokens = header.split_whitespace();
    let n_tok = tokens
        .next()
        .ok_or_else(|| ParseError::at(header_line, "header must read `n m`"))?;
    let m_tok = tokens
        .next()
        .ok_or_else(|| ParseError::at(header_line, "header must read `n m`"))?;
    if tokens.next().is_some() {
        return Err(ParseError::at(header_line, "header must have exactly two fields `n m`"));
    }
    let n = parse_usize(n_tok, header_line, "vertex count")?;
    let m = parse_usize(m_tok, header_line, "edge count")?;
    if n == 0 {
        return Err(ParseError::at(header_line, "graph needs at least one vertex"));
    }

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, body) = lines.next().ok_or_else(|| {
            ParseError::whole(format!("expected {m} edge lines, found only {}", edges.len()))
        })?;
        let mut tokens = body.split_whitespace();
        let u_tok = tokens
            .next()
            .ok_or_else(|| ParseError::at(line, "edge line must read `u v`"))?;
        let v_tok = tokens
            .next()
            .ok_or_else(|| ParseError::at(line, "edge line must read `u v`"))?;
        if tokens.next().is_some() {
            return Err(ParseError::at(line, "edge line must have exactly two fields `u v`"));
        }
        let u = parse_usize(u_tok, line, "vertex")?;
        let v = parse_usize(v_tok, line, "vertex")?;
        for w in [u, v] {
            if w < 1 || w > n {
                return Err(ParseError::at(line, format!("vertex {w} out of range 1..={n}")));
            }
        }
        if u == v {
            return Err(ParseError::at(line, format!("self-loop at vertex {u}")));
        }
        edges.push((u, v));
    }
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::at(line, format!("unexpected content after {m} edges")));
    }
    Graph::new(n, edges).map_err(|e| ParseError::whole(e.to_string()))
}

/// Parses a whitespace-separated permutation of `1..=n` into an order.
pub fn parse_order(text: &str, n: usize) -> Result<LinearOrder, ParseError> {
    let mut seq = Vec::with_capacity(n);
    for (line, body) in content_lines(text) {
        for token in body.split_whitespace() {
            seq.push(parse_usize(token, line, "vertex")?);
        }
    }
    if seq.len() != n {
        return Err(ParseError::whole(format!(
            "order lists {} vertices but the graph has {n}",
            seq.len()
        )));
    }
    LinearOrder::from_sequence(seq).map_err(|e| ParseError::whole(e.to_string()))
}

/// Serializes a coloring as space-separated colors in vertex order.
pub fn format_coloring(c: &Coloring) -> String {
    let parts: Vec<String> = c.colors().iter().map(|c| c.to_string()).collect();
    parts.join(" ")
}
