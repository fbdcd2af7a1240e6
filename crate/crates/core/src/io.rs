//! Text format for signed graphs.
//!
//! ```text
//! c optional comment lines
//! p sgraph <n> <m>
//! e <u> <v> <+|->
//! ```
//!
//! Ids are 0-based. The serializer writes edges sorted by `(u, v, sign)`
//! with `u < v`, so parsing and re-serializing is byte-stable.

use std::fmt::Write as _;

use crate::error::{GraphError, ParseError};
use crate::graph::{Sign, SignedGraph};

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn parse_sign(tok: &str, line: usize) -> Result<Sign, ParseError> {
    match tok {
        "+" => Ok(Sign::Positive),
        "-" => Ok(Sign::Negative),
        other => Err(err(line, format!("bad sign {other:?}"))),
    }
}

fn parse_num(tok: Option<&str>, what: &str, line: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("bad {what} {tok:?}")))
}

/// Parses the text format.
pub fn load_graph(text: &str) -> Result<SignedGraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(err(line, "second header line"));
                }
                if toks.next() != Some("sgraph") {
                    return Err(err(line, "expected `p sgraph <n> <m>`"));
                }
                let n = parse_num(toks.next(), "vertex count", line)?;
                let m = parse_num(toks.next(), "edge count", line)?;
                header = Some((n, m));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(err(line, "edge before header"));
                };
                let u = parse_num(toks.next(), "endpoint", line)?;
                let v = parse_num(toks.next(), "endpoint", line)?;
                let sign = parse_sign(toks.next().ok_or_else(|| err(line, "missing sign"))?, line)?;
                if u == v {
                    return Err(err(line, format!("loop at vertex {u}")));
                }
                if u >= n || v >= n {
                    return Err(err(line, format!("vertex {} out of range", u.max(v))));
                }
                let key = (u.min(v), u.max(v), sign);
                if !seen.insert(key) {
                    return Err(err(line, format!("duplicate edge {} {} {sign}", key.0, key.1)));
                }
                edges.push(key);
            }
            other => return Err(err(line, format!("unknown line type {other:?}"))),
        }
        if toks.next().is_some() {
            return Err(err(line, "trailing tokens"));
        }
    }
    let (n, m) = header.ok_or_else(|| err(0, "missing header"))?;
    if edges.len() != m {
        return Err(err(0, format!("header declares {m} edges, found {}", edges.len())));
    }
    SignedGraph::from_edges(n, edges).map_err(|e: GraphError| err(0, e.to_string()))
}

/// Canonical serialization.
pub fn save_graph(g: &SignedGraph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.m());
    writeln!(out, "p sgraph {} {}", g.n(), g.m()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, e.sign).unwrap();
    }
    out
}
