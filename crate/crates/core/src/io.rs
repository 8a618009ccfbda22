//! Text formats.
//!
//! Native graphs (`ghct`):
//!
//! ```text
//! c comment
//! p ghct <n> <m>
//! e <u> <v> <weight>
//! ```
//!
//! Vertex ids are 1-based. DIMACS max-flow files (`p max`, `n <id> s|t`,
//! `a <u> <v> <cap>`) are read as undirected graphs: all arcs between the
//! same pair of vertices, in either direction, merge into one edge whose
//! weight is their sum, placed where the pair first appears. Pairs whose
//! capacities sum to zero are dropped.
//!
//! Labels files hold one `k <edge> <value>` line per edge, with 1-based
//! edge positions.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::strength::{LabelKind, StrengthLabels};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ghct,
    DimacsMaxFlow,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub format: Format,
    /// Source and sink (0-based) from DIMACS `n` lines.
    pub terminals: Option<(usize, usize)>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

fn vertex(tok: Option<&str>, line: usize, n: usize) -> Result<usize> {
    let id: usize = field(tok, line, "vertex id")?;
    if id == 0 || id > n {
        return Err(parse_err(
            line,
            format!("vertex id {id} out of range 1..={n}"),
        ));
    }
    Ok(id - 1)
}

/// Parses either format, chosen by the `p` line.
pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut header: Option<(Format, usize, usize)> = None;
    let mut edges: Vec<Edge> = Vec::new();
    let mut pair_slot: HashMap<(usize, usize), usize> = HashMap::new();
    let (mut source, mut sink) = (None, None);

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                let format = match toks.next() {
                    Some("ghct") => Format::Ghct,
                    Some("max") => Format::DimacsMaxFlow,
                    other => {
                        return Err(parse_err(line, format!("unknown problem type {other:?}")))
                    }
                };
                let n = field(toks.next(), line, "vertex count")?;
                let m = field(toks.next(), line, "edge count")?;
                header = Some((format, n, m));
            }
            "e" | "a" | "n" => {
                let Some((format, n, _)) = header else {
                    return Err(parse_err(line, "data line before problem line"));
                };
                match (format, kind) {
                    (Format::Ghct, "e") => {
                        let u = vertex(toks.next(), line, n)?;
                        let v = vertex(toks.next(), line, n)?;
                        let w: f64 = field(toks.next(), line, "weight")?;
                        if !(w.is_finite() && w > 0.0) {
                            return Err(parse_err(line, format!("nonpositive weight {w}")));
                        }
                        if u == v {
                            return Err(parse_err(line, format!("self-loop on vertex {}", u + 1)));
                        }
                        edges.push(Edge::new(u, v, w));
                    }
                    (Format::DimacsMaxFlow, "a") => {
                        let u = vertex(toks.next(), line, n)?;
                        let v = vertex(toks.next(), line, n)?;
                        let w: f64 = field(toks.next(), line, "capacity")?;
                        if !(w.is_finite() && w >= 0.0) {
                            return Err(parse_err(line, format!("negative capacity {w}")));
                        }
                        if u == v {
                            return Err(parse_err(line, format!("self-loop on vertex {}", u + 1)));
                        }
                        let key = (u.min(v), u.max(v));
                        match pair_slot.get(&key) {
                            Some(&slot) => edges[slot].weight += w,
                            None => {
                                pair_slot.insert(key, edges.len());
                                edges.push(Edge::new(u, v, w));
                            }
                        }
                    }
                    (Format::DimacsMaxFlow, "n") => {
                        let v = vertex(toks.next(), line, n)?;
                        match toks.next() {
                            Some("s") => source = Some(v),
                            Some("t") => sink = Some(v),
                            other => {
                                return Err(parse_err(line, format!("bad terminal kind {other:?}")))
                            }
                        }
                    }
                    _ => return Err(parse_err(line, format!("unexpected {kind:?} line"))),
                }
                if toks.next().is_some() {
                    return Err(parse_err(line, "trailing tokens"));
                }
            }
            other => return Err(parse_err(line, format!("unknown line type {other:?}"))),
        }
    }

    let Some((format, n, m)) = header else {
        return Err(parse_err(0, "missing problem line"));
    };
    if format == Format::Ghct && edges.len() != m {
        return Err(parse_err(
            0,
            format!("header declares {m} edges but {} were given", edges.len()),
        ));
    }
    edges.retain(|e| e.weight > 0.0);
    let terminals = match (source, sink) {
        (Some(s), Some(t)) => Some((s, t)),
        _ => None,
    };
    Ok(ParsedGraph {
        graph: Graph::new(n, edges)?,
        format,
        terminals,
    })
}

/// Native text for `g`. Weights use the shortest exact decimal form, so
/// parsing the output reproduces `g` bit for bit.
pub fn write_ghct(g: &Graph) -> String {
    let mut s = String::with_capacity(16 * (g.m() + 1));
    let _ = writeln!(s, "p ghct {} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(s, "e {} {} {}", e.u + 1, e.v + 1, e.weight);
    }
    s
}

pub fn write_labels(labels: &StrengthLabels) -> String {
    let mut s = String::new();
    let kind = match labels.kind {
        LabelKind::Exact => "exact",
        LabelKind::Estimated => "estimated",
    };
    let _ = writeln!(s, "c strength labels ({kind})");
    for (i, k) in labels.labels.iter().enumerate() {
        let _ = writeln!(s, "k {} {}", i + 1, k);
    }
    s
}

/// Reads a labels file for a graph with `m` edges; every edge must be
/// labelled exactly once.
pub fn parse_labels(text: &str, m: usize) -> Result<StrengthLabels> {
    let mut labels = vec![f64::NAN; m];
    let mut exact = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None => continue,
            Some("c") => exact |= raw.contains("(exact)"),
            Some("k") => {
                let e: usize = field(toks.next(), line, "edge index")?;
                let k: f64 = field(toks.next(), line, "label")?;
                if e == 0 || e > m {
                    return Err(parse_err(
                        line,
                        format!("edge index {e} out of range 1..={m}"),
                    ));
                }
                if !(k.is_finite() && k > 0.0) {
                    return Err(parse_err(line, format!("nonpositive label {k}")));
                }
                if !labels[e - 1].is_nan() {
                    return Err(parse_err(line, format!("edge {e} labelled twice")));
                }
                labels[e - 1] = k;
            }
            Some(other) => return Err(parse_err(line, format!("unknown line type {other:?}"))),
        }
    }
    if let Some(e) = labels.iter().position(|k| k.is_nan()) {
        return Err(parse_err(0, format!("edge {} has no label", e + 1)));
    }
    let kind = if exact {
        LabelKind::Exact
    } else {
        LabelKind::Estimated
    };
    Ok(StrengthLabels::new(labels, kind))
}
