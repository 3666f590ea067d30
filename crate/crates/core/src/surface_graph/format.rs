//! The `ATSPE-1` instance format.
//!
//! ```text
//! atspe 1
//! vertices 3
//! arc 0 0 1 4.5
//! edge 0 0 -
//! rot 0 0.0 1.1
//! sig 0 +1
//! ```
//!
//! Lines are whitespace separated and may appear in any order after the
//! header. `#` starts a comment. Arc and edge ids must be dense from zero.
//! An edge lists the arc running end 0 -> end 1 and the arc running
//! end 1 -> end 0, with `-` for a missing direction. Edges without a `sig`
//! line have signature `+1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::digraph::{Arc, EmbeddedDigraph};
use super::embedding::{ArcId, EdgeEnd, Embedding, Sign};
use super::GraphError;

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

fn dense<T>(map: BTreeMap<usize, T>, what: &str) -> Result<Vec<T>, GraphError> {
    let len = map.len();
    let mut out = Vec::with_capacity(len);
    for (i, (id, v)) in map.into_iter().enumerate() {
        if id != i {
            return Err(parse_err(0, format!("{what} ids are not dense: missing id {i}")));
        }
        out.push(v);
    }
    Ok(out)
}

/// Parses and validates an `ATSPE-1` document.
pub fn parse(text: &str) -> Result<EmbeddedDigraph, GraphError> {
    let mut header = false;
    let mut vertices: Option<usize> = None;
    let mut arcs = BTreeMap::new();
    let mut edges = BTreeMap::new();
    let mut rots: BTreeMap<usize, Vec<EdgeEnd>> = BTreeMap::new();
    let mut sigs: BTreeMap<usize, Sign> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap();
        if !header {
            if key != "atspe" || toks.next() != Some("1") {
                return Err(parse_err(line_no, "expected header `atspe 1`"));
            }
            header = true;
            continue;
        }
        match key {
            "vertices" => {
                if vertices.is_some() {
                    return Err(parse_err(line_no, "duplicate vertex count"));
                }
                vertices = Some(parse_num(toks.next(), line_no, "vertex count")?);
            }
            "arc" => {
                let id: usize = parse_num(toks.next(), line_no, "arc id")?;
                let tail = parse_num(toks.next(), line_no, "tail")?;
                let head = parse_num(toks.next(), line_no, "head")?;
                let cost: f64 = parse_num(toks.next(), line_no, "cost")?;
                if arcs.insert(id, Arc { tail, head, cost }).is_some() {
                    return Err(parse_err(line_no, format!("duplicate arc {id}")));
                }
            }
            "edge" => {
                let id: usize = parse_num(toks.next(), line_no, "edge id")?;
                let mut slot = || -> Result<Option<ArcId>, GraphError> {
                    match toks.next() {
                        Some("-") => Ok(None),
                        tok => parse_num(tok, line_no, "arc id").map(Some),
                    }
                };
                let pair = [slot()?, slot()?];
                if edges.insert(id, pair).is_some() {
                    return Err(parse_err(line_no, format!("duplicate edge {id}")));
                }
            }
            "rot" => {
                let v: usize = parse_num(toks.next(), line_no, "vertex")?;
                let mut ends = Vec::new();
                for tok in toks.by_ref() {
                    let (e, end) = tok
                        .split_once('.')
                        .ok_or_else(|| parse_err(line_no, format!("bad edge-end `{tok}`")))?;
                    let e: usize = parse_num(Some(e), line_no, "edge id")?;
                    let end: u8 = parse_num(Some(end), line_no, "end")?;
                    if end > 1 {
                        return Err(parse_err(line_no, format!("bad edge-end `{tok}`")));
                    }
                    ends.push(EdgeEnd::new(e, end));
                }
                if rots.insert(v, ends).is_some() {
                    return Err(parse_err(line_no, format!("duplicate rotation for vertex {v}")));
                }
            }
            "sig" => {
                let e: usize = parse_num(toks.next(), line_no, "edge id")?;
                let s = match toks.next() {
                    Some("+1") | Some("1") => Sign::Plus,
                    Some("-1") => Sign::Minus,
                    other => return Err(parse_err(line_no, format!("bad signature {other:?}"))),
                };
                if sigs.insert(e, s).is_some() {
                    return Err(parse_err(line_no, format!("duplicate signature for edge {e}")));
                }
            }
            other => return Err(parse_err(line_no, format!("unknown record `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line_no, "trailing tokens"));
        }
    }
    if !header {
        return Err(parse_err(0, "missing header `atspe 1`"));
    }
    let n = vertices.ok_or_else(|| parse_err(0, "missing vertex count"))?;
    let arcs = dense(arcs, "arc")?;
    let edge_arcs = dense(edges, "edge")?;
    for arc in &arcs {
        if arc.tail >= n || arc.head >= n {
            return Err(parse_err(0, format!("arc endpoint out of range ({} -> {})", arc.tail, arc.head)));
        }
    }
    let mut rotation = vec![Vec::new(); n];
    for (v, ends) in rots {
        if v >= n {
            return Err(parse_err(0, format!("rotation for unknown vertex {v}")));
        }
        rotation[v] = ends;
    }
    let m = edge_arcs.len();
    let mut signature = vec![Sign::Plus; m];
    for (e, s) in sigs {
        if e >= m {
            return Err(parse_err(0, format!("signature for unknown edge {e}")));
        }
        signature[e] = s;
    }
    let embedding = Embedding::new(rotation, signature)?;
    EmbeddedDigraph::new(embedding, arcs, edge_arcs)
}

/// Canonical serialization; `parse(&write(g))` reproduces `g` exactly.
pub fn write(g: &EmbeddedDigraph) -> String {
    let mut out = String::new();
    let emb = g.embedding();
    writeln!(out, "atspe 1").unwrap();
    writeln!(out, "vertices {}", g.num_vertices()).unwrap();
    for (a, arc) in g.arcs().iter().enumerate() {
        // `{:?}` keeps the shortest representation that round-trips
        writeln!(out, "arc {a} {} {} {:?}", arc.tail, arc.head, arc.cost).unwrap();
    }
    for e in 0..g.num_edges() {
        let slot = |s: Option<ArcId>| s.map_or_else(|| "-".to_string(), |a| a.to_string());
        let [a, b] = g.edge_arcs(e);
        writeln!(out, "edge {e} {} {}", slot(a), slot(b)).unwrap();
    }
    for v in 0..g.num_vertices() {
        write!(out, "rot {v}").unwrap();
        for h in emb.rotation(v) {
            write!(out, " {h}").unwrap();
        }
        out.push('\n');
    }
    for e in 0..g.num_edges() {
        let s = match emb.signature(e) {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        };
        writeln!(out, "sig {e} {s}").unwrap();
    }
    out
}
