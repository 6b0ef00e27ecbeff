//! Graph and blockade serialization.
//!
//! graph6: standard bit-exact encoding. Header byte n+63 for n <= 62, '~'
//! plus three 6-bit bytes for 63 <= n <= 258047; then the upper triangle in
//! column order, packed 6 bits per byte, each + 63.
//!
//! Edge list: "n <edge-count>" header line, then one "u v" line per edge.
//!
//! Blockade files are JSON: {"graph": <graph6>, "blocks": [[v, ...], ...]},
//! blocks indexed 1..K in file order.

use crate::bits::VertexSet;
use crate::blockade::Blockade;
use crate::graph::{Graph, GraphError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("edge list: {0}")]
    EdgeList(String),
    #[error("blockade: {0}")]
    Blockade(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub const GRAPH6_MAX_N: usize = 258_047;

pub fn to_graph6(g: &Graph) -> String {
    let n = g.len();
    assert!(n <= GRAPH6_MAX_N, "graph too large for graph6 ({} vertices)", n);
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 0x3f) as u8 + 63);
        out.push(((n >> 6) & 0x3f) as u8 + 63);
        out.push((n & 0x3f) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut nbits = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).unwrap()
}

pub fn from_graph6(s: &str) -> Result<Graph, FormatError> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(FormatError::Graph6("empty input".into()));
    }
    for &b in bytes {
        if !(63..=126).contains(&b) {
            return Err(FormatError::Graph6(format!("byte {} out of range", b)));
        }
    }
    let (n, mut pos) = if bytes[0] == b'~' {
        if bytes.len() < 4 {
            return Err(FormatError::Graph6("truncated size field".into()));
        }
        if bytes[1] == b'~' {
            return Err(FormatError::Graph6("graphs beyond 258047 vertices unsupported".into()));
        }
        let n = ((bytes[1] - 63) as usize) << 12
            | ((bytes[2] - 63) as usize) << 6
            | (bytes[3] - 63) as usize;
        (n, 4)
    } else {
        ((bytes[0] - 63) as usize, 1)
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    if bytes.len() - pos != need {
        return Err(FormatError::Graph6(format!(
            "expected {} data bytes for n={}, found {}",
            need,
            n,
            bytes.len() - pos
        )));
    }
    let mut g = Graph::empty(n);
    let mut acc = 0u8;
    let mut have = 0;
    for v in 1..n {
        for u in 0..v {
            if have == 0 {
                acc = bytes[pos] - 63;
                pos += 1;
                have = 6;
            }
            if acc >> 5 & 1 == 1 {
                g.add_edge(u, v);
            }
            acc <<= 1;
            have -= 1;
        }
    }
    // The padding that fills the last byte must be zero bits. Consumed bits
    // were shifted up past position 5, so only the low six bits matter.
    if have > 0 && acc & 0x3f != 0 {
        return Err(FormatError::Graph6("nonzero padding bits".into()));
    }
    g.assert_valid();
    Ok(g)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.len(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u, v));
    }
    out
}

pub fn from_edge_list(s: &str) -> Result<Graph, FormatError> {
    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| FormatError::EdgeList("missing header".into()))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| FormatError::EdgeList("bad vertex count".into()))?;
    let m: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| FormatError::EdgeList("bad edge count".into()))?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| FormatError::EdgeList(format!("bad line {:?}", line)))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| FormatError::EdgeList(format!("bad line {:?}", line)))?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(FormatError::EdgeList(format!("header says {} edges, found {}", m, edges.len())));
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// Round-trips a graph through the format named by `format` ("graph6" or
/// "edgelist").
pub fn encode(g: &Graph, format: &str) -> Result<String, FormatError> {
    match format {
        "graph6" => Ok(to_graph6(g)),
        "edgelist" => Ok(to_edge_list(g)),
        other => Err(FormatError::Graph6(format!("unknown format {:?}", other))),
    }
}

pub fn decode(s: &str, format: &str) -> Result<Graph, FormatError> {
    match format {
        "graph6" => from_graph6(s),
        "edgelist" => from_edge_list(s),
        other => Err(FormatError::Graph6(format!("unknown format {:?}", other))),
    }
}

#[derive(Serialize, Deserialize)]
struct BlockadeFile {
    graph: String,
    blocks: Vec<Vec<usize>>,
}

pub fn blockade_to_json(g: &Graph, b: &Blockade) -> String {
    let file = BlockadeFile {
        graph: to_graph6(g),
        blocks: b.entries().iter().map(|(_, set)| set.to_vec()).collect(),
    };
    serde_json::to_string_pretty(&file).unwrap()
}

pub fn blockade_from_json(s: &str) -> Result<(Graph, Blockade), FormatError> {
    let file: BlockadeFile = serde_json::from_str(s)?;
    let g = from_graph6(&file.graph)?;
    let sets: Vec<VertexSet> = file
        .blocks
        .iter()
        .map(|vs| VertexSet::from_iter(g.len(), vs.iter().copied()))
        .collect();
    let b = Blockade::new(&g, sets).map_err(|e| FormatError::Blockade(e.to_string()))?;
    Ok((g, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    #[test]
    fn known_graph6_strings() {
        assert_eq!(to_graph6(&Graph::complete(3)), "Bw");
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        assert_eq!(to_graph6(&Graph::empty(5)), "D??");
        // 5 vertices, edges 0-2, 0-4, 1-3, 3-4.
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
        assert_eq!(from_graph6("DQc").unwrap(), g);
    }

    #[test]
    fn graph6_round_trip_small() {
        // n <= 8 random instances, many seeds.
        let mut rng = rng_from_seed(11);
        for _ in 0..400 {
            let n = rng.gen_range(0..=8);
            let g = Graph::gnp(n, rng.gen_range(0.0..1.0), rng.gen());
            assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g);
        }
    }

    #[test]
    fn graph6_round_trip_larger() {
        let mut rng = rng_from_seed(12);
        for _ in 0..60 {
            let n = rng.gen_range(40..=100);
            let g = Graph::gnp(n, 0.2, rng.gen());
            assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g);
        }
    }

    #[test]
    fn graph6_extended_header() {
        let g = Graph::gnp(70, 0.1, 5);
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_rejects_malformed() {
        assert!(from_graph6("").is_err());
        assert!(from_graph6("B").is_err()); // missing data bytes
        assert!(from_graph6("Bw\u{7f}").is_err()); // byte out of range
        assert!(from_graph6("Bx").is_err()); // nonzero padding
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::gnp(12, 0.4, 7);
        assert_eq!(from_edge_list(&to_edge_list(&g)).unwrap(), g);
        let s = to_edge_list(&Graph::path(3));
        assert_eq!(s, "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn edge_list_rejects_malformed() {
        assert!(from_edge_list("").is_err());
        assert!(from_edge_list("3 5\n0 1\n").is_err()); // count mismatch
        assert!(from_edge_list("3 1\n0 x\n").is_err());
        assert!(from_edge_list("3 1\n0 0\n").is_err()); // self-loop
    }

    #[test]
    fn blockade_json_round_trip() {
        let g = Graph::path(6);
        let b = Blockade::new(
            &g,
            vec![
                VertexSet::from_iter(6, [0, 1]),
                VertexSet::from_iter(6, [2, 3]),
                VertexSet::from_iter(6, [4, 5]),
            ],
        )
        .unwrap();
        let s = blockade_to_json(&g, &b);
        let (g2, b2) = blockade_from_json(&s).unwrap();
        assert_eq!(g2, g);
        assert_eq!(b2.entries(), b.entries());
    }
}
