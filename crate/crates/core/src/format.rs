//! Text formats: edge lists and certificates.
//!
//! Edge list:
//!
//! ```text
//! # comment
//! n 5
//! 0 1 2
//! 1 2 3
//! ```
//!
//! Certificate: one `key value` pair per line, then optionally the graph as an
//! embedded edge list.
//!
//! ```text
//! tighthc-certificate 1
//! n 5
//! order 0 1 2 3 4
//! windows <sha256 of the sorted windows>
//! params {"d":0.9,…}
//! log {"mode":"in_cycle",…}
//! graph
//! n 5
//! 0 1 2
//! …
//! ```

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{ThreeGraph, Vertex};
use crate::oracle::verify_hamilton_cycle;
use crate::pipeline::HamiltonCertificate;

pub const CERTIFICATE_VERSION: u32 = 1;
const MAGIC: &str = "tighthc-certificate";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("unsupported certificate version {0}")]
    Version(u32),
}

fn perr(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// Edges in lexicographic order after a `n <count>` header.
pub fn write_edge_list(g: &ThreeGraph) -> String {
    let mut s = String::with_capacity(16 * g.edge_count() + 16);
    writeln!(s, "n {}", g.n()).unwrap();
    for t in g.edges() {
        let [a, b, c] = t.vertices();
        writeln!(s, "{a} {b} {c}").unwrap();
    }
    s
}

fn parse_edge_lines<'a, I>(lines: I) -> Result<ThreeGraph, FormatError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut g: Option<ThreeGraph> = None;
    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(graph) = g.as_mut() else {
            match fields.as_slice() {
                ["n", count] => {
                    let n = count.parse().map_err(|_| perr(no, format!("bad vertex count {count:?}")))?;
                    g = Some(ThreeGraph::new(n));
                    continue;
                }
                _ => return Err(perr(no, "expected header `n <count>`")),
            }
        };
        let [a, b, c] = fields.as_slice() else {
            return Err(perr(no, format!("expected three vertices, got {line:?}")));
        };
        let mut v = [0; 3];
        for (slot, f) in v.iter_mut().zip([a, b, c]) {
            *slot = f.parse().map_err(|_| perr(no, format!("bad vertex {f:?}")))?;
        }
        graph.add_edge(v[0], v[1], v[2]).map_err(|e| perr(no, e.to_string()))?;
    }
    g.ok_or(FormatError::Missing("header `n <count>`"))
}

/// Parses an edge list. Repeated edges collapse to one.
pub fn parse_edge_list(text: &str) -> Result<ThreeGraph, FormatError> {
    parse_edge_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

/// SHA-256 over the cyclic windows of `order`, each written as its sorted
/// vertices `a b c\n`, in lexicographic order. Rotating or reflecting the
/// cycle leaves it unchanged.
pub fn window_digest(order: &[Vertex]) -> String {
    let p = order.len();
    let mut windows: Vec<[Vertex; 3]> = (0..p)
        .map(|i| {
            let mut w = [order[i], order[(i + 1) % p], order[(i + 2) % p]];
            w.sort_unstable();
            w
        })
        .collect();
    windows.sort_unstable();
    let mut h = Sha256::new();
    for w in windows {
        h.update(format!("{} {} {}\n", w[0], w[1], w[2]).as_bytes());
    }
    h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

/// Serializes `cert`, with `graph` appended when given.
pub fn write_certificate(cert: &HamiltonCertificate, graph: Option<&ThreeGraph>) -> String {
    let mut s = String::new();
    writeln!(s, "{MAGIC} {CERTIFICATE_VERSION}").unwrap();
    writeln!(s, "n {}", cert.n).unwrap();
    s.push_str("order");
    for v in &cert.order {
        write!(s, " {v}").unwrap();
    }
    s.push('\n');
    writeln!(s, "windows {}", window_digest(&cert.order)).unwrap();
    writeln!(s, "params {}", serde_json::to_string(&cert.params).expect("params serialize")).unwrap();
    writeln!(s, "log {}", serde_json::to_string(&cert.log).expect("log serialize")).unwrap();
    if let Some(g) = graph {
        s.push_str("graph\n");
        s.push_str(&write_edge_list(g));
    }
    s
}

/// A parsed certificate. `digest` is what the file claims; it is not
/// trusted by [`check_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateFile {
    pub cert: HamiltonCertificate,
    pub digest: String,
    pub graph: Option<ThreeGraph>,
}

pub fn parse_certificate(text: &str) -> Result<CertificateFile, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (mut n, mut order, mut digest, mut params, mut log) = (None, None, None, None, None);
    let mut seen_magic = false;
    let mut graph = None;
    while let Some((no, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            MAGIC => {
                let v: u32 = rest.trim().parse().map_err(|_| perr(no, "bad version"))?;
                if v != CERTIFICATE_VERSION {
                    return Err(FormatError::Version(v));
                }
                seen_magic = true;
            }
            _ if !seen_magic => return Err(perr(no, format!("expected `{MAGIC} {CERTIFICATE_VERSION}`"))),
            "n" => n = Some(rest.trim().parse::<usize>().map_err(|_| perr(no, "bad n"))?),
            "order" => {
                let vs: Result<Vec<Vertex>, _> = rest.split_whitespace().map(str::parse).collect();
                order = Some(vs.map_err(|_| perr(no, "bad vertex in order"))?);
            }
            "windows" => digest = Some(rest.trim().to_string()),
            "params" => params = Some(serde_json::from_str(rest).map_err(|e| perr(no, e.to_string()))?),
            "log" => log = Some(serde_json::from_str(rest).map_err(|e| perr(no, e.to_string()))?),
            "graph" => {
                graph = Some(parse_edge_lines(&mut lines)?);
                break;
            }
            other => return Err(perr(no, format!("unknown key {other:?}"))),
        }
    }
    if !seen_magic {
        return Err(FormatError::Missing("certificate header"));
    }
    let cert = HamiltonCertificate {
        n: n.ok_or(FormatError::Missing("n"))?,
        order: order.ok_or(FormatError::Missing("order"))?,
        params: params.ok_or(FormatError::Missing("params"))?,
        log: log.ok_or(FormatError::Missing("log"))?,
    };
    Ok(CertificateFile { cert, digest: digest.ok_or(FormatError::Missing("windows"))?, graph })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckFailure {
    #[error("certificate is for {cert} vertices, graph has {graph}")]
    SizeMismatch { cert: usize, graph: usize },
    #[error("order is not a tight Hamilton cycle of the graph")]
    NotHamilton,
    #[error("recorded window digest does not match the order")]
    DigestMismatch,
}

/// Re-checks `order` against `g` from scratch, then the recorded digest.
pub fn check_certificate(file: &CertificateFile, g: &ThreeGraph) -> Result<(), CheckFailure> {
    if file.cert.n != g.n() {
        return Err(CheckFailure::SizeMismatch { cert: file.cert.n, graph: g.n() });
    }
    if !verify_hamilton_cycle(g, &file.cert.order) {
        return Err(CheckFailure::NotHamilton);
    }
    if window_digest(&file.cert.order) != file.digest {
        return Err(CheckFailure::DigestMismatch);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn edge_list_round_trip() {
        let g = generate::random(12, 0.3, &mut crate::seed::stage_rng(1, "f"));
        let text = write_edge_list(&g);
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(write_edge_list(&back), text);
    }

    #[test]
    fn edge_list_quirks() {
        let g = parse_edge_list("# hi\n\nn 5\n2 1 0\n0 1 2\n 3 4 0 \n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 3, 4));
        assert_eq!(write_edge_list(&g), "n 5\n0 1 2\n0 3 4\n");
        assert!(matches!(parse_edge_list("0 1 2\n"), Err(FormatError::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("n 4\n0 1 1\n"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("n 4\n0 1 4\n"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("n 4\n0 1\n"), Err(FormatError::Parse { line: 2, .. })));
        assert_eq!(parse_edge_list("# nothing\n"), Err(FormatError::Missing("header `n <count>`")));
    }

    #[test]
    fn digest_ignores_rotation_and_reflection() {
        let a = window_digest(&[0, 1, 2, 3, 4]);
        assert_eq!(a.len(), 64);
        assert_eq!(a, window_digest(&[1, 2, 3, 4, 0]));
        assert_eq!(a, window_digest(&[4, 3, 2, 1, 0]));
        assert_ne!(a, window_digest(&[0, 2, 1, 3, 4]));
    }
}
