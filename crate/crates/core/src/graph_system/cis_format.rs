//! Line-based `.cis` instance format.
//!
//! ```text
//! c optional comment
//! c label <v> <text>      (optional vertex annotation)
//! p cis <n_vertices> <m>
//! e <layer> <u> <v>       (layer 0 = conflict, 1..m directed)
//! ```

use std::fmt::Write;

use super::{GraphSystem, GraphSystemBuilder};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};

pub fn parse_cis(text: &str) -> Result<GraphSystem> {
    let mut builder: Option<GraphSystemBuilder> = None;
    let mut labels: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "c" || line.starts_with("c ") || line.starts_with("c\t") {
            let rest = line[1..].trim_start();
            if let Some(label) = rest.strip_prefix("label ") {
                let mut parts = label.trim_start().splitn(2, char::is_whitespace);
                let v = parts
                    .next()
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(line_no, 1, "malformed label line"))?;
                labels.push((v, parts.next().unwrap_or("").trim().to_string()));
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("p") => {
                if builder.is_some() {
                    return Err(Error::parse(line_no, 1, "duplicate header"));
                }
                if tokens.next() != Some("cis") {
                    return Err(Error::parse(line_no, 3, "expected `p cis <n> <m>`"));
                }
                let n = number(tokens.next(), line_no, "vertex count")?;
                let m = number(tokens.next(), line_no, "layer count")?;
                if m == 0 {
                    return Err(Error::parse(line_no, 1, "m must be at least 1"));
                }
                builder = Some(GraphSystem::builder(n, m));
            }
            Some("e") => {
                let b = builder
                    .as_mut()
                    .ok_or_else(|| Error::parse(line_no, 1, "edge before `p cis` header"))?;
                let layer = number(tokens.next(), line_no, "layer")?;
                let u = number(tokens.next(), line_no, "source vertex")?;
                let v = number(tokens.next(), line_no, "target vertex")?;
                let added = if layer == 0 { b.conflict(u, v) } else { b.edge(layer, u, v) };
                added.map_err(|e| Error::parse(line_no, 1, e.to_string()))?;
            }
            Some(other) => {
                return Err(Error::parse(line_no, 1, format!("unknown line type `{other}`")));
            }
            None => {}
        }
        if tokens.next().is_some() {
            return Err(Error::parse(line_no, 1, "trailing tokens"));
        }
    }

    let mut builder = builder.ok_or_else(|| Error::parse(1, 1, "missing `p cis` header"))?;
    if !labels.is_empty() {
        let mut all = vec![String::new(); builder.n];
        for (v, text) in labels {
            if v >= builder.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n_vertices: builder.n,
                });
            }
            all[v] = text;
        }
        builder.labels(all)?;
    }
    builder.build()
}

/// A certificate is the line `gis` followed by vertex numbers, which may run
/// over further lines; `c` lines are comments.
pub fn write_certificate(s: &VertexSet) -> String {
    let mut out = String::from("gis");
    for v in s.iter() {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    out
}

pub fn parse_certificate(text: &str, n_vertices: usize) -> Result<VertexSet> {
    let mut set: Option<VertexSet> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        let mut tokens = line.split_whitespace().peekable();
        if set.is_none() {
            if tokens.next() != Some("gis") {
                return Err(Error::parse(line_no, 1, "expected `gis <vertices...>`"));
            }
            set = Some(VertexSet::empty(n_vertices));
        }
        let s = set.as_mut().expect("initialised above");
        for t in tokens {
            let v = number(Some(t), line_no, "vertex")?;
            if v >= n_vertices {
                return Err(Error::VertexOutOfRange { vertex: v, n_vertices });
            }
            s.insert(v);
        }
    }
    set.ok_or_else(|| Error::parse(1, 1, "missing `gis` line"))
}

fn number(token: Option<&str>, line: usize, what: &str) -> Result<usize> {
    token
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(line, 1, format!("expected {what}")))
}

/// Serialises `g`; `header` lines are written as comments before the problem line.
pub fn write_cis(g: &GraphSystem, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "c {line}");
    }
    if let Some(labels) = g.labels() {
        for (v, label) in labels.iter().enumerate() {
            let _ = writeln!(out, "c label {v} {label}");
        }
    }
    let _ = writeln!(out, "p cis {} {}", g.n_vertices(), g.m());
    for (u, v) in g.conflict_edges() {
        let _ = writeln!(out, "e 0 {u} {v}");
    }
    for layer in 1..=g.m() {
        for (u, v) in g.layer_edges(layer) {
            let _ = writeln!(out, "e {layer} {u} {v}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_write() {
        let text = "c demo\np cis 3 2\ne 0 0 1\ne 0 1 0\ne 1 0 0\ne 2 1 2\ne 2 1 2\n";
        let g = parse_cis(text).unwrap();
        assert_eq!(g.n_conflict_edges(), 1);
        assert_eq!(g.n_layer_edges(2), 1);
        let again = parse_cis(&write_cis(&g, &["x".into()])).unwrap();
        assert_eq!(g, again);
        let s = VertexSet::from_vertices(3, [0, 2]);
        assert_eq!(parse_certificate(&write_certificate(&s), 3).unwrap(), s);
        assert_eq!(parse_certificate("gis\n", 3).unwrap(), VertexSet::empty(3));
        assert!(parse_certificate("gis 3\n", 3).is_err());
    }

    #[test]
    fn labels_survive() {
        let text = "c label 1 b\nc label 0 a\np cis 2 1\ne 1 0 1\n";
        let g = parse_cis(text).unwrap();
        assert_eq!(g.labels().unwrap(), ["a", "b"]);
        let again = parse_cis(&write_cis(&g, &[])).unwrap();
        assert_eq!(again.labels(), g.labels());
    }

    #[test]
    fn conflict_self_loop_is_format_error() {
        let err = parse_cis("p cis 2 1\ne 0 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_cis("e 1 0 0\n").is_err());
        assert!(parse_cis("p cis 2 0\n").is_err());
        assert!(parse_cis("p cis 2 1\ne 3 0 0\n").is_err());
        assert!(parse_cis("p cis 2 1\ne 1 0 5\n").is_err());
        assert!(parse_cis("").is_err());
    }
}
