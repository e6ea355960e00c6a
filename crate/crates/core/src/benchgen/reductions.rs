use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph_system::GraphSystem;

/// A simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Loops are rejected; duplicate and reversed edges collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n_vertices: n });
            }
            if u == v {
                return Err(Error::Usage(format!("self-loop at vertex {u}")));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(SimpleGraph { n, edges: out })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

fn numbers<const N: usize>(line: usize, words: &[&str]) -> Result<[usize; N]> {
    let mut out = [0; N];
    if words.len() != N {
        return Err(Error::parse(line, 1, format!("expected {N} numbers")));
    }
    for (slot, w) in out.iter_mut().zip(words) {
        *slot = w.parse().map_err(|_| Error::parse(line, 1, format!("bad number '{w}'")))?;
    }
    Ok(out)
}

/// DIMACS graph format: `p edge <n> <m>` then `e <u> <v>` lines, 1-based.
pub fn parse_dimacs_graph(text: &str) -> Result<SimpleGraph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let w: Vec<&str> = raw.split_whitespace().collect();
        match w.as_slice() {
            [] | ["c", ..] => {}
            ["p", "edge" | "col", rest @ ..] if n.is_none() => {
                let [v, _] = numbers::<2>(line, rest)?;
                n = Some(v);
            }
            ["e", rest @ ..] => {
                let Some(nv) = n else {
                    return Err(Error::parse(line, 1, "edge before the 'p edge' header"));
                };
                let [u, v] = numbers::<2>(line, rest)?;
                if u == 0 || v == 0 || u > nv || v > nv {
                    return Err(Error::parse(line, 1, format!("vertex out of range 1..={nv}")));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(Error::parse(line, 1, format!("unexpected line '{}'", raw.trim()))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(1, 1, "missing 'p edge' header"))?;
    SimpleGraph::new(n, edges)
}

pub fn write_dimacs_graph(g: &SimpleGraph, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "c {h}");
    }
    let _ = writeln!(out, "p edge {} {}", g.n, g.edges.len());
    for &(u, v) in &g.edges {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Vertex `(u, i)` is `i * |V| + u`. Each copy `V × {i}` is a clique, each
/// `{u} × {0..k}` is a clique, graph edges link distinct copies, and the
/// single layer sends copy `i` to copy `i + 1 mod k`.
pub fn from_independent_set(graph: &SimpleGraph, k: usize) -> Result<GraphSystem> {
    let n = graph.n;
    if k == 0 || k > n {
        return Err(Error::Usage(format!("k = {k} outside 1..={n}")));
    }
    let id = |u: usize, i: usize| i * n + u;
    let mut b = GraphSystem::builder(n * k, 1);
    for i in 0..k {
        for u in 0..n {
            for v in u + 1..n {
                b.conflict(id(u, i), id(v, i))?;
            }
            for j in i + 1..k {
                b.conflict(id(u, i), id(u, j))?;
            }
            for v in 0..n {
                b.edge(1, id(u, i), id(v, (i + 1) % k))?;
            }
        }
        for j in 0..k {
            if i != j {
                for &(u, v) in &graph.edges {
                    b.conflict(id(u, i), id(v, j))?;
                }
            }
        }
    }
    b.labels((0..k).flat_map(|i| (0..n).map(move |u| format!("v{u}_{i}"))).collect())?;
    b.build()
}

/// A directed graph whose vertices are split into universal and existential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingGraph {
    universal: Vec<bool>,
    succ: Vec<Vec<usize>>,
}

impl AlternatingGraph {
    pub fn new(n: usize, universal: &[usize], edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = AlternatingGraph {
            universal: vec![false; n],
            succ: vec![Vec::new(); n],
        };
        for &u in universal {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n_vertices: n });
            }
            g.universal[u] = true;
        }
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n_vertices: n });
            }
            if !g.succ[u].contains(&v) {
                g.succ[u].push(v);
            }
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.universal.len()
    }

    pub fn is_universal(&self, u: usize) -> bool {
        self.universal[u]
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.succ[u]
    }
}

/// Format: `p alt <n> <s> <t>`, then `a <v>` per universal vertex and
/// `e <u> <v>` per edge, all 0-based.
pub fn parse_alternating_graph(text: &str) -> Result<(AlternatingGraph, usize, usize)> {
    let mut header = None;
    let mut universal = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.split('#').next().unwrap_or("");
        let w: Vec<&str> = t.split_whitespace().collect();
        match w.as_slice() {
            [] => {}
            ["p", "alt", rest @ ..] if header.is_none() => header = Some(numbers::<3>(line, rest)?),
            ["a", rest @ ..] if header.is_some() => universal.push(numbers::<1>(line, rest)?[0]),
            ["e", rest @ ..] if header.is_some() => {
                let [u, v] = numbers::<2>(line, rest)?;
                edges.push((u, v));
            }
            _ => return Err(Error::parse(line, 1, format!("unexpected line '{}'", t.trim()))),
        }
    }
    let [n, s, t] = header.ok_or_else(|| Error::parse(1, 1, "missing 'p alt' header"))?;
    if s >= n || t >= n {
        return Err(Error::parse(1, 1, "source or target out of range"));
    }
    Ok((AlternatingGraph::new(n, &universal, &edges)?, s, t))
}

pub fn write_alternating_graph(g: &AlternatingGraph, s: usize, t: usize, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "p alt {} {s} {t}", g.n_vertices());
    for u in (0..g.n_vertices()).filter(|&u| g.universal[u]) {
        let _ = writeln!(out, "a {u}");
    }
    for (u, succ) in g.succ.iter().enumerate() {
        for v in succ {
            let _ = writeln!(out, "e {u} {v}");
        }
    }
    out
}

/// The conflict-free two-layer system whose GIS exist iff `t` is reachable
/// from `s`. Vertex `(u, i)`, `1 ≤ i ≤ n`, is `(i - 1) * n + u`.
///
/// `t`'s own self-loops are left out of `G2`: `(t, i)` is already `G2`-good
/// through the `t`-chain, and leaving them out keeps purely universal inputs
/// uniquely-outgoing.
pub fn from_alternating_graph(g: &AlternatingGraph, s: usize, t: usize) -> Result<GraphSystem> {
    let n = g.n_vertices();
    for v in [s, t] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n_vertices: n });
        }
    }
    if g.universal[t] {
        return Err(Error::Precondition(format!("target {t} must be existential")));
    }
    if !g.succ[t].is_empty() {
        return Err(Error::Precondition(format!("target {t} must have no outgoing edge")));
    }
    if let Some(u) = (0..n).find(|&u| g.universal[u] && g.succ[u].len() != 2) {
        return Err(Error::Precondition(format!(
            "universal vertex {u} has {} successors, expected exactly 2",
            g.succ[u].len()
        )));
    }
    let id = |u: usize, i: usize| (i - 1) * n + u;
    let mut b = GraphSystem::builder(n * n, 2);
    for layer in 1..=2 {
        b.edge(layer, id(t, n), id(s, 1))?;
        for i in 1..n {
            b.edge(layer, id(t, i), id(t, i + 1))?;
        }
    }
    for u in 0..n {
        if g.universal[u] {
            let (v1, v2) = (g.succ[u][0], g.succ[u][1]);
            for i in 1..n {
                b.edge(1, id(u, i), id(v1, i + 1))?;
                b.edge(2, id(u, i), id(v2, i + 1))?;
            }
        } else {
            for &v in &g.succ[u] {
                for i in 1..n {
                    b.edge(1, id(u, i), id(v, i + 1))?;
                }
            }
            if u != t {
                for i in 1..=n {
                    b.edge(2, id(u, i), id(u, i))?;
                }
            }
        }
    }
    b.labels((1..=n).flat_map(|i| (0..n).map(move |u| format!("v{u}_{i}"))).collect())?;
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_system::brute_force;

    #[test]
    fn independent_set_examples() {
        let p3 = SimpleGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(brute_force(&from_independent_set(&p3, 2).unwrap()).unwrap().is_sat());
        let k3 = SimpleGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!brute_force(&from_independent_set(&k3, 2).unwrap()).unwrap().is_sat());
        assert!(brute_force(&from_independent_set(&k3, 1).unwrap()).unwrap().is_sat());
        assert!(from_independent_set(&k3, 4).is_err());
        let text = write_dimacs_graph(&p3, &[]);
        assert_eq!(parse_dimacs_graph(&text).unwrap(), p3);
    }

    #[test]
    fn alternating_examples() {
        let path = AlternatingGraph::new(3, &[], &[(0, 1), (1, 2)]).unwrap();
        let g = from_alternating_graph(&path, 0, 2).unwrap();
        assert!(g.classify().conflict_free);
        assert!(crate::graph_system::solve_conflict_free(&g).unwrap().is_sat());
        let cut = AlternatingGraph::new(3, &[], &[(1, 2)]).unwrap();
        assert!(!crate::graph_system::solve_conflict_free(&from_alternating_graph(&cut, 0, 2).unwrap())
            .unwrap()
            .is_sat());
        let split = AlternatingGraph::new(4, &[0], &[(0, 1), (0, 2), (1, 3)]).unwrap();
        assert!(!crate::graph_system::solve_conflict_free(&from_alternating_graph(&split, 0, 3).unwrap())
            .unwrap()
            .is_sat());
        let bad = AlternatingGraph::new(2, &[0], &[(0, 1)]).unwrap();
        let err = from_alternating_graph(&bad, 0, 1).unwrap_err().to_string();
        assert!(err.contains("vertex 0"), "{err}");
        let (h, s, t) = parse_alternating_graph(&write_alternating_graph(&split, 0, 3, &["x".into()])).unwrap();
        assert_eq!((h, s, t), (split, 0, 3));
    }
}
