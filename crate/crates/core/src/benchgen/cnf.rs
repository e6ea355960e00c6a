use std::fmt::Write;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph_system::GraphSystem;

/// A CNF over variables `1..=n_vars`; literal `v` is `x_v`, `-v` its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub n_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(n_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for c in &clauses {
            if let Some(&l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > n_vars) {
                return Err(Error::Usage(format!("literal {l} out of range for {n_vars} variables")));
            }
        }
        Ok(Cnf { n_vars, clauses })
    }
}

/// Reads DIMACS CNF: `c` comments, a `p cnf <vars> <clauses>` header, clauses
/// terminated by `0` (possibly spanning lines).
pub fn parse_dimacs_cnf(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let w: Vec<&str> = t.split_whitespace().collect();
            match w.as_slice() {
                ["p", "cnf", v, c] if header.is_none() => {
                    let v = v.parse().map_err(|_| Error::parse(line, 7, "bad variable count"))?;
                    let c = c.parse().map_err(|_| Error::parse(line, 7, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return Err(Error::parse(line, 1, "expected a single 'p cnf <vars> <clauses>' header")),
            }
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(Error::parse(line, 1, "clause before the 'p cnf' header"));
        };
        for w in t.split_whitespace() {
            let l: i32 = w.parse().map_err(|_| Error::parse(line, 1, format!("bad literal '{w}'")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > n_vars {
                return Err(Error::parse(line, 1, format!("literal {l} exceeds {n_vars} variables")));
            } else {
                current.push(l);
            }
        }
    }
    let Some((n_vars, n_clauses)) = header else {
        return Err(Error::parse(1, 1, "missing 'p cnf' header"));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != n_clauses {
        return Err(Error::parse(
            text.lines().count().max(1),
            1,
            format!("header declares {n_clauses} clauses, found {}", clauses.len()),
        ));
    }
    Cnf::new(n_vars, clauses)
}

pub fn write_dimacs_cnf(cnf: &Cnf, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "c {h}");
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.n_vars, cnf.clauses.len());
    for c in &cnf.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

/// `n_clauses` clauses of `k` literals over distinct variables.
pub fn random_k_cnf(n_vars: usize, n_clauses: usize, k: usize, rng: &mut impl Rng) -> Result<Cnf> {
    if k == 0 || k > n_vars {
        return Err(Error::Usage(format!("cannot draw {k}-clauses over {n_vars} variables")));
    }
    let clauses = (0..n_clauses)
        .map(|_| {
            let vars = rand::seq::index::sample(rng, n_vars, k);
            vars.iter()
                .map(|v| {
                    let lit = v as i32 + 1;
                    if rng.gen_bool(0.5) {
                        -lit
                    } else {
                        lit
                    }
                })
                .collect()
        })
        .collect();
    Cnf::new(n_vars, clauses)
}

/// Vertex `0` is `z`, vertex `i` is `x_i` and `n + i` is `¬x_i`. Layer
/// `i ≤ n` lets `z` choose a value for `x_i`, layer `n + j` makes `z` pick a
/// literal of clause `j`, and literals carry self-loops in both. The last
/// layer sends every literal back to `z` and also carries the self-loop
/// `(z, z)`: without it `z` could never be good there and no GIS would exist.
pub fn from_cnf(cnf: &Cnf) -> Result<GraphSystem> {
    let n = cnf.n_vars;
    if cnf.clauses.iter().any(Vec::is_empty) {
        return Err(Error::Usage("empty clause".into()));
    }
    let m = cnf.clauses.len();
    let vertex = |l: i32| if l > 0 { l as usize } else { n + l.unsigned_abs() as usize };
    let mut b = GraphSystem::builder(2 * n + 1, n + m + 1);
    for i in 1..=n {
        b.conflict(i, n + i)?;
    }
    for layer in 1..=n + m {
        for lit in 1..=2 * n {
            b.edge(layer, lit, lit)?;
        }
    }
    for i in 1..=n {
        b.edge(i, 0, i)?;
        b.edge(i, 0, n + i)?;
    }
    for (j, clause) in cnf.clauses.iter().enumerate() {
        for &l in clause {
            b.edge(n + j + 1, 0, vertex(l))?;
        }
    }
    for lit in 0..=2 * n {
        b.edge(n + m + 1, lit, 0)?;
    }
    let mut labels = vec!["z".to_string()];
    labels.extend((1..=n).map(|i| format!("x{i}")));
    labels.extend((1..=n).map(|i| format!("~x{i}")));
    b.labels(labels)?;
    b.build()
}
