#![allow(dead_code)]

use fo2cis::benchgen::AlternatingGraph;
use fo2cis::graph_system::GraphSystem;
use fo2cis::VertexSet;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bitmask copy of a small graph system, checked by plain subset enumeration.
pub struct Masks {
    pub n: usize,
    conflict: Vec<u32>,
    out: Vec<Vec<u32>>,
}

impl Masks {
    pub fn new(g: &GraphSystem) -> Self {
        let n = g.n_vertices();
        assert!(n <= 20, "subset oracle is for small systems");
        let mask = |s: &VertexSet| s.iter().fold(0u32, |acc, v| acc | 1 << v);
        Masks {
            n,
            conflict: (0..n).map(|u| mask(g.conflicts_of(u))).collect(),
            out: (1..=g.m()).map(|l| (0..n).map(|u| mask(g.out_neighbors(l, u))).collect()).collect(),
        }
    }

    pub fn is_gis(&self, s: u32) -> bool {
        if s == 0 {
            return false;
        }
        let mut rest = s;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.conflict[u] & s != 0 || self.out.iter().any(|layer| layer[u] & s == 0) {
                return false;
            }
        }
        true
    }

    pub fn has_gis(&self) -> bool {
        (1u32..1 << self.n).any(|s| self.is_gis(s))
    }

    pub fn all_gis(&self) -> Vec<u32> {
        (1u32..1 << self.n).filter(|&s| self.is_gis(s)).collect()
    }

    pub fn set_gis(&self, s: &VertexSet) -> bool {
        self.is_gis(s.iter().fold(0u32, |acc, v| acc | 1 << v))
    }
}

pub fn to_set(n: usize, mask: u32) -> VertexSet {
    VertexSet::from_vertices(n, (0..n).filter(|v| mask >> v & 1 == 1))
}

/// Truth-table satisfiability of a CNF over variables `1..=n`.
pub fn cnf_satisfiable(n: usize, clauses: &[Vec<i32>]) -> bool {
    (0u32..1 << n).any(|a| {
        clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let bit = a >> (l.unsigned_abs() - 1) & 1 == 1;
                bit == (l > 0)
            })
        })
    })
}

/// Least fixed point: `t` is reached, an existential vertex is reached when
/// one successor is, a universal vertex when all successors are.
pub fn alternating_reachable(g: &AlternatingGraph, s: usize, t: usize) -> bool {
    let n = g.n_vertices();
    let mut reached = vec![false; n];
    reached[t] = true;
    loop {
        let mut changed = false;
        for u in 0..n {
            if reached[u] || g.successors(u).is_empty() {
                continue;
            }
            let ok = if g.is_universal(u) {
                g.successors(u).iter().all(|&v| reached[v])
            } else {
                g.successors(u).iter().any(|&v| reached[v])
            };
            if ok {
                reached[u] = true;
                changed = true;
            }
        }
        if !changed {
            return reached[s];
        }
    }
}

/// Normalised random alternating graph: universal vertices get two distinct
/// successors, `t = n - 1` is existential and a sink.
pub fn random_alternating(n: usize, rng: &mut impl Rng) -> (AlternatingGraph, usize, usize) {
    let t = n - 1;
    let mut universal = Vec::new();
    let mut edges = Vec::new();
    for u in 0..t {
        if n >= 2 && rng.gen_bool(0.4) {
            universal.push(u);
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            edges.push((u, a));
            edges.push((u, b));
        } else {
            for v in 0..n {
                if rng.gen_bool(0.3) {
                    edges.push((u, v));
                }
            }
        }
    }
    let s = rng.gen_range(0..n);
    (AlternatingGraph::new(n, &universal, &edges).unwrap(), s, t)
}

/// Random system where each vertex has at most one successor per layer.
pub fn random_uniquely_outgoing(n: usize, m: usize, p_conflict: f64, rng: &mut impl Rng) -> GraphSystem {
    let mut b = GraphSystem::builder(n, m);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p_conflict) {
                b.conflict(u, v).unwrap();
            }
        }
    }
    for layer in 1..=m {
        for u in 0..n {
            if rng.gen_bool(0.85) {
                b.edge(layer, u, rng.gen_range(0..n)).unwrap();
            }
        }
    }
    b.build().unwrap()
}

/// One random CNF clause of `k` distinct variables out of `n`.
pub fn random_clause(n: usize, k: usize, rng: &mut impl Rng) -> Vec<i32> {
    rand::seq::index::sample(rng, n, k)
        .iter()
        .map(|v| if rng.gen_bool(0.5) { -(v as i32 + 1) } else { v as i32 + 1 })
        .collect()
}

use fo2cis::fo2::{SnfNoEq, SnfWithEq, Vocabulary};
use fo2cis::oracle::{Atom, Expr, Var};

/// Unary atoms over both variables and every binary atom shape, optionally
/// leaving out the diagonal ones.
pub fn atoms(vocab: &Vocabulary, diagonal: bool) -> Vec<Atom> {
    let mut out = Vec::new();
    for pred in 0..vocab.unary().len() {
        for var in [Var::X, Var::Y] {
            out.push(Atom::Unary { pred, var });
        }
    }
    for pred in 0..vocab.binary().len() {
        for first in [Var::X, Var::Y] {
            for second in [Var::X, Var::Y] {
                if diagonal || first != second {
                    out.push(Atom::Binary { pred, first, second });
                }
            }
        }
    }
    out
}

pub fn random_formula(atoms: &[Atom], depth: usize, rng: &mut impl Rng) -> Expr<Atom> {
    if depth == 0 || rng.gen_bool(0.25) {
        let a = Expr::atom(atoms[rng.gen_range(0..atoms.len())]);
        return if rng.gen_bool(0.4) { Expr::not(a) } else { a };
    }
    let l = random_formula(atoms, depth - 1, rng);
    let r = random_formula(atoms, depth - 1, rng);
    match rng.gen_range(0..5) {
        0 | 1 => Expr::or([l, r]),
        2 => Expr::and([l, r]),
        3 => Expr::implies(l, r),
        _ => Expr::iff(l, r),
    }
}

pub fn random_noeq(rng: &mut impl Rng) -> SnfNoEq {
    let nu = rng.gen_range(1..=2);
    let nb = rng.gen_range(0..=1);
    let vocab = Vocabulary::new(["P", "Q"].into_iter().take(nu), ["R"].into_iter().take(nb)).unwrap();
    let pool = atoms(&vocab, true);
    let alpha = random_formula(&pool, 3, rng);
    let betas: Vec<_> = (0..rng.gen_range(1..=2)).map(|_| random_formula(&pool, 2, rng)).collect();
    SnfNoEq::new(vocab, &alpha, &betas).unwrap()
}

/// Equality sentence over one unary and one binary predicate with a single
/// witness requirement.
pub fn random_eq(rng: &mut impl Rng) -> SnfWithEq {
    let vocab = Vocabulary::new(["P"], ["R"]).unwrap();
    let mut pool = atoms(&vocab, false);
    pool.push(Atom::Eq);
    let gamma = if rng.gen_bool(0.5) {
        Expr::True
    } else {
        random_formula(&[Atom::Unary { pred: 0, var: Var::X }], 1, rng)
    };
    let alpha = random_formula(&pool, 2, rng);
    SnfWithEq::new(vocab, &gamma, &alpha, &[0]).unwrap()
}
