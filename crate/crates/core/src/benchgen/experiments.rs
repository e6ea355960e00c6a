use rand::RngCore;

use crate::error::{Error, Result};
use crate::fo2::{SnfNoEq, SnfWithEq, Vocabulary};
use crate::graph_system::GraphSystem;
use crate::oracle::{Atom, Expr, Var};

type F = Expr<Atom>;

fn u(pred: usize, var: Var) -> F {
    Expr::atom(Atom::Unary { pred, var })
}

fn b(pred: usize, first: Var, second: Var) -> F {
    Expr::atom(Atom::Binary { pred, first, second })
}

fn conj(mut items: Vec<F>) -> F {
    match items.len() {
        0 => Expr::True,
        1 => items.pop().expect("one"),
        _ => Expr::And(items),
    }
}

fn disj(mut items: Vec<F>) -> F {
    match items.len() {
        0 => Expr::False,
        1 => items.pop().expect("one"),
        _ => Expr::Or(items),
    }
}

fn numbered(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

/// Two-colouring of a directed `n`-cycle of non-empty classes `U1..Un`.
///
/// `U1..Un` are pairwise disjoint and non-empty; `E` only leads from `Ui` to
/// `U(i+1 mod n)`; `U1 ⊆ V`; every element has an `E`-successor in some `Ui`;
/// and `E` alternates `V`. Satisfiable iff `n` is even.
pub fn gen_exp_a(n: usize) -> Result<SnfNoEq> {
    if n < 2 {
        return Err(Error::Usage("exp_a needs n >= 2".into()));
    }
    let (x, y) = (Var::X, Var::Y);
    let v = n;
    let e = 0;
    let mut alpha = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            alpha.push(Expr::not(Expr::And(vec![u(i, x), u(j, x)])));
        }
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != (i + 1) % n) {
            alpha.push(Expr::not(Expr::And(vec![u(i, x), b(e, x, y), u(j, y)])));
        }
    }
    alpha.push(Expr::implies(u(0, x), u(v, x)));
    alpha.push(Expr::implies(b(e, x, y), Expr::iff(u(v, x), Expr::not(u(v, y)))));

    let mut exists: Vec<F> = (0..n).map(|i| u(i, y)).collect();
    exists.push(Expr::And(vec![b(e, x, y), disj((0..n).map(|i| u(i, y)).collect())]));

    let mut unary = numbered("U", n);
    unary.push("V".into());
    let vocab = Vocabulary::new(unary, vec!["E".to_string()])?;
    SnfNoEq::new(vocab, &conj(alpha), &exists)
}

/// Conjunction of literals reading `v` in binary over `U1..Uw` at `var`.
fn indicator(v: usize, w: usize, var: Var) -> Vec<F> {
    (0..w)
        .map(|bit| if v >> bit & 1 == 1 { u(bit, var) } else { Expr::not(u(bit, var)) })
        .collect()
}

/// The clause `¬χ_p(x) ∨ ¬χ_q(y)`.
fn forbid(p: usize, q: usize, w: usize) -> F {
    let neg = |lit: F| match lit {
        Expr::Not(inner) => *inner,
        other => Expr::not(other),
    };
    disj(
        indicator(p, w, Var::X)
            .into_iter()
            .chain(indicator(q, w, Var::Y))
            .map(neg)
            .collect(),
    )
}

/// Encodes a one-layer system on `2^w` vertices over predicates `U1..Uw`:
/// vertex `v` is the 1-type with `U(b+1) = bit b of v`. α forbids every
/// conflict in both orientations; β forbids every non-edge of layer 1.
fn encode_system(g: &GraphSystem, w: usize) -> Result<SnfNoEq> {
    assert_eq!(g.n_vertices(), 1 << w);
    assert_eq!(g.m(), 1);
    let n = g.n_vertices();
    let mut alpha = Vec::new();
    for (p, q) in g.conflict_edges() {
        alpha.push(forbid(p, q, w));
        alpha.push(forbid(q, p, w));
    }
    let mut beta = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if !g.has_edge(1, p, q) {
                beta.push(forbid(p, q, w));
            }
        }
    }
    let vocab = Vocabulary::new(numbered("U", w), Vec::new())?;
    SnfNoEq::new(vocab, &conj(alpha), &[conj(beta)])
}

/// `4^n` vertices; conflicts form the triangles `{3t, 3t+1, 3t+2}` for
/// `t < ⌊4^n/3⌋`; layer 1 is a directed cycle through the vertices `3t+2`,
/// a self-loop when there is one triangle. The leftover vertex has no edges,
/// so the designated vertices form the unique GIS.
pub fn gen_exp_b_graph(n: usize) -> Result<GraphSystem> {
    if n == 0 || 2 * n > 16 {
        return Err(Error::Usage("exp_b needs 1 <= n <= 8".into()));
    }
    let size = 1usize << (2 * n);
    let t = size / 3;
    let mut b = GraphSystem::builder(size, 1);
    for k in 0..t {
        b.conflict(3 * k, 3 * k + 1)?;
        b.conflict(3 * k + 1, 3 * k + 2)?;
        b.conflict(3 * k, 3 * k + 2)?;
        b.edge(1, 3 * k + 2, 3 * ((k + 1) % t) + 2)?;
    }
    b.build()
}

pub fn gen_exp_b(n: usize) -> Result<SnfNoEq> {
    encode_system(&gen_exp_b_graph(n)?, 2 * n)
}

/// Every element has a distinct successor typed one more, modulo `2^n`, in
/// binary over `U1..Un`, and no two distinct elements share a type.
/// Its models have exactly `2^n` elements.
pub fn gen_exp_c(n: usize) -> Result<SnfWithEq> {
    if n == 0 {
        return Err(Error::Usage("exp_c needs n >= 1".into()));
    }
    let (x, y) = (Var::X, Var::Y);
    let s = 0;
    let same_type = conj((0..n).map(|i| Expr::iff(u(i, x), u(i, y))).collect());
    let mut succ = Vec::new();
    for i in 0..n {
        let flipped = if i == 0 {
            Expr::not(u(0, x))
        } else {
            let carry = conj((0..i).map(|j| u(j, x)).collect());
            Expr::not(Expr::iff(u(i, x), carry))
        };
        succ.push(Expr::iff(u(i, y), flipped));
    }
    let alpha = Expr::And(vec![
        Expr::not(same_type),
        Expr::implies(b(s, x, y), conj(succ)),
    ]);
    let vocab = Vocabulary::new(numbered("U", n), vec!["S".to_string()])?;
    SnfWithEq::new(vocab, &Expr::True, &alpha, &[s])
}

/// An Experiment D instance with the system it was drawn from.
#[derive(Debug, Clone)]
pub struct ExpD {
    pub formula: SnfNoEq,
    pub system: GraphSystem,
}

/// Draws a random one-layer system on `2^n` vertices and encodes it.
///
/// Coins are the low bits of successive `next_u32` calls: first one per
/// conflict pair `u < v`, then one per ordered pair `(u, v)` of layer 1. A
/// layer edge between conflicting vertices can never be witnessed, so such
/// edges are dropped from the returned system.
pub fn gen_exp_d(n: usize, seed: u64) -> Result<ExpD> {
    if n == 0 || n > 12 {
        return Err(Error::Usage("exp_d needs 1 <= n <= 12".into()));
    }
    let size = 1usize << n;
    let mut rng = super::rng(seed);
    let mut coin = || rng.next_u32() & 1 == 1;
    let mut conflicts = vec![vec![false; size]; size];
    for p in 0..size {
        for q in p + 1..size {
            if coin() {
                conflicts[p][q] = true;
                conflicts[q][p] = true;
            }
        }
    }
    let mut b = GraphSystem::builder(size, 1);
    for p in 0..size {
        for q in p + 1..size {
            if conflicts[p][q] {
                b.conflict(p, q)?;
            }
        }
    }
    for p in 0..size {
        for q in 0..size {
            if coin() && !conflicts[p][q] {
                b.edge(1, p, q)?;
            }
        }
    }
    let system = b.build()?;
    let formula = encode_system(&system, n)?;
    Ok(ExpD { formula, system })
}
