//! Linear-time elimination of equality: a sentence
//! `∀x γ ∧ ∀x∀y (x≠y → α) ∧ ⋀ᵢ ∀x∃y (x≠y ∧ βᵢ)` becomes an equisatisfiable
//! equality-free sentence whose elements stand for witness pairs of the
//! original.
//!
//! The rewritten vocabulary keeps the binary predicates and adds unary ones:
//! `__Ks`/`__Kt` (source/target is a king), `__S_U`/`__T_U` (source/target
//! carries `U`), `__P_R`/`__Pbar_R` (the pair is in `R` / reversed in `R`) and
//! id bits `__Z1..__Zp` with `p = n + ⌈log₂ 3m⌉`.
//!
//! Two constructions are available. In [`Construction::Classic`] the
//! distinctness guard `ξ≠` holds on the diagonal pair `(b, b)` whenever `b`'s
//! source is not a king, which forces `α` to hold under a 2-type that is
//! symmetric in every binary predicate. A sentence whose models are
//! tournaments (the 3-cycle, say) is then turned into an unsatisfiable one.
//! [`Construction::Corrected`], the default, uses
//! `ξ≠(x, y) = ¬(ξ_S(x, y) ∧ ξ_Z(x, y))` (the sources differ in type or in
//! id), and its inverse-pair conjunct also asks that a pair whose source and
//! target types agree is inverted by a pair with a different source id, so
//! such a type has at least two elements to pair up. Since the diagonal no
//! longer constrains non-king types, it also asks that a non-king source type
//! admits some 2-type under which two of its elements satisfy `α`. Both
//! constructions keep `m + 1` ∃-conjuncts.

use crate::error::Result;
use crate::fo2::{SnfNoEq, SnfWithEq, Vocabulary, RESERVED_PREFIX};
use crate::oracle::{Atom, Expr, Var};

type F = Expr<Atom>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Construction {
    #[default]
    Corrected,
    Classic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarCounts {
    pub unary: usize,
    pub binary: usize,
    pub exists_conjuncts: usize,
}

/// `⌈log₂ v⌉` for `v ≥ 1`.
fn ceil_log2(v: usize) -> usize {
    if v <= 1 {
        0
    } else {
        (v - 1).ilog2() as usize + 1
    }
}

/// Number of id predicates `Z`.
pub fn id_bits(n_unary: usize, m: usize) -> usize {
    n_unary + ceil_log2(3 * m)
}

/// Predicate and conjunct counts of the rewritten sentence; both
/// constructions share them.
pub fn count_star_predicates(psi: &SnfWithEq) -> StarCounts {
    let n = psi.vocab().unary().len();
    let k = psi.vocab().binary().len();
    let m = psi.m();
    StarCounts {
        unary: 2 + 2 * n + 2 * k + id_bits(n, m),
        binary: k,
        exists_conjuncts: m + 1,
    }
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

/// Unary predicate indices of the rewritten vocabulary.
struct Star {
    n: usize,
    k: usize,
    p: usize,
}

impl Star {
    const KS: usize = 0;
    const KT: usize = 1;

    fn s(&self, i: usize) -> usize {
        2 + i
    }
    fn t(&self, i: usize) -> usize {
        2 + self.n + i
    }
    fn pp(&self, j: usize) -> usize {
        2 + 2 * self.n + j
    }
    fn pbar(&self, j: usize) -> usize {
        2 + 2 * self.n + self.k + j
    }
    fn z(&self, i: usize) -> usize {
        2 + 2 * self.n + 2 * self.k + i
    }

    fn names(&self, vocab: &Vocabulary) -> Vec<String> {
        let mut out = vec![format!("{RESERVED_PREFIX}Ks"), format!("{RESERVED_PREFIX}Kt")];
        out.extend(vocab.unary().iter().map(|u| format!("{RESERVED_PREFIX}S_{u}")));
        out.extend(vocab.unary().iter().map(|u| format!("{RESERVED_PREFIX}T_{u}")));
        out.extend(vocab.binary().iter().map(|r| format!("{RESERVED_PREFIX}P_{r}")));
        out.extend(vocab.binary().iter().map(|r| format!("{RESERVED_PREFIX}Pbar_{r}")));
        out.extend((1..=self.p).map(|i| format!("{RESERVED_PREFIX}Z{i}")));
        out
    }

    /// `⋀ᵢ a_i(x) ↔ b_i(y)` over index pairs from `pairs`.
    fn same(pairs: impl IntoIterator<Item = (usize, usize)>, x: Var, y: Var) -> F {
        conj(pairs.into_iter().map(|(a, b)| Expr::iff(u(a, x), u(b, y))).collect())
    }

    fn xi_s(&self, x: Var, y: Var) -> F {
        Self::same((0..self.n).map(|i| (self.s(i), self.s(i))), x, y)
    }
    fn xi_t(&self, x: Var, y: Var) -> F {
        Self::same((0..self.n).map(|i| (self.t(i), self.t(i))), x, y)
    }
    fn xi_z(&self, x: Var, y: Var) -> F {
        Self::same((0..self.p).map(|i| (self.z(i), self.z(i))), x, y)
    }
    fn xi_p(&self, x: Var, y: Var) -> F {
        Self::same(
            (0..self.k).flat_map(|j| [(self.pp(j), self.pp(j)), (self.pbar(j), self.pbar(j))]),
            x,
            y,
        )
    }
    fn xi_rev(&self, x: Var, y: Var) -> F {
        Self::same(
            (0..self.k).flat_map(|j| [(self.pp(j), self.pbar(j)), (self.pbar(j), self.pp(j))]),
            x,
            y,
        )
    }
    fn xi_st(&self, x: Var, y: Var) -> F {
        Self::same((0..self.n).map(|i| (self.s(i), self.t(i))), x, y)
    }
    fn xi_neq(&self, x: Var, y: Var, c: Construction) -> F {
        match c {
            Construction::Classic => Expr::implies(
                Expr::And(vec![u(Self::KS, x), u(Self::KS, y)]),
                Expr::not(self.xi_s(x, y)),
            ),
            Construction::Corrected => Expr::not(conj(vec![self.xi_s(x, y), self.xi_z(x, y)])),
        }
    }
    fn xi_id(&self, x: Var, y: Var) -> F {
        conj(vec![
            self.xi_s(x, y),
            Expr::implies(
                Expr::And(vec![Expr::not(u(Self::KS, y)), u(Self::KT, y)]),
                self.xi_z(x, y),
            ),
        ])
    }
}

fn u(pred: usize, var: Var) -> F {
    Expr::atom(Atom::Unary { pred, var })
}

/// Over `x` alone: two distinct elements with the source 1-type of `x` admit
/// a 2-type under which `α` holds. One copy of `α` per 2-type, so the size
/// grows with `4^k`.
fn twin_compatible(alpha: &F, st: &Star, k: usize) -> F {
    let x = Var::X;
    disj(
        (0..1usize << (2 * k))
            .map(|eta| {
                alpha
                    .substitute(&|a| match *a {
                        Atom::Unary { pred, .. } => u(st.s(pred), x),
                        Atom::Binary { pred, first, .. } => {
                            let bit = 2 * pred + usize::from(first == Var::Y);
                            Expr::constant(eta >> bit & 1 == 1)
                        }
                        Atom::Eq => Expr::False,
                    })
                    .simplify()
            })
            .collect(),
    )
    .simplify()
}

/// Rewrites `psi` into the equality-free shape. The ∀∀ matrix conjoins the
/// structural constraints on pair elements, `γ` and `α` transferred to the
/// pairs; the ∃-list holds one conjunct per witness requirement followed by
/// the inverse-pair conjunct.
pub fn eliminate_equality(psi: &SnfWithEq) -> Result<SnfNoEq> {
    eliminate_equality_with(psi, Construction::default())
}

pub fn eliminate_equality_with(psi: &SnfWithEq, construction: Construction) -> Result<SnfNoEq> {
    let vocab = psi.vocab();
    let n = vocab.unary().len();
    let k = vocab.binary().len();
    let m = psi.m();
    let st = Star { n, k, p: id_bits(n, m) };
    let (x, y) = (Var::X, Var::Y);
    let table = psi.table();
    let gamma = table.lift(psi.gamma());
    let alpha = table.lift(psi.alpha());

    let psi1 = disj(
        psi.betas()
            .iter()
            .flat_map(|&b| [u(st.pp(b), x), u(st.pbar(b), x)])
            .collect(),
    );
    let psi2 = Expr::implies(st.xi_s(x, y), Expr::iff(u(Star::KS, x), u(Star::KS, y)));
    let psi3 = Expr::implies(st.xi_t(x, y), Expr::iff(u(Star::KT, x), u(Star::KT, y)));
    let psi5 = Expr::implies(
        st.xi_st(x, x),
        Expr::And(vec![Expr::not(u(Star::KS, x)), Expr::not(u(Star::KT, x))]),
    );
    let psi6 = Expr::implies(
        conj(vec![st.xi_s(x, y), st.xi_t(x, y), st.xi_z(x, y), u(Star::KT, x)]),
        st.xi_p(x, y),
    );
    let psi7 = Expr::implies(
        u(Star::KS, x),
        conj((0..st.p).map(|i| Expr::not(u(st.z(i), x))).collect()),
    );
    let psi8 = gamma.substitute(&|a| match *a {
        Atom::Unary { pred, .. } => u(st.s(pred), x),
        other => Expr::Atom(other),
    });
    let alpha1 = alpha.substitute(&|a| match *a {
        Atom::Unary { pred, var: Var::X } => u(st.s(pred), x),
        Atom::Unary { pred, var: Var::Y } => u(st.t(pred), x),
        Atom::Binary { pred, first: Var::X, .. } => u(st.pp(pred), x),
        Atom::Binary { pred, first: Var::Y, .. } => u(st.pbar(pred), x),
        Atom::Eq => Expr::False,
    });
    let alpha2 = alpha.substitute(&|a| match *a {
        Atom::Unary { pred, var } => u(st.s(pred), var),
        Atom::Eq => Expr::False,
        other => Expr::Atom(other),
    });
    let psi9 = Expr::And(vec![alpha1, Expr::implies(st.xi_neq(x, y, construction), alpha2)]);
    let mut parts = vec![psi1, psi2, psi3, psi5, psi6, psi7, psi8, psi9];
    if construction == Construction::Corrected {
        parts.push(Expr::or([u(Star::KS, x), twin_compatible(&alpha, &st, k)]));
    }
    let alpha_star = Expr::And(parts);

    let mut exists: Vec<F> = psi
        .betas()
        .iter()
        .map(|&b| conj(vec![st.xi_id(x, y), u(st.pp(b), y)]))
        .collect();
    let mut inverse = vec![
        st.xi_st(x, y),
        st.xi_st(y, x),
        st.xi_rev(x, y),
        Expr::iff(u(Star::KS, x), u(Star::KT, y)),
        Expr::iff(u(Star::KT, x), u(Star::KS, y)),
    ];
    if construction == Construction::Corrected {
        inverse.push(Expr::implies(st.xi_st(x, x), Expr::not(st.xi_z(x, y))));
    }
    exists.push(conj(inverse));

    let star_vocab = Vocabulary::new(st.names(vocab), vocab.binary().to_vec())?;
    SnfNoEq::new(star_vocab, &alpha_star, &exists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo2::{parse_fo2, write_fo2, Snf};

    fn eq(text: &str) -> SnfWithEq {
        match parse_fo2(text).unwrap() {
            Snf::WithEq(f) => f,
            Snf::NoEq(_) => unreachable!(),
        }
    }

    #[test]
    fn counts() {
        let psi = eq("fo2 eq\nunary U\nbinary R\nexists_neq: R\n");
        let c = count_star_predicates(&psi);
        assert_eq!(c, StarCounts { unary: 9, binary: 1, exists_conjuncts: 2 });
        let out = eliminate_equality_with(&psi, Construction::Classic).unwrap();
        assert_eq!(out.vocab().unary().len(), 9);
        assert_eq!(out.vocab().binary(), &["R".to_string()]);
        assert_eq!(out.m(), 2);
        assert_eq!(eliminate_equality(&psi).unwrap().m(), 2);

        let psi0 = eq("fo2 eq\nbinary R\nexists_neq: R\n");
        assert_eq!(count_star_predicates(&psi0).unary, 6);
        assert_eq!(eliminate_equality(&psi0).unwrap().vocab().unary().len(), 6);
    }

    #[test]
    fn ceil_log() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(6), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn output_is_equality_free_and_reparses() {
        let psi = eq("fo2 eq\nunary U V\nbinary S T\ngamma: U(x) | V(x)\nforall_neq: (x = y | S(x,y)) -> U(y) & ~T(y,x)\nexists_neq: S\nexists_neq: T\n");
        let out = eliminate_equality(&psi).unwrap();
        assert!(out.table().eq_atom().is_none());
        let snf = Snf::NoEq(out);
        let text = write_fo2(&snf, &[]);
        assert_eq!(parse_fo2(&text).unwrap(), snf);
        assert!(text.contains("__Pbar_T"));
        assert!(text.contains("__Z4"));
    }
}
