//! Scott-normal-form FO² sentences, their text format, and the compiler from
//! sentences to graph systems.
//!
//! Two shapes are supported. The equality-free shape is
//! `∀x∀y α(x,y) ∧ ⋀ᵢ ∀x∃y βᵢ(x,y)`; the equality shape is
//! `∀x γ(x) ∧ ∀x∀y (x≠y → α(x,y)) ∧ ⋀ᵢ ∀x∃y (x≠y ∧ βᵢ(x,y))` with every `βᵢ` a
//! single binary atom.

mod compile;
mod parse;
mod print;

use std::fmt;

use crate::error::{Error, Result};
use crate::oracle::{Atom, AtomTable, Expr, QfFormula, Var};

pub use compile::{
    beta_compatible, build_graph_system, build_graph_system_with, classify_formula,
    enumerate_admissible_types, enumerate_admissible_types_with, pair_compatible, Admissibility,
    CompileOptions, CompiledSystem,
};
pub use parse::parse_fo2;
pub use print::{write_fo2, FormulaDisplay};

/// Predicates starting with this prefix are reserved for rewritten sentences.
pub const RESERVED_PREFIX: &str = "__";

/// Most 1-literals a vocabulary may have, fixed by the width of [`OneType`].
pub const MAX_ONE_LITERALS: usize = 128;
/// Most binary predicates, fixed by the width of [`TwoType`].
pub const MAX_BINARY: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    unary: Vec<String>,
    binary: Vec<String>,
}

impl Vocabulary {
    pub fn new<S: Into<String>>(
        unary: impl IntoIterator<Item = S>,
        binary: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let unary: Vec<String> = unary.into_iter().map(Into::into).collect();
        let binary: Vec<String> = binary.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for name in unary.iter().chain(&binary) {
            if !is_identifier(name) {
                return Err(Error::Usage(format!("invalid predicate name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Usage(format!("predicate {name} declared twice")));
            }
        }
        if binary.len() > MAX_BINARY {
            return Err(Error::TooLarge(format!(
                "{} binary predicates (at most {MAX_BINARY})",
                binary.len()
            )));
        }
        if unary.len() + binary.len() > MAX_ONE_LITERALS {
            return Err(Error::TooLarge(format!(
                "{} predicates (at most {MAX_ONE_LITERALS})",
                unary.len() + binary.len()
            )));
        }
        Ok(Vocabulary { unary, binary })
    }

    pub fn unary(&self) -> &[String] {
        &self.unary
    }

    pub fn binary(&self) -> &[String] {
        &self.binary
    }

    pub fn n_predicates(&self) -> usize {
        self.unary.len() + self.binary.len()
    }

    pub fn unary_index(&self, name: &str) -> Option<usize> {
        self.unary.iter().position(|n| n == name)
    }

    pub fn binary_index(&self, name: &str) -> Option<usize> {
        self.binary.iter().position(|n| n == name)
    }

    pub fn atom_table(&self, with_eq: bool) -> AtomTable {
        AtomTable::new(self.unary.len(), self.binary.len(), with_eq)
    }

    pub fn uses_reserved_names(&self) -> Option<&str> {
        self.unary
            .iter()
            .chain(&self.binary)
            .find(|n| n.starts_with(RESERVED_PREFIX))
            .map(String::as_str)
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(name, "x" | "y" | "true" | "false")
}

/// `∀x∀y α(x,y) ∧ ⋀ᵢ ∀x∃y βᵢ(x,y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfNoEq {
    vocab: Vocabulary,
    table: AtomTable,
    alpha: QfFormula,
    betas: Vec<QfFormula>,
}

impl SnfNoEq {
    pub fn new(vocab: Vocabulary, alpha: &Expr<Atom>, betas: &[Expr<Atom>]) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::Usage("at least one ∀∃ conjunct is required".into()));
        }
        let table = vocab.atom_table(false);
        check_predicates(&vocab, alpha)?;
        let alpha = table.lower(alpha)?;
        let betas = betas
            .iter()
            .map(|b| {
                check_predicates(&vocab, b)?;
                table.lower(b)
            })
            .collect::<Result<_>>()?;
        Ok(SnfNoEq {
            vocab,
            table,
            alpha,
            betas,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn table(&self) -> &AtomTable {
        &self.table
    }

    pub fn alpha(&self) -> &QfFormula {
        &self.alpha
    }

    pub fn betas(&self) -> &[QfFormula] {
        &self.betas
    }

    pub fn m(&self) -> usize {
        self.betas.len()
    }

    pub fn n_one_literals(&self) -> usize {
        self.table.one_literal_width()
    }

    /// Total node count of all matrices.
    pub fn size(&self) -> usize {
        self.alpha.size() + self.betas.iter().map(Expr::size).sum::<usize>()
    }
}

/// `∀x γ(x) ∧ ∀x∀y (x≠y → α) ∧ ⋀ᵢ ∀x∃y (x≠y ∧ βᵢ(x,y))`, `βᵢ` naming binary
/// predicates.
///
/// `α` may mention `x = y`; under the guard such atoms are false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfWithEq {
    vocab: Vocabulary,
    table: AtomTable,
    gamma: QfFormula,
    alpha: QfFormula,
    betas: Vec<usize>,
}

impl SnfWithEq {
    pub fn new(vocab: Vocabulary, gamma: &Expr<Atom>, alpha: &Expr<Atom>, betas: &[usize]) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::Usage("at least one ∀∃ conjunct is required".into()));
        }
        if let Some(&b) = betas.iter().find(|&&b| b >= vocab.binary.len()) {
            return Err(Error::Usage(format!("witness predicate index {b} is not a binary predicate")));
        }
        let table = vocab.atom_table(true);
        for f in [gamma, alpha] {
            check_predicates(&vocab, f)?;
            if f.any_atom(|a| matches!(a, Atom::Binary { first, second, .. } if first == second)) {
                return Err(Error::Usage("diagonal binary atoms are not allowed with equality".into()));
            }
        }
        if gamma.any_atom(|a| !matches!(a, Atom::Unary { var: Var::X, .. })) {
            return Err(Error::Usage("gamma may only use unary atoms over x".into()));
        }
        Ok(SnfWithEq {
            gamma: table.lower(gamma)?,
            alpha: table.lower(alpha)?,
            betas: betas.to_vec(),
            vocab,
            table,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn table(&self) -> &AtomTable {
        &self.table
    }

    pub fn gamma(&self) -> &QfFormula {
        &self.gamma
    }

    pub fn alpha(&self) -> &QfFormula {
        &self.alpha
    }

    /// Binary predicate index of each witness requirement.
    pub fn betas(&self) -> &[usize] {
        &self.betas
    }

    pub fn m(&self) -> usize {
        self.betas.len()
    }

    pub fn size(&self) -> usize {
        self.gamma.size() + self.alpha.size() + self.betas.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Snf {
    NoEq(SnfNoEq),
    WithEq(SnfWithEq),
}

impl Snf {
    pub fn vocab(&self) -> &Vocabulary {
        match self {
            Snf::NoEq(f) => f.vocab(),
            Snf::WithEq(f) => f.vocab(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            Snf::NoEq(f) => f.m(),
            Snf::WithEq(f) => f.m(),
        }
    }
}

fn check_predicates(vocab: &Vocabulary, f: &Expr<Atom>) -> Result<()> {
    let mut bad = None;
    f.for_each_atom(&mut |a| {
        let ok = match *a {
            Atom::Unary { pred, .. } => pred < vocab.unary.len(),
            Atom::Binary { pred, .. } => pred < vocab.binary.len(),
            Atom::Eq => true,
        };
        if !ok && bad.is_none() {
            bad = Some(*a);
        }
    });
    match bad {
        Some(a) => Err(Error::Usage(format!("atom {a:?} refers to an undeclared predicate"))),
        None => Ok(()),
    }
}

/// Assignment to the 1-literals of one variable: bit `i` is unary predicate
/// `i` for `i < n_unary`, then `R_j(v,v)` at bit `n_unary + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OneType(pub u128);

impl OneType {
    pub fn bit(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn render(self, vocab: &Vocabulary) -> String {
        let nu = vocab.unary.len();
        let lits = vocab
            .unary
            .iter()
            .enumerate()
            .map(|(i, n)| (self.bit(i), n.clone()))
            .chain(vocab.binary.iter().enumerate().map(|(j, n)| (self.bit(nu + j), format!("{n}(x,x)"))));
        lits.map(|(b, n)| if b { n } else { format!("~{n}") })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Assignment to the cross atoms: bit `2j` is `R_j(x,y)`, bit `2j+1` is
/// `R_j(y,x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TwoType(pub u64);

impl TwoType {
    const EVEN: u64 = 0x5555_5555_5555_5555;

    pub fn forward(self, pred: usize) -> bool {
        self.0 >> (2 * pred) & 1 == 1
    }

    pub fn backward(self, pred: usize) -> bool {
        self.0 >> (2 * pred + 1) & 1 == 1
    }

    /// The same 2-type seen from the other element.
    pub fn reverse(self) -> TwoType {
        TwoType((self.0 & Self::EVEN) << 1 | (self.0 >> 1) & Self::EVEN)
    }
}

impl fmt::Display for TwoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_validation() {
        assert!(Vocabulary::new(["U", "V"], ["R"]).is_ok());
        assert!(Vocabulary::new(["U", "U"], Vec::<&str>::new()).is_err());
        assert!(Vocabulary::new(["U"], ["U"]).is_err());
        assert!(Vocabulary::new(["x"], Vec::<&str>::new()).is_err());
        assert!(Vocabulary::new(["1a"], Vec::<&str>::new()).is_err());
    }

    #[test]
    fn two_type_reverse() {
        let t = TwoType(0b10_01_11);
        assert_eq!(t.reverse(), TwoType(0b01_10_11));
        assert_eq!(t.reverse().reverse(), t);
        assert!(t.forward(0) && t.backward(0) && t.forward(1) && !t.backward(1));
    }

    #[test]
    fn eq_shape_rejects_diagonals() {
        let v = Vocabulary::new(["U"], ["R"]).unwrap();
        let diag = Expr::atom(Atom::Binary { pred: 0, first: Var::X, second: Var::X });
        assert!(SnfWithEq::new(v.clone(), &Expr::True, &diag, &[0]).is_err());
        let uy = Expr::atom(Atom::Unary { pred: 0, var: Var::Y });
        assert!(SnfWithEq::new(v.clone(), &uy, &Expr::True, &[0]).is_err());
        assert!(SnfWithEq::new(v, &Expr::True, &Expr::True, &[1]).is_err());
    }

    #[test]
    fn no_eq_rejects_equality_atom() {
        let v = Vocabulary::new(["U"], Vec::<&str>::new()).unwrap();
        assert!(SnfNoEq::new(v.clone(), &Expr::atom(Atom::Eq), &[Expr::True]).is_err());
        assert!(SnfNoEq::new(v, &Expr::True, &[]).is_err());
    }
}
