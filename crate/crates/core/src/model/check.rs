use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fo2::{OneType, SnfNoEq, SnfWithEq};
use crate::oracle::{AtomTable, Expr, QfFormula};

use super::FiniteModel;

/// Which part of a sentence failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjunct {
    /// The unary conjunct `∀x γ`.
    Gamma,
    /// The `∀x∀y` matrix.
    Forall,
    /// The `i`-th `∀x∃y` conjunct, from 1.
    Exists(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub conjunct: Conjunct,
    /// The element the conjunct fails at.
    pub a: usize,
    /// The second element of a failing `∀∀` pair.
    pub b: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.conjunct, self.b) {
            (Conjunct::Gamma, _) => write!(f, "gamma fails at element {}", self.a),
            (Conjunct::Forall, Some(b)) => write!(f, "forall matrix fails at pair ({}, {b})", self.a),
            (Conjunct::Forall, None) => write!(f, "forall matrix fails at element {}", self.a),
            (Conjunct::Exists(i), _) => write!(f, "element {} has no witness for exists conjunct {i}", self.a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelCheck {
    Holds,
    Violated(Violation),
}

impl ModelCheck {
    pub fn holds(&self) -> bool {
        matches!(self, ModelCheck::Holds)
    }
}

/// Evaluates matrices pair by pair. Residuals over the cross atoms are cached
/// per pair of element 1-types, so each pair costs one small evaluation.
struct PairEvaluator<'a> {
    table: &'a AtomTable,
    mdl: &'a FiniteModel,
    /// Value substituted for `x = y`, when the table has it, on distinct pairs.
    eq_distinct: Option<bool>,
    type_of: Vec<usize>,
    types: Vec<OneType>,
}

impl<'a> PairEvaluator<'a> {
    fn new(table: &'a AtomTable, mdl: &'a FiniteModel) -> Self {
        let mut index = HashMap::new();
        let mut types = Vec::new();
        let type_of = (0..mdl.size())
            .map(|a| {
                let t = mdl.one_type(a);
                *index.entry(t).or_insert_with(|| {
                    types.push(t);
                    types.len() - 1
                })
            })
            .collect();
        PairEvaluator {
            table,
            mdl,
            eq_distinct: table.eq_atom().map(|_| false),
            type_of,
            types,
        }
    }

    /// `f` with `x` carrying type `tx` and `y` carrying `ty`, as a formula over
    /// cross-atom positions. The equality atom, if present, is false.
    fn residual(&self, f: &QfFormula, tx: OneType, ty: OneType) -> Expr<usize> {
        let l = self.table.one_literal_width();
        let base = self.table.cross_base();
        let eq = self.table.eq_atom();
        f.restrict(&|&id| {
            if id < l {
                Some(tx.bit(id))
            } else if id < 2 * l {
                Some(ty.bit(id - l))
            } else if Some(id) == eq {
                self.eq_distinct
            } else {
                None
            }
        })
        .map_atoms(&|&id| id - base)
    }

    fn table_for(&self, f: &QfFormula) -> Vec<Vec<Expr<usize>>> {
        self.types
            .par_iter()
            .map(|&tx| self.types.iter().map(|&ty| self.residual(f, tx, ty)).collect())
            .collect()
    }

    fn holds(&self, residuals: &[Vec<Expr<usize>>], a: usize, b: usize) -> bool {
        let r = &residuals[self.type_of[a]][self.type_of[b]];
        match r.as_constant() {
            Some(v) => v,
            None => {
                let eta = self.mdl.two_type(a, b).0;
                r.eval(&|&c| eta >> c & 1 == 1)
            }
        }
    }
}

/// Brute-force check of `∀x∀y α ∧ ⋀ᵢ ∀x∃y βᵢ`: α on every ordered pair including
/// `a = b`, and a witness for every element and every `βᵢ`.
pub fn check_model(phi: &SnfNoEq, mdl: &FiniteModel) -> Result<ModelCheck> {
    if !mdl.matches(phi.vocab()) {
        return Err(Error::Usage("model does not match the vocabulary".into()));
    }
    let ev = PairEvaluator::new(phi.table(), mdl);
    let alpha = ev.table_for(phi.alpha());
    let betas: Vec<_> = phi.betas().iter().map(|b| ev.table_for(b)).collect();
    let n = mdl.size();
    let found = (0..n).into_par_iter().find_map_first(|a| {
        if let Some(b) = (0..n).find(|&b| !ev.holds(&alpha, a, b)) {
            return Some(Violation {
                conjunct: Conjunct::Forall,
                a,
                b: Some(b),
            });
        }
        betas.iter().enumerate().find_map(|(i, beta)| {
            (!(0..n).any(|b| ev.holds(beta, a, b))).then_some(Violation {
                conjunct: Conjunct::Exists(i + 1),
                a,
                b: None,
            })
        })
    });
    Ok(found.map_or(ModelCheck::Holds, ModelCheck::Violated))
}

/// Check of `∀x γ ∧ ∀x∀y (x≠y → α) ∧ ⋀ᵢ ∀x∃y (x≠y ∧ βᵢ(x,y))`.
pub fn check_model_eq(psi: &SnfWithEq, mdl: &FiniteModel) -> Result<ModelCheck> {
    if !mdl.matches(psi.vocab()) {
        return Err(Error::Usage("model does not match the vocabulary".into()));
    }
    let ev = PairEvaluator::new(psi.table(), mdl);
    let alpha = ev.table_for(psi.alpha());
    let n = mdl.size();
    for a in 0..n {
        let t = mdl.one_type(a);
        if ev.residual(psi.gamma(), t, t).as_constant() != Some(true) {
            return Ok(ModelCheck::Violated(Violation {
                conjunct: Conjunct::Gamma,
                a,
                b: None,
            }));
        }
    }
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            if !ev.holds(&alpha, a, b) {
                return Ok(ModelCheck::Violated(Violation {
                    conjunct: Conjunct::Forall,
                    a,
                    b: Some(b),
                }));
            }
        }
        for (i, &pred) in psi.betas().iter().enumerate() {
            if !(0..n).any(|b| b != a && mdl.binary(pred, a, b)) {
                return Ok(ModelCheck::Violated(Violation {
                    conjunct: Conjunct::Exists(i + 1),
                    a,
                    b: None,
                }));
            }
        }
    }
    Ok(ModelCheck::Holds)
}
