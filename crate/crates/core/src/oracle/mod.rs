//! Propositional reasoning over the quantifier-free matrices of FO² sentences.
//!
//! Matrices are [`Expr`] trees whose atoms index into an [`AtomTable`]. Two
//! questions are answered: the value of a matrix under a total assignment, and
//! whether the cross atoms `R(x,y)`/`R(y,x)` can be chosen so that a matrix
//! holds once every 1-literal is fixed.

mod expr;
mod search;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use expr::Expr;
pub use search::first_model;

pub type AtomId = usize;

/// Formula over atom ids of some [`AtomTable`].
pub type QfFormula = Expr<AtomId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
        }
    }
}

/// An atomic formula; predicates are indices into the owning vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Unary { pred: usize, var: Var },
    Binary { pred: usize, first: Var, second: Var },
    Eq,
}

impl Atom {
    /// Unary atoms and diagonal binary atoms mention a single variable.
    pub fn is_one_literal(&self) -> bool {
        match *self {
            Atom::Unary { .. } => true,
            Atom::Binary { first, second, .. } => first == second,
            Atom::Eq => false,
        }
    }

    pub fn is_cross(&self) -> bool {
        matches!(*self, Atom::Binary { first, second, .. } if first != second)
    }

    /// Swaps `x` and `y`.
    pub fn swap_vars(&self) -> Atom {
        match *self {
            Atom::Unary { pred, var } => Atom::Unary { pred, var: var.other() },
            Atom::Binary { pred, first, second } => Atom::Binary {
                pred,
                first: first.other(),
                second: second.other(),
            },
            Atom::Eq => Atom::Eq,
        }
    }

    /// Replaces `y` by `x`.
    pub fn diagonal(&self) -> Atom {
        match *self {
            Atom::Unary { pred, .. } => Atom::Unary { pred, var: Var::X },
            Atom::Binary { pred, .. } => Atom::Binary {
                pred,
                first: Var::X,
                second: Var::X,
            },
            Atom::Eq => Atom::Eq,
        }
    }
}

/// The atoms over `n_unary` unary and `n_binary` binary predicates, in a fixed
/// layout.
///
/// With `L = n_unary + n_binary`, ids `0..L` are the x-side 1-literals
/// (`U_i(x)` then `R_j(x,x)`), ids `L..2L` the same literals over `y`, then
/// `R_j(x,y)` at `2L + 2j` and `R_j(y,x)` at `2L + 2j + 1`; the equality atom,
/// if present, comes last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTable {
    n_unary: usize,
    n_binary: usize,
    atoms: Vec<Atom>,
    index: HashMap<Atom, AtomId>,
}

impl AtomTable {
    pub fn new(n_unary: usize, n_binary: usize, with_eq: bool) -> Self {
        let mut atoms = Vec::new();
        for var in [Var::X, Var::Y] {
            atoms.extend((0..n_unary).map(|pred| Atom::Unary { pred, var }));
            atoms.extend((0..n_binary).map(|pred| Atom::Binary {
                pred,
                first: var,
                second: var,
            }));
        }
        for pred in 0..n_binary {
            atoms.push(Atom::Binary { pred, first: Var::X, second: Var::Y });
            atoms.push(Atom::Binary { pred, first: Var::Y, second: Var::X });
        }
        if with_eq {
            atoms.push(Atom::Eq);
        }
        let index = atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        AtomTable {
            n_unary,
            n_binary,
            atoms,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn n_unary(&self) -> usize {
        self.n_unary
    }

    pub fn n_binary(&self) -> usize {
        self.n_binary
    }

    /// Number of 1-literals per variable.
    pub fn one_literal_width(&self) -> usize {
        self.n_unary + self.n_binary
    }

    pub fn atom(&self, id: AtomId) -> Atom {
        self.atoms[id]
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn id(&self, atom: &Atom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    pub fn eq_atom(&self) -> Option<AtomId> {
        self.id(&Atom::Eq)
    }

    /// Position of a 1-literal within its variable's block, and that variable.
    pub fn slot(&self, id: AtomId) -> Option<(Var, usize)> {
        let l = self.one_literal_width();
        if id < l {
            Some((Var::X, id))
        } else if id < 2 * l {
            Some((Var::Y, id - l))
        } else {
            None
        }
    }

    /// Id of the first cross atom; cross atom `c` (bit `c` of a 2-type) has
    /// id `cross_base() + c`.
    pub fn cross_base(&self) -> AtomId {
        2 * self.one_literal_width()
    }

    pub fn n_cross(&self) -> usize {
        2 * self.n_binary
    }

    pub fn cross_index(&self, id: AtomId) -> Option<usize> {
        let base = self.cross_base();
        (id >= base && id < base + self.n_cross()).then(|| id - base)
    }

    /// Resolves atoms to ids; fails on atoms outside the table (for example
    /// `x = y` in a table built without equality).
    pub fn lower(&self, f: &Expr<Atom>) -> Result<QfFormula> {
        let mut bad = None;
        f.for_each_atom(&mut |a| {
            if self.id(a).is_none() && bad.is_none() {
                bad = Some(*a);
            }
        });
        if let Some(a) = bad {
            return Err(Error::Usage(format!("atom {a:?} is not in the table")));
        }
        Ok(f.map_atoms(&|a| self.id(a).expect("checked")))
    }

    pub fn lift(&self, f: &QfFormula) -> Expr<Atom> {
        f.map_atoms(&|&id| self.atoms[id])
    }

    pub fn describe(&self, id: AtomId) -> AtomDisplay<'_> {
        AtomDisplay {
            atom: self.atoms[id],
            unary: None,
            binary: None,
        }
    }
}

/// Renders an atom, with predicate names when available.
pub struct AtomDisplay<'a> {
    pub atom: Atom,
    pub unary: Option<&'a [String]>,
    pub binary: Option<&'a [String]>,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |names: Option<&[String]>, prefix: &str, i: usize| match names {
            Some(n) => n[i].clone(),
            None => format!("{prefix}{i}"),
        };
        match self.atom {
            Atom::Unary { pred, var } => write!(f, "{}({})", name(self.unary, "U", pred), var.name()),
            Atom::Binary { pred, first, second } => write!(
                f,
                "{}({},{})",
                name(self.binary, "R", pred),
                first.name(),
                second.name()
            ),
            Atom::Eq => write!(f, "x = y"),
        }
    }
}

/// Tri-state value per atom of a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn unassigned(table: &AtomTable) -> Self {
        Assignment {
            values: vec![None; table.len()],
        }
    }

    pub fn width(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, id: AtomId) -> Option<bool> {
        self.values.get(id).copied().flatten()
    }

    pub fn set(&mut self, id: AtomId, value: bool) {
        self.values[id] = Some(value);
    }

    pub fn clear(&mut self, id: AtomId) {
        self.values[id] = None;
    }

    pub fn with(mut self, id: AtomId, value: bool) -> Self {
        self.set(id, value);
        self
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }
}

fn check_width(table: &AtomTable, a: &Assignment) -> Result<()> {
    if a.width() != table.len() {
        return Err(Error::Usage(format!(
            "assignment has width {}, atom table has {} atoms",
            a.width(),
            table.len()
        )));
    }
    Ok(())
}

fn check_atoms(table: &AtomTable, f: &QfFormula) -> Result<()> {
    let mut bad = None;
    f.for_each_atom(&mut |&id| {
        if id >= table.len() {
            bad = Some(id);
        }
    });
    match bad {
        Some(id) => Err(Error::Usage(format!("atom id {id} is not in the table"))),
        None => Ok(()),
    }
}

/// Value of `f` under `a`; every atom occurring in `f` must be assigned.
pub fn evaluate(table: &AtomTable, f: &QfFormula, a: &Assignment) -> Result<bool> {
    check_width(table, a)?;
    check_atoms(table, f)?;
    let mut missing = None;
    f.for_each_atom(&mut |&id| {
        if a.get(id).is_none() && missing.is_none() {
            missing = Some(id);
        }
    });
    if let Some(id) = missing {
        return Err(Error::Usage(format!(
            "assignment leaves {} unassigned",
            table.describe(id)
        )));
    }
    Ok(f.eval(&|&id| a.get(id).unwrap_or(false)))
}

/// Extends `fixed` over `free` so that `f` holds, or reports that no extension
/// exists. Among satisfying extensions the one that is smallest as a binary
/// number (free atoms in ascending id order, the largest id most significant)
/// is returned.
pub fn exists_completion(
    table: &AtomTable,
    f: &QfFormula,
    fixed: &Assignment,
    free: &[AtomId],
) -> Result<Option<Assignment>> {
    check_width(table, fixed)?;
    check_atoms(table, f)?;
    let mut free: Vec<AtomId> = free.to_vec();
    free.sort_unstable();
    free.dedup();
    if let Some(&id) = free.iter().find(|&&id| id >= table.len() || !table.atom(id).is_cross()) {
        let what = if id < table.len() {
            table.describe(id).to_string()
        } else {
            format!("atom id {id}")
        };
        return Err(Error::Usage(format!("free atom {what} is not a cross atom")));
    }
    if free.len() > 64 {
        return Err(Error::TooLarge(format!("{} free atoms", free.len())));
    }
    let mut missing = None;
    f.for_each_atom(&mut |&id| {
        if fixed.get(id).is_none() && free.binary_search(&id).is_err() && missing.is_none() {
            missing = Some(id);
        }
    });
    if let Some(id) = missing {
        return Err(Error::Usage(format!(
            "{} is neither fixed nor free",
            table.describe(id)
        )));
    }
    let residual = f
        .restrict(&|&id| if free.binary_search(&id).is_ok() { None } else { fixed.get(id) })
        .map_atoms(&|&id| free.binary_search(&id).expect("only free atoms remain"));
    Ok(first_model(&residual, free.len()).map(|bits| {
        let mut out = fixed.clone();
        for (i, &id) in free.iter().enumerate() {
            out.set(id, bits >> i & 1 == 1);
        }
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rxy(t: &AtomTable) -> AtomId {
        t.id(&Atom::Binary { pred: 0, first: Var::X, second: Var::Y }).unwrap()
    }

    fn total_except_cross(t: &AtomTable) -> Assignment {
        let mut a = Assignment::unassigned(t);
        for id in 0..t.cross_base() {
            a.set(id, false);
        }
        a
    }

    #[test]
    fn layout() {
        let t = AtomTable::new(2, 1, true);
        assert_eq!(t.len(), 2 * 3 + 2 + 1);
        assert_eq!(t.atom(0), Atom::Unary { pred: 0, var: Var::X });
        assert_eq!(t.atom(2), Atom::Binary { pred: 0, first: Var::X, second: Var::X });
        assert_eq!(t.atom(3), Atom::Unary { pred: 0, var: Var::Y });
        assert_eq!(t.slot(4), Some((Var::Y, 1)));
        assert_eq!(t.cross_index(rxy(&t)), Some(0));
        assert_eq!(t.eq_atom(), Some(8));
        assert!(t.atom(2).is_one_literal());
    }

    #[test]
    fn evaluate_trivial() {
        let t = AtomTable::new(2, 1, false);
        let u = 0;
        let vy = 4;
        let a = total_except_cross(&t).with(rxy(&t), true).with(rxy(&t) + 1, false);
        let taut = Expr::or([Expr::atom(u), Expr::not(Expr::atom(u))]);
        assert!(evaluate(&t, &taut, &a).unwrap());
        let contra = Expr::and([Expr::atom(rxy(&t)), Expr::not(Expr::atom(rxy(&t)))]);
        assert!(!evaluate(&t, &contra, &a).unwrap());
        let imp = Expr::implies(Expr::atom(u), Expr::atom(vy));
        assert!(!evaluate(&t, &imp, &a.clone().with(u, true)).unwrap());
        let partial = Assignment::unassigned(&t);
        assert!(matches!(evaluate(&t, &imp, &partial), Err(Error::Usage(_))));
    }

    #[test]
    fn completion_trivial() {
        let t = AtomTable::new(1, 1, false);
        let r = rxy(&t);
        let fixed = total_except_cross(&t);
        let got = exists_completion(&t, &Expr::atom(r), &fixed, &[r, r + 1]).unwrap().unwrap();
        assert_eq!(got.get(r), Some(true));
        assert_eq!(got.get(r + 1), Some(false));
        let contra = Expr::and([Expr::atom(r), Expr::not(Expr::atom(r))]);
        assert!(exists_completion(&t, &contra, &fixed, &[r, r + 1]).unwrap().is_none());
        assert!(matches!(
            exists_completion(&t, &Expr::atom(0), &fixed, &[0]),
            Err(Error::Usage(_))
        ));
        // R(y,x) is neither fixed nor free.
        assert!(exists_completion(&t, &Expr::atom(r + 1), &fixed, &[r]).is_err());
    }
}
