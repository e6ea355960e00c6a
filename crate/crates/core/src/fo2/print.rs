use std::fmt::{self, Write};

use crate::oracle::{Atom, AtomDisplay, AtomTable, Expr, QfFormula};

use super::{Snf, Vocabulary};

/// Displays a formula in `.fo2` syntax with the fewest parentheses that still
/// reparse to the same tree.
pub struct FormulaDisplay<'a> {
    pub formula: &'a QfFormula,
    pub table: &'a AtomTable,
    pub vocab: &'a Vocabulary,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}

/// Single-item `And`/`Or` print as their item, empty ones as constants.
fn view(e: &QfFormula) -> &QfFormula {
    match e {
        Expr::And(items) | Expr::Or(items) if items.len() == 1 => view(&items[0]),
        other => other,
    }
}

fn precedence(e: &QfFormula) -> u8 {
    match view(e) {
        Expr::Iff(..) => 1,
        Expr::Implies(..) => 2,
        Expr::Or(items) if !items.is_empty() => 3,
        Expr::And(items) if !items.is_empty() => 4,
        _ => 5,
    }
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, e: &QfFormula, min: u8) -> fmt::Result {
        let e = view(e);
        if precedence(e) < min {
            f.write_char('(')?;
            self.write(f, e, 0)?;
            return f.write_char(')');
        }
        match e {
            Expr::True => f.write_str("true"),
            Expr::False => f.write_str("false"),
            Expr::Atom(id) => write!(f, "{}", self.atom(*id)),
            Expr::Not(inner) => {
                f.write_char('~')?;
                self.write(f, inner, 5)
            }
            Expr::And(items) if items.is_empty() => f.write_str("true"),
            Expr::Or(items) if items.is_empty() => f.write_str("false"),
            Expr::And(items) | Expr::Or(items) => {
                let (sep, level) = if matches!(e, Expr::And(_)) { (" & ", 5) } else { (" | ", 4) };
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    self.write(f, item, level)?;
                }
                Ok(())
            }
            Expr::Implies(a, b) => {
                self.write(f, a, 3)?;
                f.write_str(" -> ")?;
                self.write(f, b, 2)
            }
            Expr::Iff(a, b) => {
                self.write(f, a, 2)?;
                f.write_str(" <-> ")?;
                self.write(f, b, 1)
            }
        }
    }

    fn atom(&self, id: usize) -> AtomDisplay<'_> {
        let atom: Atom = self.table.atom(id);
        AtomDisplay {
            atom,
            unary: Some(self.vocab.unary()),
            binary: Some(self.vocab.binary()),
        }
    }
}

/// Renders a sentence in the `.fo2` format, preceded by `# ` comment lines.
pub fn write_fo2(snf: &Snf, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let vocab = snf.vocab();
    let show = |formula, table| FormulaDisplay { formula, table, vocab };
    let _ = writeln!(out, "fo2 {}", if matches!(snf, Snf::NoEq(_)) { "noeq" } else { "eq" });
    let _ = writeln!(out, "unary{}", names(vocab.unary()));
    let _ = writeln!(out, "binary{}", names(vocab.binary()));
    match snf {
        Snf::NoEq(phi) => {
            let _ = writeln!(out, "forall: {}", show(phi.alpha(), phi.table()));
            for b in phi.betas() {
                let _ = writeln!(out, "exists: {}", show(b, phi.table()));
            }
        }
        Snf::WithEq(psi) => {
            let _ = writeln!(out, "gamma: {}", show(psi.gamma(), psi.table()));
            let _ = writeln!(out, "forall_neq: {}", show(psi.alpha(), psi.table()));
            for &b in psi.betas() {
                let _ = writeln!(out, "exists_neq: {}", vocab.binary()[b]);
            }
        }
    }
    out
}

fn names(list: &[String]) -> String {
    list.iter().map(|n| format!(" {n}")).collect()
}
