//! Finite structures: extraction from a good independent set, brute-force
//! checking against a sentence, and exhaustive search over tiny universes.

mod check;
mod extract;
mod search;

use std::fmt::Write;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::fo2::{OneType, TwoType, Vocabulary};

pub use check::{check_model, check_model_eq, Conjunct, ModelCheck, Violation};
pub use extract::extract_model;
pub use search::{bounded_model_search, bounded_model_search_with, SearchLimits, SearchOutcome};

/// A structure over `n_unary` unary and `n_binary` binary predicates on the
/// elements `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    size: usize,
    unary: Vec<FixedBitSet>,
    binary: Vec<FixedBitSet>,
}

impl FiniteModel {
    pub fn new(size: usize, n_unary: usize, n_binary: usize) -> Self {
        FiniteModel {
            size,
            unary: vec![FixedBitSet::with_capacity(size); n_unary],
            binary: vec![FixedBitSet::with_capacity(size * size); n_binary],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn n_unary(&self) -> usize {
        self.unary.len()
    }

    pub fn n_binary(&self) -> usize {
        self.binary.len()
    }

    pub fn unary(&self, pred: usize, a: usize) -> bool {
        self.unary[pred].contains(a)
    }

    pub fn set_unary(&mut self, pred: usize, a: usize, value: bool) {
        self.unary[pred].set(a, value);
    }

    pub fn binary(&self, pred: usize, a: usize, b: usize) -> bool {
        self.binary[pred].contains(a * self.size + b)
    }

    pub fn set_binary(&mut self, pred: usize, a: usize, b: usize, value: bool) {
        self.binary[pred].set(a * self.size + b, value);
    }

    /// The 1-type of `a`: unary facts, then diagonal binary facts.
    pub fn one_type(&self, a: usize) -> OneType {
        let nu = self.unary.len();
        let mut bits = 0u128;
        for (p, t) in self.unary.iter().enumerate() {
            bits |= u128::from(t.contains(a)) << p;
        }
        for (j, t) in self.binary.iter().enumerate() {
            bits |= u128::from(t.contains(a * self.size + a)) << (nu + j);
        }
        OneType(bits)
    }

    /// The 2-type of `(a, b)`: bit `2j` is `R_j(a,b)`, bit `2j+1` is `R_j(b,a)`.
    pub fn two_type(&self, a: usize, b: usize) -> TwoType {
        let mut bits = 0u64;
        for (j, t) in self.binary.iter().enumerate() {
            bits |= u64::from(t.contains(a * self.size + b)) << (2 * j);
            bits |= u64::from(t.contains(b * self.size + a)) << (2 * j + 1);
        }
        TwoType(bits)
    }

    /// Gives `a` the 1-type `t` (unary and diagonal facts).
    pub fn set_one_type(&mut self, a: usize, t: OneType) {
        let nu = self.unary.len();
        for p in 0..nu {
            self.set_unary(p, a, t.bit(p));
        }
        for j in 0..self.binary.len() {
            self.set_binary(j, a, a, t.bit(nu + j));
        }
    }

    /// Gives the pair `(a, b)`, `a ≠ b`, the 2-type `eta`; `(b, a)` gets its
    /// reverse.
    pub fn set_two_type(&mut self, a: usize, b: usize, eta: TwoType) {
        for j in 0..self.binary.len() {
            self.set_binary(j, a, b, eta.forward(j));
            self.set_binary(j, b, a, eta.backward(j));
        }
    }

    pub fn matches(&self, vocab: &Vocabulary) -> bool {
        self.unary.len() == vocab.unary().len() && self.binary.len() == vocab.binary().len()
    }
}

/// Renders `mdl` as `model <size>`, one `u <Pred> <elements...>` line per unary
/// predicate and one `b <Pred> <a> <b>` line per binary fact.
pub fn write_model(mdl: &FiniteModel, vocab: &Vocabulary) -> Result<String> {
    if !mdl.matches(vocab) {
        return Err(Error::Usage("model does not match the vocabulary".into()));
    }
    let mut out = format!("model {}\n", mdl.size);
    for (p, name) in vocab.unary().iter().enumerate() {
        out.push_str("u ");
        out.push_str(name);
        for a in mdl.unary[p].ones() {
            let _ = write!(out, " {a}");
        }
        out.push('\n');
    }
    for (j, name) in vocab.binary().iter().enumerate() {
        for i in mdl.binary[j].ones() {
            let _ = writeln!(out, "b {name} {} {}", i / mdl.size, i % mdl.size);
        }
    }
    Ok(out)
}

pub fn parse_model(text: &str, vocab: &Vocabulary) -> Result<FiniteModel> {
    let mut mdl: Option<FiniteModel> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let number = |w: &str| -> Result<usize> {
            w.parse()
                .map_err(|_| Error::parse(line, 1, format!("expected a number, found '{w}'")))
        };
        let Some(m) = mdl.as_mut() else {
            match words.as_slice() {
                ["model", n] => {
                    let size = number(n)?;
                    mdl = Some(FiniteModel::new(size, vocab.unary().len(), vocab.binary().len()));
                    continue;
                }
                _ => return Err(Error::parse(line, 1, "expected 'model <size>'")),
            }
        };
        let size = m.size;
        let in_range = |a: usize| -> Result<usize> {
            if a < size {
                Ok(a)
            } else {
                Err(Error::parse(line, 1, format!("element {a} out of range")))
            }
        };
        match words.as_slice() {
            ["u", name, elems @ ..] => {
                let p = vocab
                    .unary_index(name)
                    .ok_or_else(|| Error::parse(line, 3, format!("unknown unary predicate {name}")))?;
                for e in elems {
                    let a = in_range(number(e)?)?;
                    m.set_unary(p, a, true);
                }
            }
            ["b", name, a, b] => {
                let j = vocab
                    .binary_index(name)
                    .ok_or_else(|| Error::parse(line, 3, format!("unknown binary predicate {name}")))?;
                let (a, b) = (in_range(number(a)?)?, in_range(number(b)?)?);
                m.set_binary(j, a, b, true);
            }
            _ => return Err(Error::parse(line, 1, "expected a 'u' or 'b' line")),
        }
    }
    mdl.ok_or_else(|| Error::parse(1, 1, "missing 'model <size>' line"))
}
