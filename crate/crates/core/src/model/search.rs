use std::collections::HashMap;

use crate::error::Result;
use crate::fo2::{OneType, Snf, TwoType};
use crate::oracle::{AtomTable, QfFormula};

use super::FiniteModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_size: usize,
    /// Search nodes allowed before giving up.
    pub work_cap: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_size: 4,
            work_cap: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// The smallest model found.
    Found(FiniteModel),
    /// No model with at most `max_size` elements exists.
    Exhausted,
    /// The work cap was hit before the search space was covered.
    Inconclusive,
}

impl SearchOutcome {
    pub fn model(&self) -> Option<&FiniteModel> {
        match self {
            SearchOutcome::Found(m) => Some(m),
            _ => None,
        }
    }
}

pub fn bounded_model_search(snf: &Snf, max_size: usize) -> Result<SearchOutcome> {
    bounded_model_search_with(
        snf,
        SearchLimits {
            max_size,
            ..SearchLimits::default()
        },
    )
}

/// Exhaustive search for a model with `1..=max_size` elements.
///
/// Elements receive non-decreasing 1-types (any model can be permuted into
/// that form), then pairs receive 2-types compatible with the `∀∀` matrix in
/// both orientations, and each element's witnesses are checked as soon as all
/// its pairs are fixed.
pub fn bounded_model_search_with(snf: &Snf, limits: SearchLimits) -> Result<SearchOutcome> {
    let problem = Problem::new(snf);
    if problem.width > 16 || 2 * problem.nb > 16 {
        return Ok(SearchOutcome::Inconclusive);
    }
    let candidates = problem.element_types();
    let mut work = 0u64;
    for size in 1..=limits.max_size {
        let mut s = State {
            p: &problem,
            candidates: &candidates,
            size,
            types: vec![0; size],
            etas: vec![vec![TwoType(0); size]; size],
            pair_cache: HashMap::new(),
            work: &mut work,
            cap: limits.work_cap,
        };
        match s.choose_type(0, 0) {
            Step::Found => return Ok(SearchOutcome::Found(s.model())),
            Step::Cap => return Ok(SearchOutcome::Inconclusive),
            Step::None => {}
        }
    }
    Ok(SearchOutcome::Exhausted)
}

enum Witness {
    Matrix(QfFormula),
    /// Equality shape: a distinct element related by this binary predicate.
    Atom(usize),
}

struct Problem<'a> {
    table: &'a AtomTable,
    eq: bool,
    nu: usize,
    nb: usize,
    /// Bits of an element's 1-type that are enumerated.
    width: usize,
    gamma: Option<&'a QfFormula>,
    alpha: &'a QfFormula,
    betas: Vec<Witness>,
}

impl<'a> Problem<'a> {
    fn new(snf: &'a Snf) -> Self {
        match snf {
            Snf::NoEq(phi) => Problem {
                table: phi.table(),
                eq: false,
                nu: phi.vocab().unary().len(),
                nb: phi.vocab().binary().len(),
                width: phi.table().one_literal_width(),
                gamma: None,
                alpha: phi.alpha(),
                betas: phi.betas().iter().cloned().map(Witness::Matrix).collect(),
            },
            Snf::WithEq(psi) => Problem {
                table: psi.table(),
                eq: true,
                nu: psi.vocab().unary().len(),
                nb: psi.vocab().binary().len(),
                width: psi.vocab().unary().len(),
                gamma: Some(psi.gamma()),
                alpha: psi.alpha(),
                betas: psi.betas().iter().map(|&b| Witness::Atom(b)).collect(),
            },
        }
    }

    /// Value of `f` with types `tx`, `ty` and cross 2-type `eta`; `x = y` holds
    /// exactly when `same` is set.
    fn eval(&self, f: &QfFormula, tx: OneType, ty: OneType, eta: TwoType, same: bool) -> bool {
        let l = self.table.one_literal_width();
        let base = self.table.cross_base();
        let eq = self.table.eq_atom();
        f.eval(&|&id| {
            if id < l {
                tx.bit(id)
            } else if id < 2 * l {
                ty.bit(id - l)
            } else if Some(id) == eq {
                same
            } else {
                eta.0 >> (id - base) & 1 == 1
            }
        })
    }

    fn diagonal_eta(&self, t: OneType) -> TwoType {
        TwoType((0..self.nb).fold(0, |acc, j| acc | (u64::from(t.bit(self.nu + j)) * 3) << (2 * j)))
    }

    fn element_types(&self) -> Vec<OneType> {
        (0..1u128 << self.width)
            .map(OneType)
            .filter(|&t| match self.gamma {
                Some(g) => self.eval(g, t, t, TwoType(0), true),
                None => self.eval(self.alpha, t, t, self.diagonal_eta(t), true),
            })
            .collect()
    }

    fn pair_ok(&self, ta: OneType, tb: OneType, eta: TwoType) -> bool {
        self.eval(self.alpha, ta, tb, eta, false) && self.eval(self.alpha, tb, ta, eta.reverse(), false)
    }
}

enum Step {
    Found,
    None,
    Cap,
}

struct State<'a, 'p> {
    p: &'a Problem<'p>,
    candidates: &'a [OneType],
    size: usize,
    types: Vec<usize>,
    /// `etas[a][b]` for `a < b`.
    etas: Vec<Vec<TwoType>>,
    pair_cache: HashMap<(usize, usize), Vec<TwoType>>,
    work: &'a mut u64,
    cap: u64,
}

impl State<'_, '_> {
    fn tick(&mut self) -> bool {
        *self.work += 1;
        *self.work > self.cap
    }

    fn choose_type(&mut self, a: usize, min: usize) -> Step {
        if a == self.size {
            return self.choose_pair(0, 1);
        }
        for c in min..self.candidates.len() {
            if self.tick() {
                return Step::Cap;
            }
            self.types[a] = c;
            match self.choose_type(a + 1, c) {
                Step::None => {}
                other => return other,
            }
        }
        Step::None
    }

    fn options(&mut self, a: usize, b: usize) -> Vec<TwoType> {
        let key = (self.types[a], self.types[b]);
        let (p, candidates) = (self.p, self.candidates);
        self.pair_cache
            .entry(key)
            .or_insert_with(|| {
                let (ta, tb) = (candidates[key.0], candidates[key.1]);
                (0..1u64 << (2 * p.nb)).map(TwoType).filter(|&eta| p.pair_ok(ta, tb, eta)).collect()
            })
            .clone()
    }

    fn choose_pair(&mut self, a: usize, b: usize) -> Step {
        if b == self.size {
            if !self.witnessed(a) {
                return Step::None;
            }
            if a + 1 >= self.size {
                return if self.size == 1 || self.witnessed(self.size - 1) { Step::Found } else { Step::None };
            }
            return self.choose_pair(a + 1, a + 2);
        }
        for eta in self.options(a, b) {
            if self.tick() {
                return Step::Cap;
            }
            self.etas[a][b] = eta;
            match self.choose_pair(a, b + 1) {
                Step::None => {}
                other => return other,
            }
        }
        Step::None
    }

    fn eta(&self, a: usize, b: usize) -> TwoType {
        if a == b {
            self.p.diagonal_eta(self.candidates[self.types[a]])
        } else if a < b {
            self.etas[a][b]
        } else {
            self.etas[b][a].reverse()
        }
    }

    fn witnessed(&self, a: usize) -> bool {
        let ta = self.candidates[self.types[a]];
        self.p.betas.iter().all(|w| {
            (0..self.size).any(|b| {
                let eta = self.eta(a, b);
                match w {
                    Witness::Atom(pred) => b != a && eta.forward(*pred),
                    Witness::Matrix(f) => self.p.eval(f, ta, self.candidates[self.types[b]], eta, a == b),
                }
            })
        })
    }

    fn model(&self) -> FiniteModel {
        let mut m = FiniteModel::new(self.size, self.p.nu, self.p.nb);
        for a in 0..self.size {
            let t = self.candidates[self.types[a]];
            if self.p.eq {
                for u in 0..self.p.nu {
                    m.set_unary(u, a, t.bit(u));
                }
            } else {
                m.set_one_type(a, t);
            }
            for b in a + 1..self.size {
                m.set_two_type(a, b, self.etas[a][b]);
            }
        }
        m
    }
}
