/// Quantifier-free propositional expression over atoms of type `A`.
///
/// `And`/`Or` are n-ary; an empty `And` is true and an empty `Or` is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr<A> {
    True,
    False,
    Atom(A),
    Not(Box<Expr<A>>),
    And(Vec<Expr<A>>),
    Or(Vec<Expr<A>>),
    Implies(Box<Expr<A>>, Box<Expr<A>>),
    Iff(Box<Expr<A>>, Box<Expr<A>>),
}

impl<A> Expr<A> {
    pub fn atom(a: A) -> Self {
        Expr::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr<A>) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn and(items: impl IntoIterator<Item = Expr<A>>) -> Self {
        Expr::And(items.into_iter().collect())
    }

    pub fn or(items: impl IntoIterator<Item = Expr<A>>) -> Self {
        Expr::Or(items.into_iter().collect())
    }

    pub fn implies(a: Expr<A>, b: Expr<A>) -> Self {
        Expr::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Expr<A>, b: Expr<A>) -> Self {
        Expr::Iff(Box::new(a), Box::new(b))
    }

    pub fn constant(value: bool) -> Self {
        if value {
            Expr::True
        } else {
            Expr::False
        }
    }

    pub fn as_constant(&self) -> Option<bool> {
        match self {
            Expr::True => Some(true),
            Expr::False => Some(false),
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::True | Expr::False | Expr::Atom(_) => 1,
            Expr::Not(e) => 1 + e.size(),
            Expr::And(es) | Expr::Or(es) => 1 + es.iter().map(Expr::size).sum::<usize>(),
            Expr::Implies(a, b) | Expr::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Expr::True | Expr::False => {}
            Expr::Atom(a) => f(a),
            Expr::Not(e) => e.for_each_atom(f),
            Expr::And(es) | Expr::Or(es) => es.iter().for_each(|e| e.for_each_atom(f)),
            Expr::Implies(a, b) | Expr::Iff(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }

    pub fn any_atom(&self, pred: impl Fn(&A) -> bool) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| found |= pred(a));
        found
    }

    /// Replaces every atom by an expression.
    pub fn substitute<B>(&self, f: &impl Fn(&A) -> Expr<B>) -> Expr<B> {
        match self {
            Expr::True => Expr::True,
            Expr::False => Expr::False,
            Expr::Atom(a) => f(a),
            Expr::Not(e) => Expr::not(e.substitute(f)),
            Expr::And(es) => Expr::And(es.iter().map(|e| e.substitute(f)).collect()),
            Expr::Or(es) => Expr::Or(es.iter().map(|e| e.substitute(f)).collect()),
            Expr::Implies(a, b) => Expr::implies(a.substitute(f), b.substitute(f)),
            Expr::Iff(a, b) => Expr::iff(a.substitute(f), b.substitute(f)),
        }
    }

    pub fn map_atoms<B>(&self, f: &impl Fn(&A) -> B) -> Expr<B> {
        self.substitute(&|a| Expr::Atom(f(a)))
    }

    pub fn eval(&self, value: &impl Fn(&A) -> bool) -> bool {
        match self {
            Expr::True => true,
            Expr::False => false,
            Expr::Atom(a) => value(a),
            Expr::Not(e) => !e.eval(value),
            Expr::And(es) => es.iter().all(|e| e.eval(value)),
            Expr::Or(es) => es.iter().any(|e| e.eval(value)),
            Expr::Implies(a, b) => !a.eval(value) || b.eval(value),
            Expr::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }

    /// Evaluates 64 assignments at once: `mask(a)` gives the value of `a` in
    /// each bit lane.
    pub fn eval_mask(&self, mask: &impl Fn(&A) -> u64) -> u64 {
        match self {
            Expr::True => !0,
            Expr::False => 0,
            Expr::Atom(a) => mask(a),
            Expr::Not(e) => !e.eval_mask(mask),
            Expr::And(es) => {
                let mut acc = !0u64;
                for e in es {
                    acc &= e.eval_mask(mask);
                    if acc == 0 {
                        break;
                    }
                }
                acc
            }
            Expr::Or(es) => {
                let mut acc = 0u64;
                for e in es {
                    acc |= e.eval_mask(mask);
                    if acc == !0 {
                        break;
                    }
                }
                acc
            }
            Expr::Implies(a, b) => !a.eval_mask(mask) | b.eval_mask(mask),
            Expr::Iff(a, b) => !(a.eval_mask(mask) ^ b.eval_mask(mask)),
        }
    }
}

impl<A: Clone> Expr<A> {
    /// Partial evaluation: atoms with a known value are replaced by constants
    /// and the result is simplified. Unknown atoms stay in place.
    pub fn restrict(&self, value: &impl Fn(&A) -> Option<bool>) -> Expr<A> {
        match self {
            Expr::True => Expr::True,
            Expr::False => Expr::False,
            Expr::Atom(a) => match value(a) {
                Some(b) => Expr::constant(b),
                None => Expr::Atom(a.clone()),
            },
            Expr::Not(e) => negate(e.restrict(value)),
            Expr::And(es) => {
                let mut out = Vec::with_capacity(es.len());
                for e in es {
                    match e.restrict(value) {
                        Expr::True => {}
                        Expr::False => return Expr::False,
                        Expr::And(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                collapse(out, true)
            }
            Expr::Or(es) => {
                let mut out = Vec::with_capacity(es.len());
                for e in es {
                    match e.restrict(value) {
                        Expr::False => {}
                        Expr::True => return Expr::True,
                        Expr::Or(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                collapse(out, false)
            }
            Expr::Implies(a, b) => {
                let a = a.restrict(value);
                match a {
                    Expr::False => Expr::True,
                    Expr::True => b.restrict(value),
                    a => match b.restrict(value) {
                        Expr::True => Expr::True,
                        Expr::False => negate(a),
                        b => Expr::implies(a, b),
                    },
                }
            }
            Expr::Iff(a, b) => {
                let a = a.restrict(value);
                let b = b.restrict(value);
                match (a.as_constant(), b.as_constant()) {
                    (Some(x), Some(y)) => Expr::constant(x == y),
                    (Some(true), None) => b,
                    (Some(false), None) => negate(b),
                    (None, Some(true)) => a,
                    (None, Some(false)) => negate(a),
                    (None, None) => Expr::iff(a, b),
                }
            }
        }
    }

    /// Constant folding without fixing any atom.
    pub fn simplify(&self) -> Expr<A> {
        self.restrict(&|_| None)
    }
}

fn negate<A>(e: Expr<A>) -> Expr<A> {
    match e {
        Expr::True => Expr::False,
        Expr::False => Expr::True,
        Expr::Not(inner) => *inner,
        other => Expr::not(other),
    }
}

fn collapse<A>(mut items: Vec<Expr<A>>, conjunction: bool) -> Expr<A> {
    match items.len() {
        0 => Expr::constant(conjunction),
        1 => items.pop().expect("one item"),
        _ if conjunction => Expr::And(items),
        _ => Expr::Or(items),
    }
}
