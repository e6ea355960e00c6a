use crate::error::{Error, Result};
use crate::oracle::{Atom, Expr, Var};

use super::{Snf, SnfNoEq, SnfWithEq, Vocabulary, RESERVED_PREFIX};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Arrow,
    DArrow,
    Equals,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Lexed> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '~' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(t) = single {
            toks.push((t, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            toks.push((Tok::Arrow, col));
            i += 2;
        } else if c == '<' && chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
            toks.push((Tok::DArrow, col));
            i += 3;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(Error::parse(line, col, format!("unexpected character {c:?}")));
        }
    }
    Ok(Lexed {
        toks,
        end: col0 + chars.len(),
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Context {
    NoEq,
    Gamma,
    ForallNeq,
}

struct FormulaParser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    line: usize,
    vocab: &'a Vocabulary,
    ctx: Context,
}

impl FormulaParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, c)| c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn iff(&mut self) -> Result<Expr<Atom>> {
        let lhs = self.implication()?;
        if self.peek() == Some(&Tok::DArrow) {
            self.pos += 1;
            let rhs = self.iff()?;
            return Ok(Expr::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Expr<Atom>> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Expr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Expr<Atom>> {
        let mut items = vec![self.conjunction()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one") } else { Expr::Or(items) })
    }

    fn conjunction(&mut self) -> Result<Expr<Atom>> {
        let mut items = vec![self.negation()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            items.push(self.negation()?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one") } else { Expr::And(items) })
    }

    fn negation(&mut self) -> Result<Expr<Atom>> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            return Ok(Expr::not(self.negation()?));
        }
        self.primary()
    }

    fn variable(&mut self) -> Result<Var> {
        let v = match self.peek() {
            Some(Tok::Ident(s)) if s == "x" => Var::X,
            Some(Tok::Ident(s)) if s == "y" => Var::Y,
            _ => return Err(self.err("expected variable x or y")),
        };
        self.pos += 1;
        Ok(v)
    }

    fn primary(&mut self) -> Result<Expr<Atom>> {
        let col = self.col();
        let name = match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.iff()?;
                self.expect(Tok::RParen, "')'")?;
                return Ok(e);
            }
            Some(Tok::Ident(s)) => s.clone(),
            Some(_) => return Err(self.err("expected a formula")),
            None => return Err(self.err("unexpected end of formula")),
        };
        match name.as_str() {
            "true" => {
                self.pos += 1;
                return Ok(Expr::True);
            }
            "false" => {
                self.pos += 1;
                return Ok(Expr::False);
            }
            "x" | "y" => {
                let a = self.variable()?;
                self.expect(Tok::Equals, "'='")?;
                let b = self.variable()?;
                if a == b {
                    return Err(Error::parse(self.line, col, "equality must relate x and y"));
                }
                return self.check(Atom::Eq, col);
            }
            _ => {}
        }
        self.pos += 1;
        self.expect(Tok::LParen, "'(' after predicate name")?;
        let first = self.variable()?;
        let second = if self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            Some(self.variable()?)
        } else {
            None
        };
        self.expect(Tok::RParen, "')'")?;
        let atom = match second {
            None => match self.vocab.unary_index(&name) {
                Some(pred) => Atom::Unary { pred, var: first },
                None if self.vocab.binary_index(&name).is_some() => {
                    return Err(Error::parse(self.line, col, format!("{name} is binary")))
                }
                None => return Err(Error::parse(self.line, col, format!("undeclared predicate {name}"))),
            },
            Some(second) => match self.vocab.binary_index(&name) {
                Some(pred) => Atom::Binary { pred, first, second },
                None if self.vocab.unary_index(&name).is_some() => {
                    return Err(Error::parse(self.line, col, format!("{name} is unary")))
                }
                None => return Err(Error::parse(self.line, col, format!("undeclared predicate {name}"))),
            },
        };
        self.check(atom, col)
    }

    fn check(&self, atom: Atom, col: usize) -> Result<Expr<Atom>> {
        let bad = |msg: &str| Err(Error::parse(self.line, col, msg));
        match (self.ctx, atom) {
            (Context::NoEq, Atom::Eq) => bad("equality atom in an equality-free sentence"),
            (Context::Gamma, Atom::Unary { var: Var::X, .. }) => Ok(Expr::Atom(atom)),
            (Context::Gamma, _) => bad("gamma may only use unary atoms over x"),
            (Context::ForallNeq, Atom::Binary { first, second, .. }) if first == second => {
                bad("diagonal binary atoms are not allowed with equality")
            }
            _ => Ok(Expr::Atom(atom)),
        }
    }
}

fn parse_formula(src: &str, line: usize, col0: usize, vocab: &Vocabulary, ctx: Context) -> Result<Expr<Atom>> {
    let lexed = lex(src, line, col0)?;
    let mut p = FormulaParser {
        toks: &lexed.toks,
        pos: 0,
        end: lexed.end,
        line,
        vocab,
        ctx,
    };
    let e = p.iff()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected token after formula"));
    }
    Ok(e)
}

/// Parses a sentence in the `.fo2` format.
///
/// ```text
/// fo2 noeq
/// unary U V
/// binary E
/// forall: U(x) & E(x,y) -> V(y)
/// exists: E(x,y)
/// ```
///
/// An equality sentence uses `fo2 eq` and the directives `gamma:`,
/// `forall_neq:` and `exists_neq: <binary>`. `#` starts a comment.
pub fn parse_fo2(text: &str) -> Result<Snf> {
    let mut eq_mode = None;
    let mut unary: Option<Vec<String>> = None;
    let mut binary: Option<Vec<String>> = None;
    let mut vocab: Option<Vocabulary> = None;
    let mut forall = None;
    let mut gamma = None;
    let mut exists = Vec::new();
    let mut exists_neq = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let offset = content.len() - trimmed.len();
        let col_of = |byte: usize| content[..offset + byte].chars().count() + 1;
        let Some(eq) = eq_mode else {
            let words: Vec<&str> = trimmed.split_whitespace().collect();
            eq_mode = match words.as_slice() {
                ["fo2", "noeq"] => Some(false),
                ["fo2", "eq"] => Some(true),
                _ => return Err(Error::parse(line_no, col_of(0), "expected header 'fo2 noeq' or 'fo2 eq'")),
            };
            continue;
        };
        let word_end = trimmed.find(|c: char| c.is_whitespace() || c == ':').unwrap_or(trimmed.len());
        let keyword = &trimmed[..word_end];
        let rest = &trimmed[word_end..];
        if keyword == "unary" || keyword == "binary" {
            if vocab.is_some() {
                return Err(Error::parse(line_no, col_of(0), "declarations must precede formulas"));
            }
            let slot = if keyword == "unary" { &mut unary } else { &mut binary };
            if slot.is_some() {
                return Err(Error::parse(line_no, col_of(0), format!("duplicate '{keyword}' line")));
            }
            *slot = Some(rest.split_whitespace().map(str::to_string).collect());
            continue;
        }
        let Some(body) = rest.trim_start().strip_prefix(':') else {
            return Err(Error::parse(line_no, col_of(0), format!("unknown directive '{keyword}'")));
        };
        let body_col = col_of(trimmed.len() - body.len());
        if vocab.is_none() {
            let v = Vocabulary::new(unary.take().unwrap_or_default(), binary.take().unwrap_or_default())
                .map_err(|e| Error::parse(line_no, 1, e.to_string()))?;
            if eq {
                if let Some(name) = v.uses_reserved_names() {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!("predicate name {name} uses the reserved prefix '{RESERVED_PREFIX}'"),
                    ));
                }
            }
            vocab = Some(v);
        }
        let v = vocab.as_ref().expect("just set");
        let formula = |ctx| parse_formula(body, line_no, body_col, v, ctx);
        match (eq, keyword) {
            (false, "forall") | (true, "forall_neq") => {
                if forall.is_some() {
                    return Err(Error::parse(line_no, col_of(0), format!("duplicate '{keyword}:'")));
                }
                forall = Some(formula(if eq { Context::ForallNeq } else { Context::NoEq })?);
            }
            (false, "exists") => exists.push(formula(Context::NoEq)?),
            (true, "gamma") => {
                if gamma.is_some() {
                    return Err(Error::parse(line_no, col_of(0), "duplicate 'gamma:'"));
                }
                gamma = Some(formula(Context::Gamma)?);
            }
            (true, "exists_neq") => {
                let name = body.trim();
                match v.binary_index(name) {
                    Some(b) => exists_neq.push(b),
                    None => {
                        return Err(Error::parse(
                            line_no,
                            body_col + body.len() - body.trim_start().len(),
                            format!("exists_neq needs a single declared binary predicate, found '{name}'"),
                        ))
                    }
                }
            }
            _ => {
                let mode = if eq { "eq" } else { "noeq" };
                return Err(Error::parse(
                    line_no,
                    col_of(0),
                    format!("directive '{keyword}:' is not valid in {mode} mode"),
                ));
            }
        }
    }

    let Some(eq) = eq_mode else {
        return Err(Error::parse(1, 1, "missing header"));
    };
    let vocab = match vocab {
        Some(v) => v,
        None => Vocabulary::new(unary.unwrap_or_default(), binary.unwrap_or_default())?,
    };
    let last = text.lines().count().max(1);
    let alpha = forall.unwrap_or(Expr::True);
    if eq {
        if exists_neq.is_empty() {
            return Err(Error::parse(last, 1, "at least one 'exists_neq:' line is required"));
        }
        let gamma = gamma.unwrap_or(Expr::True);
        Ok(Snf::WithEq(SnfWithEq::new(vocab, &gamma, &alpha, &exists_neq)?))
    } else {
        if exists.is_empty() {
            return Err(Error::parse(last, 1, "at least one 'exists:' line is required"));
        }
        Ok(Snf::NoEq(SnfNoEq::new(vocab, &alpha, &exists)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noeq(text: &str) -> SnfNoEq {
        match parse_fo2(text).unwrap() {
            Snf::NoEq(f) => f,
            Snf::WithEq(_) => panic!("expected noeq"),
        }
    }

    #[test]
    fn minimal_noeq() {
        let f = noeq("fo2 noeq\nunary U\nexists: U(y)\n");
        assert_eq!(f.m(), 1);
        assert_eq!(f.alpha(), &Expr::True);
        assert_eq!(f.betas()[0], Expr::atom(1));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = noeq("fo2 noeq\nunary A B C\nforall: ~A(x) & B(x) | C(x) -> A(y) -> B(y) <-> C(y)\nexists: true\n");
        let a = |p, var| Expr::atom(f.table().id(&Atom::Unary { pred: p, var }).unwrap());
        let expect = Expr::iff(
            Expr::implies(
                Expr::Or(vec![Expr::And(vec![Expr::not(a(0, Var::X)), a(1, Var::X)]), a(2, Var::X)]),
                Expr::implies(a(0, Var::Y), a(1, Var::Y)),
            ),
            a(2, Var::Y),
        );
        assert_eq!(f.alpha(), &expect);
    }

    #[test]
    fn parentheses_keep_nesting() {
        let f = noeq("fo2 noeq\nunary A B C\nforall: (A(x) & B(x)) & C(x)\nexists: true\n");
        assert!(matches!(f.alpha(), Expr::And(items) if items.len() == 2));
    }

    #[test]
    fn rejections() {
        let cases = [
            ("fo2 noeq\nunary U\nforall: x = y\nexists: U(y)\n", 3),
            ("fo2 noeq\nunary U\nexists: V(y)\n", 3),
            ("fo2 noeq\nunary U\nexists: U(x,y)\n", 3),
            ("fo2 noeq\nunary U\nforall: U(x) &\nexists: U(y)\n", 3),
            ("fo2 noeq\nunary U\n", 2),
            ("fo2 three\n", 1),
            ("fo2 eq\nbinary R\nforall_neq: R(x,x)\nexists_neq: R\n", 3),
            ("fo2 eq\nunary U\nbinary R\nexists_neq: U\n", 4),
            ("fo2 eq\nunary U\nbinary R\ngamma: U(y)\nexists_neq: R\n", 4),
            ("fo2 eq\nunary __U\nbinary R\nexists_neq: R\n", 4),
            ("fo2 noeq\nunary U\nexists: U(y)\nunary V\n", 4),
        ];
        for (text, line) in cases {
            match parse_fo2(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn column_points_at_offender() {
        let err = parse_fo2("fo2 noeq\nunary U\nexists: U(x) & W(y)\n").unwrap_err();
        assert_eq!(err, Error::parse(3, 16, "undeclared predicate W"));
    }

    #[test]
    fn eq_mode() {
        let text = "fo2 eq\nunary U\nbinary S\ngamma: U(x) | ~U(x)\nforall_neq: S(x,y) -> ~(x = y)\nexists_neq: S\n";
        match parse_fo2(text).unwrap() {
            Snf::WithEq(f) => {
                assert_eq!(f.betas(), &[0]);
                assert!(f.alpha().any_atom(|&a| Some(a) == f.table().eq_atom()));
            }
            Snf::NoEq(_) => panic!("expected eq"),
        }
    }

    #[test]
    fn reserved_names_allowed_without_equality() {
        assert!(parse_fo2("fo2 noeq\nunary __Ks\nexists: __Ks(y)\n").is_ok());
    }
}
