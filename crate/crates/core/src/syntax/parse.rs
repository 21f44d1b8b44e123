//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := inter ('+' inter)*
//! inter  := concat ('&' concat)*
//! concat := unary+
//! unary  := atom '*'*
//! atom   := SYMBOL | '@0' | '@e' | '@sigma' | '@sigma-star'
//!         | '(' expr ')' | '!' atom | opcall
//! opcall := NAME ('[' param (',' param)* ']')? '(' expr (',' expr)* ')'
//! ```
//!
//! An operator name is recognized only when `(` or `[` follows it directly,
//! so a space separates a run of symbols spelling a name from a parenthesized
//! group.

use super::{Definitions, Term};
use crate::error::{Error, Result};
use crate::operators::{Op, Param};
use crate::symbol::Symbol;

/// Names the parser accepts as operator calls, longest first so that a
/// shorter name never shadows a longer one at the same position.
pub(crate) fn call_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = Op::NAMES.iter().copied().chain(["suffixes"]).collect();
    names.sort_by_key(|n| std::cmp::Reverse(n.len()));
    names
}

/// Parses `text` into a raw term over the alphabet of `defs`.
pub fn parse_term(text: &str, defs: &Definitions) -> Result<Term> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        defs,
        names: call_names(),
    };
    let t = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(t)
}

/// The union of all alphabet symbols.
fn sigma(defs: &Definitions) -> Term {
    let mut syms = defs.alphabet.symbols().iter().rev();
    let last = Term::Sym(*syms.next().expect("alphabet is nonempty"));
    syms.fold(last, |acc, &s| Term::union(Term::Sym(s), acc))
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    defs: &'a Definitions,
    names: Vec<&'static str>,
}

impl Parser<'_> {
    fn err(&self, msg: String) -> Error {
        Error::Syntax { pos: self.pos, msg }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(f) => format!("`{f}`"),
                None => "end of input".to_string(),
            };
            Err(self.err(format!("expected `{c}`, found {found}")))
        }
    }

    fn starts_with(&self, at: usize, s: &str) -> bool {
        s.chars().enumerate().all(|(j, c)| self.chars.get(at + j) == Some(&c))
    }

    /// The operator name starting at `at` and directly followed by `(`/`[`.
    fn call_name_at(&self, at: usize) -> Option<&'static str> {
        self.names.iter().copied().find(|n| {
            self.starts_with(at, n)
                && matches!(self.chars.get(at + n.chars().count()), Some('(' | '['))
        })
    }

    fn expr(&mut self) -> Result<Term> {
        let mut t = self.inter()?;
        while self.eat('+') {
            let r = self.inter()?;
            t = Term::union(t, r);
        }
        Ok(t)
    }

    fn inter(&mut self) -> Result<Term> {
        let mut t = self.concat()?;
        while self.eat('&') {
            let r = self.concat()?;
            t = Term::op(Op::And, vec![t, r]);
        }
        Ok(t)
    }

    fn concat(&mut self) -> Result<Term> {
        let mut parts = vec![self.unary()?];
        while matches!(self.peek(), Some(c) if c == '(' || c == '@' || c == '!' || c.is_alphanumeric())
        {
            parts.push(self.unary()?);
        }
        let last = parts.pop().expect("at least one factor");
        Ok(parts.into_iter().rev().fold(last, |acc, p| Term::concat(p, acc)))
    }

    fn unary(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while self.eat('*') {
            t = Term::star(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        let Some(c) = self.peek() else {
            return Err(self.err("unexpected end of input".into()));
        };
        match c {
            '(' => {
                self.pos += 1;
                let t = self.expr()?;
                self.expect(')')?;
                Ok(t)
            }
            '!' => {
                self.pos += 1;
                let t = self.atom()?;
                Ok(Term::op(Op::Not, vec![t]))
            }
            '@' => self.constant(),
            c if c.is_alphanumeric() => {
                if let Some(name) = self.call_name_at(self.pos) {
                    return self.opcall(name);
                }
                self.check_unknown_call()?;
                let s = Symbol(c);
                if !self.defs.alphabet.contains(s) {
                    return Err(Error::SymbolOutsideAlphabet { symbol: c });
                }
                self.pos += 1;
                Ok(Term::Sym(s))
            }
            other => Err(self.err(format!("unexpected `{other}`"))),
        }
    }

    fn constant(&mut self) -> Result<Term> {
        for (tok, len) in [("@sigma-star", 11), ("@sigma", 6), ("@0", 2), ("@e", 2)] {
            if self.starts_with(self.pos, tok) {
                self.pos += len;
                return Ok(match tok {
                    "@sigma-star" => Term::star(sigma(self.defs)),
                    "@sigma" => sigma(self.defs),
                    "@0" => Term::Null,
                    _ => Term::Eps,
                });
            }
        }
        Err(self.err("expected `@0`, `@e`, `@sigma` or `@sigma-star`".into()))
    }

    /// Rejects identifiers such as `foo(` that look like calls but name no
    /// operator and cannot be read as symbols followed by a group.
    fn check_unknown_call(&self) -> Result<()> {
        let start = self.pos;
        let mut end = start;
        while self.chars.get(end).is_some_and(|c| c.is_alphanumeric()) {
            end += 1;
        }
        if end - start < 2 || !matches!(self.chars.get(end), Some('(' | '[')) {
            return Ok(());
        }
        // a later operator name inside the run makes the head plain symbols
        if (start + 1..end).any(|i| self.call_name_at(i).is_some()) {
            return Ok(());
        }
        let run: String = self.chars[start..end].iter().collect();
        if run.chars().all(|c| self.defs.alphabet.contains(Symbol(c))) {
            return Ok(());
        }
        Err(Error::UnknownOperator { pos: start, name: run })
    }

    fn opcall(&mut self, name: &'static str) -> Result<Term> {
        let start = self.pos;
        self.pos += name.len();
        let mut params = Vec::new();
        if self.eat('[') {
            loop {
                params.push(self.param()?);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(']')?;
        }
        self.expect('(')?;
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        self.expect(')')?;

        if name == "suffixes" {
            if !params.is_empty() {
                return Err(Error::Parameters {
                    op: name.into(),
                    msg: "takes no parameters".into(),
                });
            }
            if args.len() != 1 {
                return Err(Error::Arity {
                    op: name.into(),
                    expected: 1,
                    got: args.len(),
                });
            }
            let sigma_star = Term::star(sigma(self.defs));
            return Ok(Term::op(Op::LQuot, vec![sigma_star, args.pop().expect("one argument")]));
        }

        let op = Op::from_call(name, &params).map_err(|e| match e {
            Error::UnknownOperator { name, .. } => Error::UnknownOperator { pos: start, name },
            other => other,
        })?;
        if op.arity() != args.len() {
            return Err(Error::Arity {
                op: op.to_string(),
                expected: op.arity(),
                got: args.len(),
            });
        }
        Ok(Term::op(op, args))
    }

    fn param(&mut self) -> Result<Param> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        let tok: String = self.chars[start..self.pos].iter().collect();
        if tok.is_empty() {
            return Err(self.err("expected a parameter".into()));
        }
        if tok.chars().all(|c| c.is_ascii_digit()) {
            tok.parse()
                .map(Param::Num)
                .map_err(|_| self.err(format!("parameter `{tok}` is too large")))
        } else {
            Ok(Param::Name(tok))
        }
    }
}
