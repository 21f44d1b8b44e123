//! Printing with the fewest parentheses the grammar allows.
//!
//! Precedence levels: 0 union, 1 intersection (`&`), 2 concatenation,
//! 3 star, 4 atoms (symbols, constants, `!`, operator calls). A child is
//! parenthesized when its level is below the minimum its position needs.

use super::parse::call_names;
use super::{Expr, ExprId, ExprStore, Term};
use crate::operators::Op;
use crate::symbol::Symbol;

enum View<'a, N> {
    Null,
    Eps,
    Sym(Symbol),
    Union(Vec<N>),
    And(N, N),
    Concat(N, N),
    Star(N),
    Not(N),
    Call(&'a Op, Vec<N>),
}

impl<N> View<'_, N> {
    fn level(&self) -> u8 {
        match self {
            View::Union(_) => 0,
            View::And(..) => 1,
            View::Concat(..) => 2,
            View::Star(_) => 3,
            _ => 4,
        }
    }
}

struct Printer<'a, N, F> {
    view: F,
    names: Vec<&'static str>,
    out: String,
    _node: std::marker::PhantomData<&'a N>,
}

impl<'a, N: Copy, F: Fn(N) -> View<'a, N>> Printer<'a, N, F> {
    fn new(view: F) -> Self {
        Printer {
            view,
            names: call_names(),
            out: String::new(),
            _node: std::marker::PhantomData,
        }
    }

    fn node(&mut self, n: N, min: u8) {
        let v = (self.view)(n);
        let paren = v.level() < min;
        if paren {
            self.out.push('(');
        }
        match v {
            View::Null => self.out.push_str("@0"),
            View::Eps => self.out.push_str("@e"),
            View::Sym(s) => self.out.push(s.0),
            View::Union(xs) => {
                for (i, x) in xs.into_iter().enumerate() {
                    if i > 0 {
                        self.out.push('+');
                    }
                    self.node(x, 1);
                }
            }
            View::And(l, r) => {
                self.node(l, 1);
                self.out.push('&');
                self.node(r, 2);
            }
            View::Concat(l, r) => {
                self.node(l, 3);
                let at = self.out.len();
                self.node(r, 2);
                self.separate_group(at);
            }
            View::Star(b) => {
                self.node(b, 3);
                self.out.push('*');
            }
            View::Not(b) => {
                self.out.push('!');
                self.node(b, 4);
            }
            View::Call(op, args) => {
                self.out.push_str(&op.to_string());
                self.out.push('(');
                for (i, a) in args.into_iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.node(a, 0);
                }
                self.out.push(')');
            }
        }
        if paren {
            self.out.push(')');
        }
    }

    /// Keeps symbols that happen to spell an operator name from fusing with
    /// a following parenthesized group into a call.
    fn separate_group(&mut self, at: usize) {
        if !self.out[at..].starts_with('(') {
            return;
        }
        let head = &self.out[..at];
        if self.names.iter().any(|n| head.ends_with(n)) {
            self.out.insert(at, ' ');
        }
    }
}

/// Pretty-prints a canonical expression.
pub fn pretty(store: &ExprStore, id: ExprId) -> String {
    let mut p = Printer::new(|id: ExprId| match store.get(id) {
        Expr::Null => View::Null,
        Expr::Eps => View::Eps,
        Expr::Sym(s) => View::Sym(*s),
        Expr::Union(xs) => View::Union(xs.clone()),
        Expr::Concat(l, r) => View::Concat(*l, *r),
        Expr::Star(b) => View::Star(*b),
        Expr::Op(Op::And, args) => View::And(args[0], args[1]),
        Expr::Op(Op::Not, args) => View::Not(args[0]),
        Expr::Op(op, args) => View::Call(op, args.clone()),
    });
    p.node(id, 0);
    p.out
}

/// Pretty-prints a raw term as written.
pub fn pretty_term(t: &Term) -> String {
    let mut p = Printer::new(|t: &Term| match t {
        Term::Null => View::Null,
        Term::Eps => View::Eps,
        Term::Sym(s) => View::Sym(*s),
        Term::Union(l, r) => View::Union(vec![&**l, &**r]),
        Term::Concat(l, r) => View::Concat(&**l, &**r),
        Term::Star(b) => View::Star(&**b),
        Term::Op(Op::And, args) => View::And(&args[0], &args[1]),
        Term::Op(Op::Not, args) => View::Not(&args[0]),
        Term::Op(op, args) => View::Call(op, args.iter().collect()),
    });
    p.node(t, 0);
    p.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Alphabet;
    use crate::syntax::{parse_term, Definitions};

    fn roundtrip(defs: &Definitions, s: &str) -> String {
        let mut store = ExprStore::new();
        let id = store.normalize(&parse_term(s, defs).unwrap());
        let printed = pretty(&store, id);
        let again = store.normalize(&parse_term(&printed, defs).unwrap());
        assert_eq!(id, again, "{s} printed as {printed}");
        printed
    }

    #[test]
    fn minimal_parentheses() {
        let d = Definitions::with_alphabet(Alphabet::parse("a b c").unwrap());
        assert_eq!(roundtrip(&d, "b+a"), "a+b");
        assert_eq!(roundtrip(&d, "a(b*)"), "ab*");
        assert_eq!(roundtrip(&d, "hamming[1](ab)"), "hamming[1](ab)");
        assert_eq!(roundtrip(&d, "(ab)c"), "(ab)c");
        assert_eq!(roundtrip(&d, "a(bc)"), "abc");
        assert_eq!(roundtrip(&d, "(a+b)*abb"), "(a+b)*abb");
        assert_eq!(roundtrip(&d, "a&(b&c)"), "a&(b&c)");
        assert_eq!(roundtrip(&d, "(a&b)&c"), "a&b&c");
        assert_eq!(roundtrip(&d, "!(ab)*"), "!(ab)*");
        assert_eq!(roundtrip(&d, "(!a)*"), "!a*");
        assert_eq!(roundtrip(&d, "(a*)*"), "a**");
        assert_eq!(roundtrip(&d, "a(b&c)"), "a(b&c)");
        assert_eq!(roundtrip(&d, "shuffle(a+b, @e)c"), "shuffle(a+b, @e)c");
        assert_eq!(roundtrip(&d, "@0c"), "@0c");
    }

    #[test]
    fn symbols_spelling_a_name_stay_symbols() {
        let d = Definitions::with_alphabet(Alphabet::parse("i d a b").unwrap());
        assert_eq!(roundtrip(&d, "id (a+b)"), "id (a+b)");
        assert_eq!(roundtrip(&d, "i(d(a+b))"), "id (a+b)");
        assert_eq!(roundtrip(&d, "id(a+b)"), "id(a+b)");
    }
}
