use std::fmt;

use crate::operators::Op;
use crate::symbol::Symbol;

/// An expression exactly as written, before similarity normalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Null,
    Eps,
    Sym(Symbol),
    Union(Box<Term>, Box<Term>),
    Concat(Box<Term>, Box<Term>),
    Star(Box<Term>),
    Op(Op, Vec<Term>),
}

impl Term {
    pub fn sym(c: char) -> Term {
        Term::Sym(Symbol(c))
    }

    pub fn union(l: Term, r: Term) -> Term {
        Term::Union(Box::new(l), Box::new(r))
    }

    pub fn concat(l: Term, r: Term) -> Term {
        Term::Concat(Box::new(l), Box::new(r))
    }

    pub fn star(t: Term) -> Term {
        Term::Star(Box::new(t))
    }

    pub fn op(op: Op, args: Vec<Term>) -> Term {
        Term::Op(op, args)
    }

    /// Right-nested concatenation of the symbols of `s`; `""` is ε.
    pub fn word(s: &str) -> Term {
        let mut chars: Vec<char> = s.chars().collect();
        let Some(last) = chars.pop() else {
            return Term::Eps;
        };
        chars
            .into_iter()
            .rev()
            .fold(Term::sym(last), |acc, c| Term::concat(Term::sym(c), acc))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Null | Term::Eps | Term::Sym(_) => 1,
            Term::Union(l, r) | Term::Concat(l, r) => 1 + l.size() + r.size(),
            Term::Star(t) => 1 + t.size(),
            Term::Op(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Visits every operator node, outermost first.
    pub fn for_each_op(&self, f: &mut impl FnMut(&Op, &[Term])) {
        match self {
            Term::Null | Term::Eps | Term::Sym(_) => {}
            Term::Union(l, r) | Term::Concat(l, r) => {
                l.for_each_op(f);
                r.for_each_op(f);
            }
            Term::Star(t) => t.for_each_op(f),
            Term::Op(op, args) => {
                f(op, args);
                for a in args {
                    a.for_each_op(f);
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::pretty_term(self))
    }
}
