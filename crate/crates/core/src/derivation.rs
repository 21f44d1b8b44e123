//! Nullability, symbol and word derivatives, and the word problem.

use std::fmt;

use crate::error::{Error, Result};
use crate::operators::{DerivativeRule, EpsAnswer, EpsCapability, HookKind, HookRequest, Op, Template};
use crate::session::Session;
use crate::symbol::Symbol;
use crate::syntax::{Expr, ExprId, ExprStore};

/// Result of the ε-test on an expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Nullability {
    Nullable,
    NotNullable,
    /// The ε-test needs a capability this expression does not provide.
    Undecided(String),
}

impl Nullability {
    fn of(b: bool) -> Self {
        if b {
            Nullability::Nullable
        } else {
            Nullability::NotNullable
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Nullability::Nullable => Some(true),
            Nullability::NotNullable => Some(false),
            Nullability::Undecided(_) => None,
        }
    }

    /// Converts to a boolean, turning an undecided outcome into an error.
    pub fn decided(self) -> Result<bool> {
        match self {
            Nullability::Undecided(reason) => Err(Error::Undecided { reason }),
            n => Ok(n == Nullability::Nullable),
        }
    }
}

impl fmt::Display for Nullability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nullability::Nullable => f.write_str("nullable"),
            Nullability::NotNullable => f.write_str("not nullable"),
            Nullability::Undecided(r) => write!(f, "undecided ({r})"),
        }
    }
}

impl Session {
    /// Decides whether ε belongs to the language of `e`.
    pub fn nullable(&mut self, e: ExprId) -> Nullability {
        if let Some(n) = self.nullable_memo.get(&e) {
            return n.clone();
        }
        let n = match self.store.get(e).clone() {
            Expr::Null | Expr::Sym(_) => Nullability::NotNullable,
            Expr::Eps | Expr::Star(_) => Nullability::Nullable,
            Expr::Union(xs) => {
                let mut undecided = None;
                let mut any = false;
                for x in xs {
                    match self.nullable(x) {
                        Nullability::Nullable => {
                            any = true;
                            break;
                        }
                        Nullability::NotNullable => {}
                        u => undecided = undecided.or(Some(u)),
                    }
                }
                match (any, undecided) {
                    (true, _) => Nullability::Nullable,
                    (false, Some(u)) => u,
                    (false, None) => Nullability::NotNullable,
                }
            }
            Expr::Concat(l, r) => match (self.nullable(l), self.nullable(r)) {
                (Nullability::NotNullable, _) | (_, Nullability::NotNullable) => {
                    Nullability::NotNullable
                }
                (Nullability::Nullable, Nullability::Nullable) => Nullability::Nullable,
                (u @ Nullability::Undecided(_), _) | (_, u) => u,
            },
            Expr::Op(op, args) => self.nullable_op(&op, &args),
        };
        self.nullable_memo.insert(e, n.clone());
        n
    }

    fn nullable_op(&mut self, op: &Op, args: &[ExprId]) -> Nullability {
        let def = match self.op_def(op) {
            Ok(d) => d.clone(),
            Err(e) => return Nullability::Undecided(e.to_string()),
        };
        match &def.eps {
            EpsCapability::BooleanFn(f) => {
                let flags: Vec<Nullability> = args.iter().map(|&a| self.nullable(a)).collect();
                let partial: Vec<Option<bool>> = flags.iter().map(Nullability::as_bool).collect();
                match f.eval_partial(&partial) {
                    Some(v) => Nullability::of(v),
                    None => flags
                        .into_iter()
                        .find(|f| f.as_bool().is_none())
                        .expect("an unknown flag made the result unknown"),
                }
            }
            EpsCapability::SemanticHook(_) => match def.eps_capability(&[]) {
                EpsAnswer::Hook(req) => self.run_hook(op, &req, args),
                _ => unreachable!("hook capability answers with a hook request"),
            },
            EpsCapability::None => Nullability::Undecided(format!("`{op}` has no ε-test")),
        }
    }

    fn run_hook(&mut self, op: &Op, req: &HookRequest, args: &[ExprId]) -> Nullability {
        let hook_args: Vec<ExprId> = req.args.iter().map(|&i| args[i]).collect();
        if let Some(&bad) = hook_args.iter().find(|&&a| !self.is_tier_a(a)) {
            return Nullability::Undecided(format!(
                "`{op}` needs its {} hook on a hook-free linear argument, got `{}`",
                req.kind,
                self.pretty(bad)
            ));
        }
        let target = match req.kind {
            HookKind::IntersectionEmptiness => self.store.op(Op::And, hook_args.clone()),
            _ => hook_args[0],
        };
        let shortest = match self.shortest_accepted_len(target) {
            Ok(s) => s,
            Err(e) => return Nullability::Undecided(format!("`{op}`: {e}")),
        };
        Nullability::of(match req.kind {
            HookKind::Emptiness | HookKind::IntersectionEmptiness => shortest.is_some(),
            HookKind::ShortestWordBound(t) => shortest.is_some_and(|len| len < t),
        })
    }

    /// The Brzozowski derivative of `e` by `a`, in canonical form.
    pub fn derive(&mut self, a: Symbol, e: ExprId) -> Result<ExprId> {
        if let Some(&d) = self.derive_memo.get(&(e, a)) {
            return Ok(d);
        }
        let d = match self.store.get(e).clone() {
            Expr::Null | Expr::Eps => ExprStore::NULL,
            Expr::Sym(b) => {
                if a == b {
                    ExprStore::EPS
                } else {
                    ExprStore::NULL
                }
            }
            Expr::Union(xs) => {
                let mut ds = Vec::with_capacity(xs.len());
                for x in xs {
                    ds.push(self.derive(a, x)?);
                }
                self.store.union_of(ds)
            }
            Expr::Concat(r, s) => {
                let dr = self.derive(a, r)?;
                let left = self.store.smart_concat(dr, s);
                if self.nullable(r).decided()? {
                    let ds = self.derive(a, s)?;
                    self.store.smart_union(left, ds)
                } else {
                    left
                }
            }
            Expr::Star(r) => {
                let dr = self.derive(a, r)?;
                self.store.smart_concat(dr, e)
            }
            Expr::Op(op, args) => self.derive_op(a, &op, &args)?,
        };
        self.derive_memo.insert((e, a), d);
        Ok(d)
    }

    fn derive_op(&mut self, a: Symbol, op: &Op, args: &[ExprId]) -> Result<ExprId> {
        match self.registry().derivative_rule(op, a)? {
            DerivativeRule::Linear(terms) => {
                let mut summands = Vec::with_capacity(terms.len());
                for t in terms {
                    let mut new_args = Vec::with_capacity(t.args.len());
                    for x in &t.args {
                        new_args.push(self.derive_word(&x.word, args[x.arg])?);
                    }
                    let head = self.store.op(t.target, new_args);
                    summands.push(self.store.word_then(&t.prefix, head));
                }
                Ok(self.store.union_of(summands))
            }
            DerivativeRule::General(g) => self.instantiate(&g.template, args),
            DerivativeRule::None => Err(Error::Capability {
                op: op.clone(),
                reason: "no derivative rule".into(),
            }),
        }
    }

    fn instantiate(&mut self, t: &Template, args: &[ExprId]) -> Result<ExprId> {
        Ok(match t {
            Template::Var(x) => self.derive_word(&x.word, args[x.arg])?,
            Template::Word(w) => self.store.word(w),
            Template::Concat(l, r) => {
                let l = self.instantiate(l, args)?;
                let r = self.instantiate(r, args)?;
                self.store.smart_concat(l, r)
            }
            Template::Union(xs) => {
                let mut ids = Vec::with_capacity(xs.len());
                for x in xs {
                    ids.push(self.instantiate(x, args)?);
                }
                self.store.union_of(ids)
            }
            Template::Op(op, xs) => {
                let mut ids = Vec::with_capacity(xs.len());
                for x in xs {
                    ids.push(self.instantiate(x, args)?);
                }
                self.store.op(op.clone(), ids)
            }
        })
    }

    /// Derivative by a word: a left fold of [`Session::derive`].
    pub fn derive_word(&mut self, w: &[Symbol], e: ExprId) -> Result<ExprId> {
        let mut d = e;
        for &a in w {
            d = self.derive(a, d)?;
        }
        Ok(d)
    }

    /// Decides `w ∈ L(e)` as the nullability of the derivative by `w`.
    pub fn matches(&mut self, e: ExprId, w: &[Symbol]) -> Result<bool> {
        self.check_word(w)?;
        let d = self.derive_word(w, e)?;
        self.nullable(d).decided()
    }
}
