use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::Term;
use crate::operators::Op;
use crate::symbol::Symbol;

/// Handle of a canonical expression inside an [`ExprStore`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExprId(u32);

impl ExprId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ExprId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A canonical expression node. Children are interned handles.
///
/// `Union` always holds at least two summands, none of which is a `Union`
/// or `Null`, sorted by [`ExprStore::cmp`] without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Null,
    Eps,
    Sym(Symbol),
    Union(Vec<ExprId>),
    Concat(ExprId, ExprId),
    Star(ExprId),
    Op(Op, Vec<ExprId>),
}

impl Expr {
    fn tag(&self) -> u8 {
        match self {
            Expr::Null => 0,
            Expr::Eps => 1,
            Expr::Sym(_) => 2,
            Expr::Union(_) => 3,
            Expr::Concat(..) => 4,
            Expr::Star(_) => 5,
            Expr::Op(..) => 6,
        }
    }
}

/// Append-only hash-consing table for canonical expressions.
///
/// Reads take `&self` and writes `&mut self`; wrap the store in a lock to
/// share one session between threads.
#[derive(Clone, Debug)]
pub struct ExprStore {
    nodes: Vec<Expr>,
    index: HashMap<Expr, ExprId>,
}

impl Default for ExprStore {
    fn default() -> Self {
        Self::new()
    }
}

impl ExprStore {
    pub const NULL: ExprId = ExprId(0);
    pub const EPS: ExprId = ExprId(1);

    pub fn new() -> Self {
        let mut store = ExprStore {
            nodes: Vec::new(),
            index: HashMap::new(),
        };
        store.intern(Expr::Null);
        store.intern(Expr::Eps);
        store
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: ExprId) -> &Expr {
        &self.nodes[id.index()]
    }

    fn intern(&mut self, e: Expr) -> ExprId {
        if let Some(&id) = self.index.get(&e) {
            return id;
        }
        let id = ExprId(u32::try_from(self.nodes.len()).expect("expression store overflow"));
        self.nodes.push(e.clone());
        self.index.insert(e, id);
        id
    }

    /// Looks up an already interned node without inserting it.
    pub fn lookup(&self, e: &Expr) -> Option<ExprId> {
        self.index.get(e).copied()
    }

    pub fn null(&self) -> ExprId {
        Self::NULL
    }

    pub fn eps(&self) -> ExprId {
        Self::EPS
    }

    pub fn sym(&mut self, s: Symbol) -> ExprId {
        self.intern(Expr::Sym(s))
    }

    pub fn star(&mut self, body: ExprId) -> ExprId {
        self.intern(Expr::Star(body))
    }

    /// Plain concatenation node, no unit or zero collapsing.
    pub fn concat(&mut self, l: ExprId, r: ExprId) -> ExprId {
        self.intern(Expr::Concat(l, r))
    }

    /// Operator application. No simplification is applied to the arguments.
    pub fn op(&mut self, op: Op, args: Vec<ExprId>) -> ExprId {
        assert_eq!(op.arity(), args.len(), "arity mismatch for {op}");
        self.intern(Expr::Op(op, args))
    }

    /// Smart concatenation: absorbs `@0` and drops `@e` units.
    pub fn smart_concat(&mut self, l: ExprId, r: ExprId) -> ExprId {
        if l == Self::NULL || r == Self::NULL {
            Self::NULL
        } else if r == Self::EPS {
            l
        } else if l == Self::EPS {
            r
        } else {
            self.concat(l, r)
        }
    }

    /// Smart union, i.e. the canonical representative of `l + r`.
    pub fn smart_union(&mut self, l: ExprId, r: ExprId) -> ExprId {
        self.union_of([l, r])
    }

    /// Canonical union of any number of expressions: flattened, `@0`-free,
    /// sorted and duplicate-free. The empty union is `@0`.
    pub fn union_of(&mut self, items: impl IntoIterator<Item = ExprId>) -> ExprId {
        let mut flat: Vec<ExprId> = Vec::new();
        for id in items {
            match self.get(id) {
                Expr::Null => {}
                Expr::Union(xs) => flat.extend_from_slice(xs),
                _ => flat.push(id),
            }
        }
        flat.sort_by(|&a, &b| self.cmp(a, b));
        flat.dedup();
        match flat.len() {
            0 => Self::NULL,
            1 => flat[0],
            _ => self.intern(Expr::Union(flat)),
        }
    }

    /// Right-nested smart concatenation of the symbols of `w`, then `tail`.
    pub fn word_then(&mut self, w: &[Symbol], tail: ExprId) -> ExprId {
        w.iter().rev().fold(tail, |acc, &s| {
            let sym = self.sym(s);
            self.smart_concat(sym, acc)
        })
    }

    pub fn word(&mut self, w: &[Symbol]) -> ExprId {
        self.word_then(w, Self::EPS)
    }

    /// Summands of an expression read as a union: `@0` has none, a `Union`
    /// its members, anything else itself.
    pub fn summands(&self, id: ExprId) -> Vec<ExprId> {
        match self.get(id) {
            Expr::Null => Vec::new(),
            Expr::Union(xs) => xs.clone(),
            _ => vec![id],
        }
    }

    /// The fixed total order on canonical expressions: variant tag first,
    /// then children lexicographically.
    pub fn cmp(&self, a: ExprId, b: ExprId) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let (ea, eb) = (self.get(a), self.get(b));
        ea.tag().cmp(&eb.tag()).then_with(|| match (ea, eb) {
            (Expr::Sym(x), Expr::Sym(y)) => x.cmp(y),
            (Expr::Union(xs), Expr::Union(ys)) => self.cmp_lists(xs, ys),
            (Expr::Concat(l1, r1), Expr::Concat(l2, r2)) => {
                self.cmp(*l1, *l2).then_with(|| self.cmp(*r1, *r2))
            }
            (Expr::Star(x), Expr::Star(y)) => self.cmp(*x, *y),
            (Expr::Op(o1, a1), Expr::Op(o2, a2)) => {
                o1.cmp(o2).then_with(|| self.cmp_lists(a1, a2))
            }
            _ => Ordering::Equal,
        })
    }

    fn cmp_lists(&self, xs: &[ExprId], ys: &[ExprId]) -> Ordering {
        for (&x, &y) in xs.iter().zip(ys) {
            match self.cmp(x, y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        xs.len().cmp(&ys.len())
    }

    /// Canonical form of a raw term. Only union similarity is applied;
    /// concatenations keep any `@e`/`@0` operands they were written with.
    pub fn normalize(&mut self, t: &Term) -> ExprId {
        match t {
            Term::Null => Self::NULL,
            Term::Eps => Self::EPS,
            Term::Sym(s) => self.sym(*s),
            Term::Union(l, r) => {
                let (l, r) = (self.normalize(l), self.normalize(r));
                self.union_of([l, r])
            }
            Term::Concat(l, r) => {
                let (l, r) = (self.normalize(l), self.normalize(r));
                self.concat(l, r)
            }
            Term::Star(b) => {
                let b = self.normalize(b);
                self.star(b)
            }
            Term::Op(op, args) => {
                let args = args.iter().map(|a| self.normalize(a)).collect();
                self.op(op.clone(), args)
            }
        }
    }

    /// Reads a canonical expression back as a term. Unions become
    /// right-nested binary unions in summand order.
    pub fn to_term(&self, id: ExprId) -> Term {
        match self.get(id) {
            Expr::Null => Term::Null,
            Expr::Eps => Term::Eps,
            Expr::Sym(s) => Term::Sym(*s),
            Expr::Union(xs) => {
                let mut it = xs.iter().rev();
                let last = self.to_term(*it.next().expect("union has summands"));
                it.fold(last, |acc, &x| Term::union(self.to_term(x), acc))
            }
            Expr::Concat(l, r) => Term::concat(self.to_term(*l), self.to_term(*r)),
            Expr::Star(b) => Term::star(self.to_term(*b)),
            Expr::Op(op, args) => {
                Term::Op(op.clone(), args.iter().map(|&a| self.to_term(a)).collect())
            }
        }
    }

    /// Number of nodes of the expression read as a tree.
    pub fn size(&self, id: ExprId) -> usize {
        match self.get(id) {
            Expr::Null | Expr::Eps | Expr::Sym(_) => 1,
            Expr::Union(xs) => xs.len() - 1 + xs.iter().map(|&x| self.size(x)).sum::<usize>(),
            Expr::Concat(l, r) => 1 + self.size(*l) + self.size(*r),
            Expr::Star(b) => 1 + self.size(*b),
            Expr::Op(_, args) => 1 + args.iter().map(|&a| self.size(a)).sum::<usize>(),
        }
    }

    /// All operators occurring in the expression.
    pub fn ops_in(&self, id: ExprId) -> BTreeSet<Op> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(id) = stack.pop() {
            match self.get(id) {
                Expr::Null | Expr::Eps | Expr::Sym(_) => {}
                Expr::Union(xs) => stack.extend(xs),
                Expr::Concat(l, r) => stack.extend([*l, *r]),
                Expr::Star(b) => stack.push(*b),
                Expr::Op(op, args) => {
                    out.insert(op.clone());
                    stack.extend(args);
                }
            }
        }
        out
    }

    /// Checks the structural invariants of a canonical node and all of its
    /// descendants. Returns a description of the first violation.
    pub fn audit(&self, id: ExprId) -> Result<(), String> {
        match self.get(id) {
            Expr::Union(xs) => {
                if xs.len() < 2 {
                    return Err(format!("{id}: union with {} summand(s)", xs.len()));
                }
                for w in xs.windows(2) {
                    if self.cmp(w[0], w[1]) != Ordering::Less {
                        return Err(format!("{id}: union summands not strictly sorted"));
                    }
                }
                for &x in xs {
                    if matches!(self.get(x), Expr::Null | Expr::Union(_)) {
                        return Err(format!("{id}: union contains @0 or a nested union"));
                    }
                    self.audit(x)?;
                }
                Ok(())
            }
            Expr::Concat(l, r) => {
                self.audit(*l)?;
                self.audit(*r)
            }
            Expr::Star(b) => self.audit(*b),
            Expr::Op(op, args) => {
                if op.arity() != args.len() {
                    return Err(format!("{id}: {op} applied to {} arguments", args.len()));
                }
                args.iter().try_for_each(|&a| self.audit(a))
            }
            Expr::Null | Expr::Eps | Expr::Sym(_) => Ok(()),
        }
    }
}
