//! Enhanced operators: their ε-tests and their derivative laws.
//!
//! Every operator carries an [`EpsCapability`] (how to decide whether ε is
//! in its language from its arguments) and a [`DerivativeRule`] shape. A
//! linear rule writes `∖a F(L₁…Lₙ)` as a finite sum of
//! `v · G(∖w₁ Lα₁, …)`; a general rule gives an arbitrary template over
//! argument derivatives `x_{w,j} = ∖w Lⱼ`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::{fmt_word, Alphabet, Symbol, Word};
use crate::syntax::{Definitions, HomTable};

/// Operator identifier, including its parameters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    And,
    Not,
    Shuffle,
    ShClose,
    Hom(String),
    Hinv(String),
    /// Every `k`-th symbol starting at position `i` (1-based).
    Xk { i: u32, k: u32 },
    LQuot,
    RQuot,
    Prefixes,
    Hamming(u32),
    Lev(u32),
    Tilde,
    Bar,
    UpClose,
    Id,
}

/// A bracketed operator parameter as written in an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Num(u32),
    Name(String),
}

impl Op {
    /// Operator names accepted by the parser (besides the `suffixes` sugar).
    pub const NAMES: &'static [&'static str] = &[
        "and", "not", "shuffle", "shclose", "hom", "hinv", "xk", "lquot", "rquot", "prefixes",
        "hamming", "lev", "tilde", "bar", "upclose", "id",
    ];

    pub fn arity(&self) -> usize {
        match self {
            Op::And | Op::Shuffle | Op::LQuot | Op::RQuot => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Op::And => "and",
            Op::Not => "not",
            Op::Shuffle => "shuffle",
            Op::ShClose => "shclose",
            Op::Hom(_) => "hom",
            Op::Hinv(_) => "hinv",
            Op::Xk { .. } => "xk",
            Op::LQuot => "lquot",
            Op::RQuot => "rquot",
            Op::Prefixes => "prefixes",
            Op::Hamming(_) => "hamming",
            Op::Lev(_) => "lev",
            Op::Tilde => "tilde",
            Op::Bar => "bar",
            Op::UpClose => "upclose",
            Op::Id => "id",
        }
    }

    /// Builds an operator from its name and bracketed parameters.
    pub fn from_call(name: &str, params: &[Param]) -> Result<Op> {
        let bad = |msg: &str| Error::Parameters {
            op: name.to_string(),
            msg: msg.to_string(),
        };
        let none = |op: Op| {
            if params.is_empty() {
                Ok(op)
            } else {
                Err(bad("takes no parameters"))
            }
        };
        let num = |i: usize| match params.get(i) {
            Some(Param::Num(n)) => Ok(*n),
            _ => Err(bad("expected a number")),
        };
        let table = || match params {
            [Param::Name(n)] => Ok(n.clone()),
            _ => Err(bad("expected a single table name")),
        };
        match name {
            "and" => none(Op::And),
            "not" => none(Op::Not),
            "shuffle" => none(Op::Shuffle),
            "shclose" => none(Op::ShClose),
            "lquot" => none(Op::LQuot),
            "rquot" => none(Op::RQuot),
            "prefixes" => none(Op::Prefixes),
            "tilde" => none(Op::Tilde),
            "bar" => none(Op::Bar),
            "upclose" => none(Op::UpClose),
            "id" => none(Op::Id),
            "hom" => Ok(Op::Hom(table()?)),
            "hinv" => Ok(Op::Hinv(table()?)),
            "hamming" | "lev" => {
                if params.len() != 1 {
                    return Err(bad("expected one distance bound"));
                }
                let k = num(0)?;
                Ok(if name == "hamming" { Op::Hamming(k) } else { Op::Lev(k) })
            }
            "xk" => {
                if params.len() != 2 {
                    return Err(bad("expected `[i,k]`"));
                }
                Ok(Op::Xk { i: num(0)?, k: num(1)? })
            }
            _ => Err(Error::UnknownOperator {
                pos: 0,
                name: name.to_string(),
            }),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Hom(h) | Op::Hinv(h) => write!(f, "{}[{h}]", self.name()),
            Op::Xk { i, k } => write!(f, "xk[{i},{k}]"),
            Op::Hamming(k) | Op::Lev(k) => write!(f, "{}[{k}]", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

/// Reads an operator as printed by `Display`, e.g. `hamming[1]` or `hom[H]`.
impl std::str::FromStr for Op {
    type Err = Error;

    fn from_str(text: &str) -> Result<Op> {
        let text = text.trim();
        let (name, params) = match text.split_once('[') {
            None => (text, Vec::new()),
            Some((name, rest)) => {
                let inner = rest.strip_suffix(']').ok_or_else(|| Error::Parameters {
                    op: name.to_string(),
                    msg: "missing `]`".into(),
                })?;
                let params = inner
                    .split(',')
                    .map(|p| {
                        let p = p.trim();
                        match p.parse::<u32>() {
                            Ok(n) => Param::Num(n),
                            Err(_) => Param::Name(p.to_string()),
                        }
                    })
                    .collect();
                (name.trim(), params)
            }
        };
        Op::from_call(name, &params)
    }
}

/// Truth table of an n-ary boolean function. Entry `m` holds the value for
/// the argument vector whose `i`-th flag is bit `i` of `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolFn {
    arity: usize,
    table: Vec<bool>,
}

impl BoolFn {
    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        let table = (0..1usize << arity)
            .map(|m| {
                let flags: Vec<bool> = (0..arity).map(|i| m >> i & 1 == 1).collect();
                f(&flags)
            })
            .collect();
        BoolFn { arity, table }
    }

    pub fn identity() -> Self {
        Self::from_fn(1, |b| b[0])
    }

    pub fn constant(arity: usize, v: bool) -> Self {
        Self::from_fn(arity, |_| v)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, flags: &[bool]) -> bool {
        assert_eq!(flags.len(), self.arity, "boolean function arity");
        let m = flags
            .iter()
            .enumerate()
            .fold(0usize, |m, (i, &b)| m | (b as usize) << i);
        self.table[m]
    }

    /// Evaluates with some flags unknown; returns a value only if it does not
    /// depend on the unknown ones.
    pub fn eval_partial(&self, flags: &[Option<bool>]) -> Option<bool> {
        let unknown: Vec<usize> = (0..flags.len()).filter(|&i| flags[i].is_none()).collect();
        let mut result = None;
        for m in 0..1usize << unknown.len() {
            let mut full: Vec<bool> = flags.iter().map(|f| f.unwrap_or(false)).collect();
            for (bit, &i) in unknown.iter().enumerate() {
                full[i] = m >> bit & 1 == 1;
            }
            let v = self.eval(&full);
            match result {
                None => result = Some(v),
                Some(r) if r != v => return None,
                _ => {}
            }
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

/// Decision procedures used for operators whose ε-membership is not a
/// boolean function of their arguments' ε-memberships.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HookKind {
    /// ε is in the result iff argument 1 is nonempty.
    Emptiness,
    /// ε is in the result iff arguments 1 and 2 intersect.
    IntersectionEmptiness,
    /// ε is in the result iff argument 1 has a word shorter than the bound.
    ShortestWordBound(usize),
}

impl fmt::Display for HookKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HookKind::Emptiness => f.write_str("emptiness"),
            HookKind::IntersectionEmptiness => f.write_str("intersection-emptiness"),
            HookKind::ShortestWordBound(t) => write!(f, "shortest-word-bound({t})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsCapability {
    BooleanFn(BoolFn),
    SemanticHook(HookKind),
    None,
}

/// Which arguments a semantic hook has to inspect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookRequest {
    pub kind: HookKind,
    pub args: Vec<usize>,
}

/// Outcome of asking an operator about ε given its arguments' flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsAnswer {
    Value(bool),
    Hook(HookRequest),
    Unsupported,
}

/// `x_{w,j}`: the derivative of argument `j` (0-based) by the word `w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgDerivative {
    pub word: Word,
    pub arg: usize,
}

impl ArgDerivative {
    pub fn new(word: Word, arg: usize) -> Self {
        ArgDerivative { word, arg }
    }
}

impl fmt::Display for ArgDerivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{{{},{}}}", fmt_word(&self.word), self.arg + 1)
    }
}

/// One summand `prefix · target(∖w₁ Lα₁, …)` of a linear derivative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearTerm {
    pub prefix: Word,
    pub target: Op,
    pub args: Vec<ArgDerivative>,
}

impl fmt::Display for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write!(f, "{}·", fmt_word(&self.prefix))?;
        }
        let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
        write!(f, "{}({})", self.target, args.join(", "))
    }
}

/// Expression template over argument derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Template {
    Var(ArgDerivative),
    Word(Word),
    Concat(Box<Template>, Box<Template>),
    Union(Vec<Template>),
    Op(Op, Vec<Template>),
}

impl Template {
    fn collect_vars(&self, out: &mut BTreeSet<ArgDerivative>) {
        match self {
            Template::Var(v) => {
                out.insert(v.clone());
            }
            Template::Word(_) => {}
            Template::Concat(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Template::Union(xs) | Template::Op(_, xs) => xs.iter().for_each(|x| x.collect_vars(out)),
        }
    }

    fn collect_ops(&self, out: &mut Vec<Op>) {
        match self {
            Template::Var(_) | Template::Word(_) => {}
            Template::Concat(l, r) => {
                l.collect_ops(out);
                r.collect_ops(out);
            }
            Template::Union(xs) => xs.iter().for_each(|x| x.collect_ops(out)),
            Template::Op(op, xs) => {
                out.push(op.clone());
                xs.iter().for_each(|x| x.collect_ops(out));
            }
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Template::Var(v) => write!(f, "{v}"),
            Template::Word(w) => f.write_str(&fmt_word(w)),
            Template::Concat(l, r) => write!(f, "({l}·{r})"),
            Template::Union(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            Template::Op(op, xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "{op}({})", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralRule {
    pub vars: BTreeSet<ArgDerivative>,
    pub template: Template,
}

impl GeneralRule {
    fn new(template: Template) -> Self {
        let mut vars = BTreeSet::new();
        template.collect_vars(&mut vars);
        GeneralRule { vars, template }
    }
}

/// A derivative law instantiated for one symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivativeRule {
    Linear(Vec<LinearTerm>),
    General(GeneralRule),
    None,
}

impl DerivativeRule {
    /// Operators the rule refers to.
    pub fn targets(&self) -> Vec<Op> {
        match self {
            DerivativeRule::Linear(terms) => terms.iter().map(|t| t.target.clone()).collect(),
            DerivativeRule::General(g) => {
                let mut out = Vec::new();
                g.template.collect_ops(&mut out);
                out
            }
            DerivativeRule::None => Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleShape {
    Linear,
    General,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDef {
    pub op: Op,
    pub arity: usize,
    pub eps: EpsCapability,
    pub shape: RuleShape,
}

impl OperatorDef {
    fn of(op: &Op) -> Self {
        use EpsCapability as E;
        let and = || E::BooleanFn(BoolFn::from_fn(2, |b| b[0] && b[1]));
        let (eps, shape) = match op {
            Op::And => (and(), RuleShape::Linear),
            Op::Not => (E::BooleanFn(BoolFn::from_fn(1, |b| !b[0])), RuleShape::Linear),
            Op::Shuffle => (and(), RuleShape::Linear),
            Op::ShClose => (E::BooleanFn(BoolFn::constant(1, true)), RuleShape::General),
            Op::Hom(_) | Op::Hinv(_) | Op::Hamming(_) | Op::UpClose | Op::Id => {
                (E::BooleanFn(BoolFn::identity()), RuleShape::Linear)
            }
            Op::Xk { i, .. } => (
                E::SemanticHook(HookKind::ShortestWordBound(*i as usize)),
                RuleShape::Linear,
            ),
            Op::LQuot => (E::SemanticHook(HookKind::IntersectionEmptiness), RuleShape::General),
            Op::RQuot => (E::SemanticHook(HookKind::IntersectionEmptiness), RuleShape::Linear),
            Op::Prefixes => (E::SemanticHook(HookKind::Emptiness), RuleShape::Linear),
            Op::Lev(k) => (
                E::SemanticHook(HookKind::ShortestWordBound(*k as usize + 1)),
                RuleShape::Linear,
            ),
            Op::Tilde => (E::BooleanFn(BoolFn::constant(1, true)), RuleShape::Linear),
            Op::Bar => (E::BooleanFn(BoolFn::constant(1, false)), RuleShape::Linear),
        };
        OperatorDef {
            op: op.clone(),
            arity: op.arity(),
            eps,
            shape,
        }
    }

    /// Answers whether ε belongs to the operator's language given whether
    /// it belongs to each argument.
    pub fn eps_capability(&self, arg_flags: &[bool]) -> EpsAnswer {
        match &self.eps {
            EpsCapability::BooleanFn(f) => EpsAnswer::Value(f.eval(arg_flags)),
            EpsCapability::SemanticHook(kind) => EpsAnswer::Hook(HookRequest {
                kind: *kind,
                args: match kind {
                    HookKind::IntersectionEmptiness => vec![0, 1],
                    _ => vec![0],
                },
            }),
            EpsCapability::None => EpsAnswer::Unsupported,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.shape == RuleShape::Linear
    }
}

/// Operators available to a session, closed under the targets of their
/// derivative rules.
#[derive(Clone, Debug)]
pub struct Registry {
    defs: Definitions,
    ops: BTreeMap<Op, OperatorDef>,
}

impl Registry {
    /// Registers every parameter-free operator plus `hinv[H]` for each table
    /// and `hom[H]` for each non-erasing table. Parameterized families
    /// (`hamming`, `lev`, `xk`) are added by [`Registry::register`].
    pub fn build(defs: Definitions) -> Result<Self> {
        let mut reg = Registry {
            defs,
            ops: BTreeMap::new(),
        };
        let base = [
            Op::And,
            Op::Not,
            Op::Shuffle,
            Op::ShClose,
            Op::LQuot,
            Op::RQuot,
            Op::Prefixes,
            Op::Tilde,
            Op::Bar,
            Op::UpClose,
            Op::Id,
        ];
        for op in base {
            reg.register(&op)?;
        }
        let tables: Vec<(String, bool)> = reg
            .defs
            .homs
            .values()
            .map(|h| (h.name().to_string(), h.is_erasing()))
            .collect();
        for (name, erasing) in tables {
            reg.register(&Op::Hinv(name.clone()))?;
            if !erasing {
                reg.register(&Op::Hom(name))?;
            }
        }
        Ok(reg)
    }

    pub fn defs(&self) -> &Definitions {
        &self.defs
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.defs.alphabet
    }

    pub fn hom(&self, name: &str) -> Option<&HomTable> {
        self.defs.hom(name)
    }

    pub fn get(&self, op: &Op) -> Option<&OperatorDef> {
        self.ops.get(op)
    }

    pub fn contains(&self, op: &Op) -> bool {
        self.ops.contains_key(op)
    }

    pub fn ops(&self) -> impl Iterator<Item = &OperatorDef> {
        self.ops.values()
    }

    fn validate(&self, op: &Op) -> Result<()> {
        let bad = |msg: String| Error::Parameters {
            op: op.to_string(),
            msg,
        };
        match op {
            Op::Hom(h) => {
                let table = self
                    .hom(h)
                    .ok_or_else(|| bad(format!("no homomorphism named `{h}`")))?;
                if table.is_erasing() {
                    return Err(Error::ErasingHomomorphism { table: h.clone() });
                }
            }
            Op::Hinv(h) => {
                self.hom(h)
                    .ok_or_else(|| bad(format!("no homomorphism named `{h}`")))?;
            }
            Op::Xk { i, k } if *k == 0 || *i == 0 || i > k => {
                return Err(bad("requires 0 < i <= k".into()));
            }
            _ => {}
        }
        Ok(())
    }

    /// Adds an operator together with every operator its derivative rules
    /// can produce.
    pub fn register(&mut self, op: &Op) -> Result<()> {
        if self.ops.contains_key(op) {
            return Ok(());
        }
        self.validate(op)?;
        let mut queue = VecDeque::from([op.clone()]);
        while let Some(next) = queue.pop_front() {
            if self.ops.contains_key(&next) {
                continue;
            }
            self.validate(&next)?;
            self.ops.insert(next.clone(), OperatorDef::of(&next));
            for &a in self.defs.alphabet.symbols() {
                for target in self.instantiate(&next, a).targets() {
                    if !self.ops.contains_key(&target) {
                        queue.push_back(target);
                    }
                }
            }
        }
        Ok(())
    }

    /// The derivative law of `op` for the symbol `a`.
    pub fn derivative_rule(&self, op: &Op, a: Symbol) -> Result<DerivativeRule> {
        if !self.contains(op) {
            return Err(Error::Capability {
                op: op.clone(),
                reason: "operator is not registered".into(),
            });
        }
        match self.instantiate(op, a) {
            DerivativeRule::None => Err(Error::Capability {
                op: op.clone(),
                reason: "no derivative rule".into(),
            }),
            rule => Ok(rule),
        }
    }

    fn instantiate(&self, op: &Op, a: Symbol) -> DerivativeRule {
        let sigma = self.defs.alphabet.symbols();
        let x = |w: Word, j: usize| ArgDerivative::new(w, j);
        let term = |target: Op, args: Vec<ArgDerivative>| LinearTerm {
            prefix: Vec::new(),
            target,
            args,
        };
        let linear = match op {
            Op::And => vec![term(Op::And, vec![x(vec![a], 0), x(vec![a], 1)])],
            Op::Not => vec![term(Op::Not, vec![x(vec![a], 0)])],
            Op::Shuffle => vec![
                term(Op::Shuffle, vec![x(vec![a], 0), x(vec![], 1)]),
                term(Op::Shuffle, vec![x(vec![], 0), x(vec![a], 1)]),
            ],
            Op::ShClose => {
                return DerivativeRule::General(GeneralRule::new(Template::Op(
                    Op::Shuffle,
                    vec![
                        Template::Var(x(vec![a], 0)),
                        Template::Op(Op::ShClose, vec![Template::Var(x(vec![], 0))]),
                    ],
                )))
            }
            Op::LQuot => {
                return DerivativeRule::General(GeneralRule::new(Template::Op(
                    Op::LQuot,
                    vec![
                        Template::Concat(
                            Box::new(Template::Var(x(vec![], 0))),
                            Box::new(Template::Word(vec![a])),
                        ),
                        Template::Var(x(vec![], 1)),
                    ],
                )))
            }
            Op::Hom(h) => {
                let Some(table) = self.hom(h) else {
                    return DerivativeRule::None;
                };
                table
                    .images()
                    .filter(|(_, img)| img.first() == Some(&a))
                    .map(|(b, img)| LinearTerm {
                        prefix: img[1..].to_vec(),
                        target: op.clone(),
                        args: vec![x(vec![b], 0)],
                    })
                    .collect()
            }
            Op::Hinv(h) => {
                let Some(table) = self.hom(h) else {
                    return DerivativeRule::None;
                };
                vec![term(op.clone(), vec![x(table.image(a).to_vec(), 0)])]
            }
            Op::Xk { i, k } => self
                .defs
                .alphabet
                .words_of_len(*i as usize - 1)
                .into_iter()
                .map(|mut w| {
                    w.push(a);
                    term(Op::Xk { i: *k, k: *k }, vec![x(w, 0)])
                })
                .collect(),
            Op::RQuot => vec![term(Op::RQuot, vec![x(vec![a], 0), x(vec![], 1)])],
            Op::Prefixes => vec![term(Op::Prefixes, vec![x(vec![a], 0)])],
            Op::Hamming(k) => {
                let mut out = vec![term(Op::Hamming(*k), vec![x(vec![a], 0)])];
                if *k > 0 {
                    for &other in sigma.iter().filter(|&&s| s != a) {
                        out.push(term(Op::Hamming(k - 1), vec![x(vec![other], 0)]));
                    }
                }
                out
            }
            Op::Lev(k) => {
                let k = *k as usize;
                let mut out = Vec::new();
                for w in self.defs.alphabet.words_up_to(k) {
                    let rest = k - w.len();
                    // delete w, then match a
                    let mut wa = w.clone();
                    wa.push(a);
                    out.push(term(Op::Lev(rest as u32), vec![x(wa, 0)]));
                    // Terms with distance budget -1 denote the empty language.
                    if rest == 0 {
                        continue;
                    }
                    let lower = Op::Lev(rest as u32 - 1);
                    // delete w, then substitute a for some other symbol
                    for &other in sigma.iter().filter(|&&s| s != a) {
                        let mut wx = w.clone();
                        wx.push(other);
                        out.push(term(lower.clone(), vec![x(wx, 0)]));
                    }
                    // delete w, then insert a
                    out.push(term(lower, vec![x(w, 0)]));
                }
                out
            }
            Op::Tilde | Op::Bar | Op::Id => vec![term(Op::Id, vec![x(vec![a], 0)])],
            Op::UpClose => vec![
                term(Op::UpClose, vec![x(vec![], 0)]),
                term(Op::UpClose, vec![x(vec![a], 0)]),
            ],
        };
        DerivativeRule::Linear(linear)
    }

    /// All prefix words `v` occurring in linear rules of registered operators.
    pub fn linear_prefixes(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for def in self.ops.values().filter(|d| d.is_linear()) {
            for &a in self.defs.alphabet.symbols() {
                if let DerivativeRule::Linear(terms) = self.instantiate(&def.op, a) {
                    out.extend(terms.into_iter().map(|t| t.prefix));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::word;

    fn reg() -> Registry {
        Registry::build(Definitions::default()).unwrap()
    }

    #[test]
    fn op_from_str_round_trips() {
        for text in ["and", "hamming[1]", "xk[1,2]", "hom[H]", "lev[0]", "upclose"] {
            let op: Op = text.parse().unwrap();
            assert_eq!(op.to_string(), text);
        }
        assert!("hamming".parse::<Op>().is_err());
        assert!("frob".parse::<Op>().is_err());
        assert!("xk[1,2".parse::<Op>().is_err());
    }

    #[test]
    fn hamming_family_is_closed() {
        let mut r = reg();
        r.register(&Op::Hamming(1)).unwrap();
        assert!(r.contains(&Op::Hamming(0)));
        r.register(&Op::Lev(2)).unwrap();
        assert!(r.contains(&Op::Lev(1)) && r.contains(&Op::Lev(0)));
        r.register(&Op::Xk { i: 1, k: 3 }).unwrap();
        assert!(r.contains(&Op::Xk { i: 3, k: 3 }));
    }

    #[test]
    fn tilde_pulls_in_identity() {
        let r = reg();
        assert!(r.contains(&Op::Id));
        let rule = r.derivative_rule(&Op::Tilde, Symbol('a')).unwrap();
        assert_eq!(
            rule,
            DerivativeRule::Linear(vec![LinearTerm {
                prefix: vec![],
                target: Op::Id,
                args: vec![ArgDerivative::new(word("a"), 0)],
            }])
        );
    }

    #[test]
    fn erasing_hom_is_rejected() {
        let defs = Definitions::parse("hom H: a -> @e, b -> b").unwrap();
        let mut r = Registry::build(defs).unwrap();
        assert!(r.contains(&Op::Hinv("H".into())));
        assert!(!r.contains(&Op::Hom("H".into())));
        assert_eq!(
            r.register(&Op::Hom("H".into())),
            Err(Error::ErasingHomomorphism { table: "H".into() })
        );
    }

    #[test]
    fn xk_parameters_are_checked() {
        let mut r = reg();
        assert!(r.register(&Op::Xk { i: 3, k: 2 }).is_err());
        assert!(r.register(&Op::Xk { i: 0, k: 2 }).is_err());
    }

    #[test]
    fn eps_capabilities() {
        let r = reg();
        let shuffle = r.get(&Op::Shuffle).unwrap();
        assert_eq!(shuffle.eps_capability(&[true, false]), EpsAnswer::Value(false));
        let shclose = r.get(&Op::ShClose).unwrap();
        assert_eq!(shclose.eps_capability(&[false]), EpsAnswer::Value(true));
        let rquot = r.get(&Op::RQuot).unwrap();
        assert_eq!(
            rquot.eps_capability(&[false, false]),
            EpsAnswer::Hook(HookRequest {
                kind: HookKind::IntersectionEmptiness,
                args: vec![0, 1]
            })
        );
        for def in r.ops() {
            if let EpsCapability::BooleanFn(f) = &def.eps {
                assert_eq!(f.table().len(), 1 << def.arity, "{}", def.op);
            }
        }
    }

    #[test]
    fn hamming_rule_for_a() {
        let mut r = reg();
        r.register(&Op::Hamming(1)).unwrap();
        let rule = r.derivative_rule(&Op::Hamming(1), Symbol('a')).unwrap();
        let DerivativeRule::Linear(terms) = rule else {
            panic!("hamming is linear")
        };
        let got: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        assert_eq!(got, vec!["hamming[1](x{a,1})", "hamming[0](x{b,1})"]);
    }

    #[test]
    fn general_rules() {
        let r = reg();
        let DerivativeRule::General(g) = r.derivative_rule(&Op::ShClose, Symbol('a')).unwrap() else {
            panic!("shclose is general")
        };
        assert_eq!(g.template.to_string(), "shuffle(x{a,1}, shclose(x{@e,1}))");
        assert_eq!(g.vars.len(), 2);
        let DerivativeRule::General(g) = r.derivative_rule(&Op::LQuot, Symbol('a')).unwrap() else {
            panic!("lquot is general")
        };
        assert_eq!(g.template.to_string(), "lquot((x{@e,1}·a), x{@e,2})");
    }

    #[test]
    fn partial_evaluation_short_circuits() {
        let and = BoolFn::from_fn(2, |b| b[0] && b[1]);
        assert_eq!(and.eval_partial(&[Some(false), None]), Some(false));
        assert_eq!(and.eval_partial(&[Some(true), None]), None);
    }
}
