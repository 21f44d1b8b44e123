//! A working context: one interning store, one operator registry and the
//! memo tables shared by derivation, compilation and D⁺ queries.

use std::collections::HashMap;

use crate::derivation::Nullability;
use crate::error::{Error, Result};
use crate::operators::{EpsCapability, Op, Registry, RuleShape};
use crate::symbol::{Alphabet, Symbol};
use crate::syntax::{parse_term, pretty, Definitions, Expr, ExprId, ExprStore, Term};

pub const DEFAULT_MAX_STATES: usize = 10_000;

#[derive(Clone, Debug)]
pub struct Session {
    pub store: ExprStore,
    reg: Registry,
    pub(crate) nullable_memo: HashMap<ExprId, Nullability>,
    pub(crate) derive_memo: HashMap<(ExprId, Symbol), ExprId>,
    pub(crate) shortest_memo: HashMap<ExprId, Option<usize>>,
    pub(crate) dplus_memo: HashMap<(ExprId, ExprId), bool>,
    /// State cap used when a semantic hook compiles its arguments.
    pub hook_max_states: usize,
}

impl Session {
    pub fn new(defs: Definitions) -> Result<Self> {
        Ok(Session {
            store: ExprStore::new(),
            reg: Registry::build(defs)?,
            nullable_memo: HashMap::new(),
            derive_memo: HashMap::new(),
            shortest_memo: HashMap::new(),
            dplus_memo: HashMap::new(),
            hook_max_states: DEFAULT_MAX_STATES,
        })
    }

    /// A session over `alphabet` without homomorphism tables.
    pub fn with_alphabet(alphabet: Alphabet) -> Self {
        Self::new(Definitions::with_alphabet(alphabet)).expect("no tables to validate")
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.reg.alphabet()
    }

    pub fn defs(&self) -> &Definitions {
        self.reg.defs()
    }

    /// Parses, registers every operator used, and normalizes.
    pub fn parse(&mut self, text: &str) -> Result<ExprId> {
        let t = parse_term(text, self.reg.defs())?;
        self.intern(&t)
    }

    /// Registers `op` and every operator its derivatives mention.
    pub fn register(&mut self, op: &Op) -> Result<()> {
        self.reg.register(op)
    }

    /// Normalizes a raw term after registering its operators.
    pub fn intern(&mut self, t: &Term) -> Result<ExprId> {
        let mut ops = Vec::new();
        t.for_each_op(&mut |op, _| ops.push(op.clone()));
        for op in &ops {
            self.reg.register(op)?;
        }
        Ok(self.store.normalize(t))
    }

    pub fn pretty(&self, id: ExprId) -> String {
        pretty(&self.store, id)
    }

    pub fn expr(&self, id: ExprId) -> &Expr {
        self.store.get(id)
    }

    /// True if every operator is linear with a boolean ε-test. Such
    /// expressions compile without semantic hooks.
    pub fn is_tier_a(&self, id: ExprId) -> bool {
        self.store.ops_in(id).iter().all(|op| {
            self.reg.get(op).is_some_and(|d| {
                d.shape == RuleShape::Linear && matches!(d.eps, EpsCapability::BooleanFn(_))
            })
        })
    }

    /// Checks the hypotheses of DFA construction: every operator is linear,
    /// and every hook-tested operator has hook-free boolean-tested arguments.
    /// The error names the first offending operator found.
    pub fn check_compilable(&self, id: ExprId) -> Result<()> {
        let mut stack = vec![id];
        while let Some(id) = stack.pop() {
            match self.store.get(id) {
                Expr::Null | Expr::Eps | Expr::Sym(_) => {}
                Expr::Union(xs) => stack.extend(xs.iter().rev()),
                Expr::Concat(l, r) => stack.extend([*r, *l]),
                Expr::Star(b) => stack.push(*b),
                Expr::Op(op, args) => {
                    let def = self.op_def(op)?;
                    if def.shape != RuleShape::Linear {
                        return Err(Error::Capability {
                            op: op.clone(),
                            reason: "derivative rule is not linear, so the set of derivatives may be infinite".into(),
                        });
                    }
                    match def.eps {
                        EpsCapability::BooleanFn(_) => stack.extend(args.iter().rev()),
                        EpsCapability::SemanticHook(kind) => {
                            if let Some(bad) = args.iter().find(|&&a| !self.is_tier_a(a)) {
                                return Err(Error::Capability {
                                    op: op.clone(),
                                    reason: format!(
                                        "{kind} hook needs hook-free linear arguments, got `{}`",
                                        self.pretty(*bad)
                                    ),
                                });
                            }
                        }
                        EpsCapability::None => {
                            return Err(Error::Capability {
                                op: op.clone(),
                                reason: "no ε-test".into(),
                            })
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn op_def(&self, op: &Op) -> Result<&crate::operators::OperatorDef> {
        self.reg.get(op).ok_or_else(|| Error::Capability {
            op: op.clone(),
            reason: "operator is not registered".into(),
        })
    }

    /// Verifies that every symbol of `w` is in the alphabet.
    pub fn check_word(&self, w: &[Symbol]) -> Result<()> {
        match w.iter().find(|s| !self.alphabet().contains(**s)) {
            Some(s) => Err(Error::SymbolOutsideAlphabet { symbol: s.0 }),
            None => Ok(()),
        }
    }
}
