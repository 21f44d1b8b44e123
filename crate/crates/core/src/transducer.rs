//! Rational transducers for unary operators with linear derivative rules
//! and the identity ε-test.
//!
//! A rule term `∖a F(L) ⊇ v · G(∖w L)` becomes the transition
//! `(F, w, a·v, G)`: read `w`, write `a·v`. Every state accepts. Tuples are
//! written `(state, input, output, state)` throughout.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::{self, Write};

use crate::automata::escape;
use crate::error::{Error, Result};
use crate::operators::{DerivativeRule, EpsCapability, Op, Registry, RuleShape};
use crate::symbol::{fmt_word, Word};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: Op,
    pub input: Word,
    pub output: Word,
    pub to: Op,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} --{}/{}--> {}",
            self.from,
            fmt_word(&self.input),
            fmt_word(&self.output),
            self.to
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    /// Breadth-first from the initial state, which comes first.
    pub states: Vec<Op>,
    pub transitions: Vec<Transition>,
}

/// Outputs of one transduction and whether any path was cut by a cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transduction {
    pub outputs: BTreeSet<Word>,
    pub incomplete: bool,
}

impl Transduction {
    /// Outputs shortest first, then in alphabet order.
    pub fn words(&self) -> Vec<Word> {
        let mut ws: Vec<Word> = self.outputs.iter().cloned().collect();
        ws.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        ws
    }
}

fn eligible(reg: &Registry, op: &Op) -> Result<()> {
    let not = |reason: &str| Error::NotTransducible {
        op: op.clone(),
        reason: reason.into(),
    };
    let def = reg.get(op).ok_or_else(|| not("operator is not registered"))?;
    if def.arity != 1 {
        return Err(not("operator is not unary"));
    }
    if def.shape != RuleShape::Linear {
        return Err(not("derivative rule is not linear"));
    }
    match &def.eps {
        EpsCapability::BooleanFn(f) if f.is_identity() => Ok(()),
        _ => Err(not("ε-test is not the identity function")),
    }
}

/// Builds the transducer whose initial state is `op`.
pub fn build_fst(op: &Op, reg: &Registry) -> Result<Transducer> {
    let mut states = vec![op.clone()];
    let mut seen: HashSet<Op> = HashSet::from([op.clone()]);
    let mut queue = VecDeque::from([op.clone()]);
    let mut transitions = BTreeSet::new();
    while let Some(f) = queue.pop_front() {
        eligible(reg, &f)?;
        for &a in reg.alphabet().symbols() {
            let DerivativeRule::Linear(terms) = reg.derivative_rule(&f, a)? else {
                unreachable!("eligibility requires a linear rule")
            };
            for t in terms {
                let mut output = vec![a];
                output.extend_from_slice(&t.prefix);
                transitions.insert(Transition {
                    from: f.clone(),
                    input: t.args[0].word.clone(),
                    output,
                    to: t.target.clone(),
                });
                if seen.insert(t.target.clone()) {
                    states.push(t.target.clone());
                    queue.push_back(t.target);
                }
            }
        }
    }
    Ok(Transducer {
        states,
        transitions: transitions.into_iter().collect(),
    })
}

impl Transducer {
    pub fn initial(&self) -> &Op {
        &self.states[0]
    }

    /// All outputs of paths from the initial state that consume exactly
    /// `input`, take at most `max_steps` transitions and write at most
    /// `max_out` symbols.
    pub fn transduce(&self, input: &[crate::Symbol], max_steps: usize, max_out: usize) -> Transduction {
        let mut outputs = BTreeSet::new();
        let mut incomplete = false;
        let start = (0usize, 0usize, Vec::new());
        let mut seen: HashSet<(usize, usize, Word)> = HashSet::from([start.clone()]);
        let mut layer = vec![start];
        let index = |op: &Op| self.states.iter().position(|s| s == op).expect("state exists");
        for step in 0..=max_steps {
            let mut next = Vec::new();
            for (q, pos, out) in &layer {
                if *pos == input.len() {
                    outputs.insert(out.clone());
                }
                let from = &self.states[*q];
                for t in self.transitions.iter().filter(|t| &t.from == from) {
                    if !input[*pos..].starts_with(&t.input) {
                        continue;
                    }
                    if step == max_steps || out.len() + t.output.len() > max_out {
                        incomplete = true;
                        continue;
                    }
                    let mut out2 = out.clone();
                    out2.extend_from_slice(&t.output);
                    let config = (index(&t.to), pos + t.input.len(), out2);
                    if seen.insert(config.clone()) {
                        next.push(config);
                    }
                }
            }
            layer = next;
        }
        Transduction { outputs, incomplete }
    }

    /// One line per state and transition.
    pub fn summary(&self) -> String {
        let mut out = format!("states: {}\ninitial: {}\n", self.states.len(), self.initial());
        for t in &self.transitions {
            let _ = writeln!(out, "{t}");
        }
        out
    }

    /// Graphviz rendering. Edges read `input/output` with ε as `@e`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph fst {\n  rankdir=LR;\n  node [shape=doublecircle];\n");
        out.push_str("  start [shape=point, label=\"\"];\n  start -> s0;\n");
        for (i, s) in self.states.iter().enumerate() {
            let _ = writeln!(out, "  s{i} [label=\"{}\"];", escape(&s.to_string()));
        }
        let index = |op: &Op| self.states.iter().position(|s| s == op).expect("state exists");
        for t in &self.transitions {
            let _ = writeln!(
                out,
                "  s{} -> s{} [label=\"{}/{}\"];",
                index(&t.from),
                index(&t.to),
                escape(&fmt_word(&t.input)),
                escape(&fmt_word(&t.output))
            );
        }
        out.push_str("}\n");
        out
    }
}
