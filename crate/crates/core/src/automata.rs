//! Derivative automata: states are canonical derivatives, transitions are
//! derivatives by single symbols.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::session::Session;
use crate::symbol::{Symbol, Word};
use crate::syntax::{pretty, ExprId, ExprStore};

/// A total deterministic automaton. State 0 is the start state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub states: Vec<ExprId>,
    pub alphabet: Vec<Symbol>,
    /// `delta[q][i]` is the successor of `q` on `alphabet[i]`.
    pub delta: Vec<Vec<usize>>,
    pub finals: Vec<bool>,
}

/// Which input of an equivalence query accepts the counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivResult {
    Equivalent,
    Counterexample { word: Word, side: Side },
}

impl Dfa {
    pub const START: usize = 0;

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    fn symbol_index(&self, s: Symbol) -> Result<usize> {
        self.alphabet
            .binary_search(&s)
            .map_err(|_| Error::SymbolOutsideAlphabet { symbol: s.0 })
    }

    /// Runs the automaton on `w`.
    pub fn run(&self, w: &[Symbol]) -> Result<bool> {
        let mut q = Self::START;
        for &s in w {
            q = self.delta[q][self.symbol_index(s)?];
        }
        Ok(self.finals[q])
    }

    /// States from which some final state is reachable.
    fn live(&self) -> Vec<bool> {
        let mut preds = vec![Vec::new(); self.len()];
        for (q, row) in self.delta.iter().enumerate() {
            for &p in row {
                preds[p].push(q);
            }
        }
        let mut live = self.finals.clone();
        let mut stack: Vec<usize> = (0..self.len()).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Accepted words of length at most `max_len`, shortest first, then in
    /// alphabet order.
    pub fn accepted_words(&self, max_len: usize) -> Vec<Word> {
        let live = self.live();
        let mut out = Vec::new();
        let mut layer: Vec<(Word, usize)> = Vec::new();
        if live[Self::START] {
            layer.push((Vec::new(), Self::START));
        }
        for len in 0..=max_len {
            for (w, q) in &layer {
                if self.finals[*q] {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, q) in &layer {
                for (i, &s) in self.alphabet.iter().enumerate() {
                    let p = self.delta[*q][i];
                    if live[p] {
                        let mut w2 = w.clone();
                        w2.push(s);
                        next.push((w2, p));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// A shortest accepted word, least in alphabet order among those.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let mut parent: Vec<Option<(usize, Symbol)>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([Self::START]);
        seen[Self::START] = true;
        while let Some(q) = queue.pop_front() {
            if self.finals[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, s)) = parent[cur] {
                    w.push(s);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for (i, &s) in self.alphabet.iter().enumerate() {
                let p = self.delta[q][i];
                if !seen[p] {
                    seen[p] = true;
                    parent[p] = Some((q, s));
                    queue.push_back(p);
                }
            }
        }
        None
    }

    /// Hopcroft minimization. Each block is represented by its member with
    /// the lowest original index; blocks are renumbered in breadth-first
    /// order from the start state.
    pub fn minimize(&self) -> Dfa {
        let n = self.len();
        let k = self.alphabet.len();
        let mut inverse: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; k];
        for q in 0..n {
            for (i, &p) in self.delta[q].iter().enumerate() {
                inverse[i][p].push(q);
            }
        }
        let (fin, non): (Vec<usize>, Vec<usize>) = (0..n).partition(|&q| self.finals[q]);
        let mut blocks: Vec<Vec<usize>> = [fin, non].into_iter().filter(|b| !b.is_empty()).collect();
        let mut block_of = vec![0usize; n];
        for (b, members) in blocks.iter().enumerate() {
            for &q in members {
                block_of[q] = b;
            }
        }
        let mut work: Vec<usize> = (0..blocks.len()).collect();
        while let Some(splitter) = work.pop() {
            let targets = blocks[splitter].clone();
            for inv in &inverse {
                let mut hit: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for &t in &targets {
                    for &q in &inv[t] {
                        hit.entry(block_of[q]).or_default().push(q);
                    }
                }
                for (b, mut xs) in hit {
                    xs.sort_unstable();
                    xs.dedup();
                    if xs.len() == blocks[b].len() {
                        continue;
                    }
                    let rest: Vec<usize> = blocks[b]
                        .iter()
                        .copied()
                        .filter(|q| xs.binary_search(q).is_err())
                        .collect();
                    let nb = blocks.len();
                    for &q in &xs {
                        block_of[q] = nb;
                    }
                    blocks[b] = rest;
                    blocks.push(xs);
                    if work.contains(&b) {
                        work.push(nb);
                    } else if blocks[b].len() <= blocks[nb].len() {
                        work.push(b);
                    } else {
                        work.push(nb);
                    }
                }
            }
        }
        // renumber blocks breadth-first from the start block
        let mut order = vec![usize::MAX; blocks.len()];
        let mut reps = Vec::new();
        let mut queue = VecDeque::from([block_of[Self::START]]);
        order[block_of[Self::START]] = 0;
        while let Some(b) = queue.pop_front() {
            reps.push(b);
            let q = *blocks[b].iter().min().expect("blocks are nonempty");
            for &p in &self.delta[q] {
                let pb = block_of[p];
                if order[pb] == usize::MAX {
                    order[pb] = order.iter().filter(|&&o| o != usize::MAX).count();
                    queue.push_back(pb);
                }
            }
        }
        let mut states = Vec::with_capacity(reps.len());
        let mut delta = Vec::with_capacity(reps.len());
        let mut finals = Vec::with_capacity(reps.len());
        for &b in &reps {
            let q = *blocks[b].iter().min().expect("blocks are nonempty");
            states.push(self.states[q]);
            delta.push(self.delta[q].iter().map(|&p| order[block_of[p]]).collect());
            finals.push(self.finals[q]);
        }
        Dfa {
            states,
            alphabet: self.alphabet.clone(),
            delta,
            finals,
        }
    }

    /// Graphviz rendering with pretty-printed state labels.
    pub fn to_dot(&self, store: &ExprStore) -> String {
        let mut out = String::new();
        out.push_str("digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n");
        out.push_str("  start [shape=point, label=\"\"];\n  start -> q0;\n");
        for (q, &id) in self.states.iter().enumerate() {
            let shape = if self.finals[q] { "doublecircle" } else { "circle" };
            let label = escape(&pretty(store, id));
            let _ = writeln!(out, "  q{q} [label=\"{label}\", shape={shape}];");
        }
        for (q, row) in self.delta.iter().enumerate() {
            let mut by_target: Vec<(usize, Vec<Symbol>)> = Vec::new();
            for (i, &p) in row.iter().enumerate() {
                match by_target.iter_mut().find(|(t, _)| *t == p) {
                    Some((_, syms)) => syms.push(self.alphabet[i]),
                    None => by_target.push((p, vec![self.alphabet[i]])),
                }
            }
            for (p, syms) in by_target {
                let label: Vec<String> = syms.iter().map(|s| s.to_string()).collect();
                let _ = writeln!(out, "  q{q} -> q{p} [label=\"{}\"];", escape(&label.join(",")));
            }
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Session {
    /// Builds the derivative automaton of `e`: a FIFO worklist over
    /// canonical derivatives with symbols in alphabet order.
    pub fn compile(&mut self, e: ExprId, max_states: usize) -> Result<Dfa> {
        self.check_compilable(e)?;
        let alphabet = self.alphabet().symbols().to_vec();
        let mut states = vec![e];
        let mut index: HashMap<ExprId, usize> = HashMap::from([(e, 0)]);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut next = 0;
        if max_states == 0 {
            return Err(Error::StateCapExceeded(0));
        }
        while next < states.len() {
            let q = states[next];
            let mut row = Vec::with_capacity(alphabet.len());
            for &a in &alphabet {
                let d = self.derive(a, q)?;
                let target = match index.get(&d) {
                    Some(&t) => t,
                    None => {
                        if states.len() == max_states {
                            return Err(Error::StateCapExceeded(max_states));
                        }
                        states.push(d);
                        index.insert(d, states.len() - 1);
                        states.len() - 1
                    }
                };
                row.push(target);
            }
            delta.push(row);
            next += 1;
        }
        let mut finals = Vec::with_capacity(states.len());
        for &q in &states {
            finals.push(self.nullable(q).decided()?);
        }
        Ok(Dfa {
            states,
            alphabet,
            delta,
            finals,
        })
    }

    /// Length of a shortest word in `L(e)`, or `None` if the language is
    /// empty. Used by the semantic ε-hooks.
    pub fn shortest_accepted_len(&mut self, e: ExprId) -> Result<Option<usize>> {
        if let Some(&s) = self.shortest_memo.get(&e) {
            return Ok(s);
        }
        let dfa = self.compile(e, self.hook_max_states)?;
        let s = dfa.shortest_accepted().map(|w| w.len());
        self.shortest_memo.insert(e, s);
        Ok(s)
    }

    /// Breadth-first bisimulation over pairs of derivatives. A reported
    /// counterexample is shortest and least in alphabet order.
    pub fn equiv(&mut self, e1: ExprId, e2: ExprId, max_pairs: usize) -> Result<EquivResult> {
        self.check_compilable(e1)?;
        self.check_compilable(e2)?;
        let alphabet = self.alphabet().symbols().to_vec();
        let mut pairs: Vec<(ExprId, ExprId)> = vec![(e1, e2)];
        let mut parent: Vec<Option<(usize, Symbol)>> = vec![None];
        let mut seen: HashMap<(ExprId, ExprId), usize> = HashMap::from([((e1, e2), 0)]);
        let mut next = 0;
        while next < pairs.len() {
            let (p, q) = pairs[next];
            let np = self.nullable(p).decided()?;
            let nq = self.nullable(q).decided()?;
            if np != nq {
                let mut word = Vec::new();
                let mut cur = next;
                while let Some((prev, s)) = parent[cur] {
                    word.push(s);
                    cur = prev;
                }
                word.reverse();
                let side = if np { Side::First } else { Side::Second };
                return Ok(EquivResult::Counterexample { word, side });
            }
            for &a in &alphabet {
                let pair = (self.derive(a, p)?, self.derive(a, q)?);
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(pair) {
                    if pairs.len() == max_pairs {
                        return Err(Error::StateCapExceeded(max_pairs));
                    }
                    slot.insert(pairs.len());
                    pairs.push(pair);
                    parent.push(Some((next, a)));
                }
            }
            next += 1;
        }
        Ok(EquivResult::Equivalent)
    }

    /// Accepted words of length at most `max_len` in length-then-alphabet
    /// order. Compilable expressions go through their automaton; others are
    /// explored by derivatives, pruning only the `@0` derivative.
    pub fn enumerate(&mut self, e: ExprId, max_len: usize) -> Result<Vec<Word>> {
        if self.check_compilable(e).is_ok() {
            return Ok(self.compile(e, crate::session::DEFAULT_MAX_STATES)?.accepted_words(max_len));
        }
        let alphabet = self.alphabet().symbols().to_vec();
        let mut out = Vec::new();
        let mut layer: Vec<(Word, ExprId)> = Vec::new();
        if e != ExprStore::NULL {
            layer.push((Vec::new(), e));
        }
        for len in 0..=max_len {
            for (w, d) in &layer {
                if self.nullable(*d).decided()? {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, d) in &layer {
                for &a in &alphabet {
                    let d2 = self.derive(a, *d)?;
                    if d2 != ExprStore::NULL {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, d2));
                    }
                }
            }
            layer = next;
        }
        Ok(out)
    }
}
