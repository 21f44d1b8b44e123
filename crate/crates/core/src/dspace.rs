//! The finite over-approximation D⁺(r) of the iterated derivatives of `r`.
//!
//! For regular operators:
//!
//! ```text
//! D⁺(@0) = {@0}    D⁺(@e) = {@0}    D⁺(a) = {@0, @e}
//! D⁺(r+s) = D⁺(r) ⊕ D⁺(s)
//! D⁺(r·s) = D⁺(r) ⊙ s ⊕ ⨁D⁺(s)
//! D⁺(r*)  = ⨁(D⁺(r) ⊙ r*)
//! ```
//!
//! where ⊙ and ⊕ are lifted to sets and ⨁S is the set of finite sums over
//! `S` modulo ACI. An operator head `F(r₁…rₙ)` with linear rules has
//! `D⁺ = ⨁{ v·G(r'…) }` with `v` a suffix of some rule prefix, `G` a
//! registered operator and every `r'` in `⋃ⱼ D*(rⱼ)`.
//!
//! Membership decomposes the summand set of the candidate instead of
//! materializing the sums, which grow exponentially.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::operators::RuleShape;
use crate::session::Session;
use crate::symbol::{Symbol, Word};
use crate::syntax::{Expr, ExprId, ExprStore};

pub const DEFAULT_DPLUS_CAP: usize = 100_000;

/// Largest summand set a membership query decomposes.
const MAX_SUMMANDS: usize = 20;

/// One check of closure under derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCheck {
    /// 1: `D(a, r) ∈ D⁺(r)`; 2: `D(a, t) ∈ D⁺(r)` for a reached `t`.
    pub part: u8,
    pub expr: ExprId,
    pub symbol: Symbol,
    pub derivative: ExprId,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureReport {
    pub checks: Vec<ClosureCheck>,
}

impl ClosureReport {
    pub fn violations(&self) -> impl Iterator<Item = &ClosureCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// One `PASS`/`FAIL <expr> <symbol>` line per check.
    pub fn render(&self, store: &ExprStore) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{verdict} {} {}\n",
                crate::syntax::pretty(store, c.expr),
                c.symbol
            ));
        }
        out
    }
}

impl fmt::Display for ClosureCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "part {}: {} by {} -> {} ({})",
            self.part,
            self.expr,
            self.symbol,
            self.derivative,
            if self.pass { "pass" } else { "fail" }
        )
    }
}

impl Session {
    fn check_dspace_operand(&self, r: ExprId) -> Result<()> {
        for op in self.store.ops_in(r) {
            let def = self.op_def(&op)?;
            if def.shape != RuleShape::Linear {
                return Err(Error::Capability {
                    op,
                    reason: "D⁺ is defined for linear derivative rules only".into(),
                });
            }
        }
        Ok(())
    }

    /// Suffixes of the prefixes `v` of all registered linear rules.
    fn prefix_suffixes(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for v in self.registry().linear_prefixes() {
            for i in 0..=v.len() {
                out.insert(v[i..].to_vec());
            }
        }
        out
    }

    /// Decides `t ∈ D⁺(r)`.
    pub fn dplus_contains(&mut self, t: ExprId, r: ExprId) -> Result<bool> {
        self.check_dspace_operand(r)?;
        let suffixes = self.prefix_suffixes();
        self.contains_rec(t, r, &suffixes)
    }

    /// Decides `t ∈ D*(r) = {r} ∪ D⁺(r)`.
    pub fn dstar_contains(&mut self, t: ExprId, r: ExprId) -> Result<bool> {
        Ok(t == r || self.dplus_contains(t, r)?)
    }

    fn contains_rec(&mut self, t: ExprId, r: ExprId, sfx: &BTreeSet<Word>) -> Result<bool> {
        if t == ExprStore::NULL {
            return Ok(true);
        }
        if let Some(&b) = self.dplus_memo.get(&(t, r)) {
            return Ok(b);
        }
        let ts = self.store.summands(t);
        if ts.len() > MAX_SUMMANDS {
            return Err(Error::CapExceeded(MAX_SUMMANDS));
        }
        let result = match self.store.get(r).clone() {
            Expr::Null | Expr::Eps => false,
            Expr::Sym(_) => t == ExprStore::EPS,
            Expr::Union(xs) => self.union_case(&ts, &xs, sfx)?,
            Expr::Concat(p, s) => self.concat_case(&ts, p, s, sfx)?,
            Expr::Star(p) => {
                let mut ok = true;
                for &x in &ts {
                    let fits = if x == r {
                        self.contains_rec(ExprStore::EPS, p, sfx)?
                    } else {
                        match self.store.get(x).clone() {
                            Expr::Concat(p2, s2) if s2 == r && !is_unit(p2) => {
                                self.contains_rec(p2, p, sfx)?
                            }
                            _ => false,
                        }
                    };
                    if !fits {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            Expr::Op(_, args) => {
                let mut ok = true;
                for &x in &ts {
                    if !self.head_element(x, &args, sfx)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
        };
        self.dplus_memo.insert((t, r), result);
        Ok(result)
    }

    /// `x = v·G(r'…)` with `v` an admissible prefix suffix, `G` linear and
    /// every `r'` in `D*` of some argument.
    fn head_element(&mut self, x: ExprId, args: &[ExprId], sfx: &BTreeSet<Word>) -> Result<bool> {
        let mut v = Vec::new();
        let mut cur = x;
        while let Expr::Concat(l, rest) = self.store.get(cur) {
            let Expr::Sym(c) = self.store.get(*l) else {
                return Ok(false);
            };
            v.push(*c);
            cur = *rest;
        }
        let Expr::Op(g, inner) = self.store.get(cur).clone() else {
            return Ok(false);
        };
        if !sfx.contains(&v) {
            return Ok(false);
        }
        if !self.registry().get(&g).is_some_and(|d| d.shape == RuleShape::Linear) {
            return Ok(false);
        }
        for a in inner {
            let mut found = false;
            for &rj in args {
                if a == rj || self.contains_rec(a, rj, sfx)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Summand subsets of `ts` (as bitmasks) whose sum lies in `D⁺(r)`.
    fn feasible_masks(&mut self, ts: &[ExprId], r: ExprId, sfx: &BTreeSet<Word>) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for m in 0u32..1 << ts.len() {
            let sub: Vec<ExprId> = (0..ts.len()).filter(|i| m >> i & 1 == 1).map(|i| ts[i]).collect();
            let sum = self.store.union_of(sub);
            if self.contains_rec(sum, r, sfx)? {
                out.push(m);
            }
        }
        Ok(out)
    }

    /// `t = t₁ ⊕ … ⊕ tₖ` with `tᵢ ∈ D⁺(xᵢ)`; summands may be shared.
    fn union_case(&mut self, ts: &[ExprId], xs: &[ExprId], sfx: &BTreeSet<Word>) -> Result<bool> {
        let full = (1u32 << ts.len()) - 1;
        let mut reach: HashSet<u32> = HashSet::from([0]);
        for &x in xs {
            let feasible = self.feasible_masks(ts, x, sfx)?;
            let mut next = HashSet::new();
            for &m in &reach {
                for &f in &feasible {
                    next.insert(m | f);
                }
            }
            reach = next;
        }
        Ok(reach.contains(&full))
    }

    /// `t = p'⊙s ⊕ q` with `p' ∈ D⁺(p)` and `q ∈ ⨁D⁺(s)`.
    fn concat_case(&mut self, ts: &[ExprId], p: ExprId, s: ExprId, sfx: &BTreeSet<Word>) -> Result<bool> {
        let t = self.store.union_of(ts.iter().copied());
        if s == ExprStore::NULL {
            return Ok(false); // t ≠ @0 here
        }
        if s == ExprStore::EPS {
            return self.contains_rec(t, p, sfx);
        }
        // summands coverable by sums of elements of D⁺(s)
        let coverable = self
            .feasible_masks(ts, s, sfx)?
            .into_iter()
            .fold(0u32, |acc, m| acc | m);
        let full = (1u32 << ts.len()) - 1;
        let covered_without = |p_mask: u32| (full & !p_mask) & !coverable == 0;

        if covered_without(0) {
            return Ok(true);
        }
        // p' = @e contributes the summands of s
        let s_mask = self
            .store
            .summands(s)
            .iter()
            .map(|x| ts.iter().position(|y| y == x))
            .try_fold(0u32, |acc, i| i.map(|i| acc | 1 << i));
        if let Some(m) = s_mask {
            if covered_without(m) && self.contains_rec(ExprStore::EPS, p, sfx)? {
                return Ok(true);
            }
        }
        // p' ∉ {@0, @e} contributes the single summand p'·s
        for (i, &x) in ts.iter().enumerate() {
            if let Expr::Concat(p2, s2) = self.store.get(x).clone() {
                if s2 == s && !is_unit(p2) && covered_without(1 << i) && self.contains_rec(p2, p, sfx)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Materializes `D⁺(r)` as a sorted list, failing beyond `cap` elements.
    pub fn dplus_enumerate(&mut self, r: ExprId, cap: usize) -> Result<Vec<ExprId>> {
        self.check_dspace_operand(r)?;
        let suffixes = self.prefix_suffixes();
        let mut memo = HashMap::new();
        let set = self.enumerate_rec(r, cap, &suffixes, &mut memo)?;
        let mut out: Vec<ExprId> = set.into_iter().collect();
        out.sort_by(|&a, &b| self.store.cmp(a, b));
        Ok(out)
    }

    fn enumerate_rec(
        &mut self,
        r: ExprId,
        cap: usize,
        sfx: &BTreeSet<Word>,
        memo: &mut HashMap<ExprId, HashSet<ExprId>>,
    ) -> Result<HashSet<ExprId>> {
        if let Some(s) = memo.get(&r) {
            return Ok(s.clone());
        }
        let null = ExprStore::NULL;
        let set: HashSet<ExprId> = match self.store.get(r).clone() {
            Expr::Null | Expr::Eps => HashSet::from([null]),
            Expr::Sym(_) => HashSet::from([null, ExprStore::EPS]),
            Expr::Union(xs) => {
                let mut acc = HashSet::from([null]);
                for x in xs {
                    let dx = self.enumerate_rec(x, cap, sfx, memo)?;
                    acc = self.sum_sets(&acc, &dx, cap)?;
                }
                acc
            }
            Expr::Concat(p, s) => {
                let dp = self.enumerate_rec(p, cap, sfx, memo)?;
                let ds = self.enumerate_rec(s, cap, sfx, memo)?;
                let left: HashSet<ExprId> = dp.iter().map(|&x| self.store.smart_concat(x, s)).collect();
                let sums = self.all_sums(&ds, cap)?;
                self.sum_sets(&left, &sums, cap)?
            }
            Expr::Star(p) => {
                let dp = self.enumerate_rec(p, cap, sfx, memo)?;
                let base: HashSet<ExprId> = dp.iter().map(|&x| self.store.smart_concat(x, r)).collect();
                self.all_sums(&base, cap)?
            }
            Expr::Op(_, args) => {
                let mut pool: BTreeSet<ExprId> = args.iter().copied().collect();
                for &a in &args {
                    pool.extend(self.enumerate_rec(a, cap, sfx, memo)?);
                }
                let pool: Vec<ExprId> = pool.into_iter().collect();
                let heads: Vec<(crate::Op, usize)> = self
                    .registry()
                    .ops()
                    .filter(|d| d.shape == RuleShape::Linear)
                    .map(|d| (d.op.clone(), d.arity))
                    .collect();
                let mut base = HashSet::new();
                for (g, arity) in heads {
                    let mut tuples: Vec<Vec<ExprId>> = vec![Vec::new()];
                    for _ in 0..arity {
                        let mut next = Vec::new();
                        for tuple in &tuples {
                            for &a in &pool {
                                let mut t2 = tuple.clone();
                                t2.push(a);
                                next.push(t2);
                            }
                        }
                        tuples = next;
                        if tuples.len() > cap {
                            return Err(Error::CapExceeded(cap));
                        }
                    }
                    for tuple in tuples {
                        let head = self.store.op(g.clone(), tuple);
                        for v in sfx {
                            base.insert(self.store.word_then(v, head));
                            if base.len() > cap {
                                return Err(Error::CapExceeded(cap));
                            }
                        }
                    }
                }
                self.all_sums(&base, cap)?
            }
        };
        if set.len() > cap {
            return Err(Error::CapExceeded(cap));
        }
        memo.insert(r, set.clone());
        Ok(set)
    }

    fn sum_sets(&mut self, a: &HashSet<ExprId>, b: &HashSet<ExprId>, cap: usize) -> Result<HashSet<ExprId>> {
        let mut out = HashSet::new();
        for &x in a {
            for &y in b {
                out.insert(self.store.smart_union(x, y));
                if out.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
            }
        }
        Ok(out)
    }

    /// `⨁S`: every finite sum of elements of `S`, including `@0`.
    fn all_sums(&mut self, s: &HashSet<ExprId>, cap: usize) -> Result<HashSet<ExprId>> {
        let mut items: Vec<ExprId> = s.iter().copied().collect();
        items.sort_by(|&a, &b| self.store.cmp(a, b));
        let mut out = HashSet::from([ExprStore::NULL]);
        for x in items {
            let grown: Vec<ExprId> = out.iter().map(|&y| self.store.smart_union(x, y)).collect();
            out.extend(grown);
            if out.len() > cap {
                return Err(Error::CapExceeded(cap));
            }
        }
        Ok(out)
    }

    /// Checks both parts of closure under derivation: `D(a, r) ∈ D⁺(r)` for every
    /// symbol, and `D(a, t) ∈ D⁺(r)` for every `t = D(w, r)` with `w` a
    /// nonempty sample word.
    pub fn check_closure(&mut self, r: ExprId, sample: &[Word]) -> Result<ClosureReport> {
        self.check_dspace_operand(r)?;
        let alphabet = self.alphabet().symbols().to_vec();
        let mut report = ClosureReport::default();
        for &a in &alphabet {
            let d = self.derive(a, r)?;
            let pass = self.dplus_contains(d, r)?;
            report.checks.push(ClosureCheck { part: 1, expr: r, symbol: a, derivative: d, pass });
        }
        let mut reached = Vec::new();
        let mut seen = HashSet::new();
        for w in sample.iter().filter(|w| !w.is_empty()) {
            let t = self.derive_word(w, r)?;
            if seen.insert(t) {
                reached.push(t);
            }
        }
        for t in reached {
            for &a in &alphabet {
                let d = self.derive(a, t)?;
                let pass = self.dplus_contains(d, r)?;
                report.checks.push(ClosureCheck { part: 2, expr: t, symbol: a, derivative: d, pass });
            }
        }
        Ok(report)
    }
}

fn is_unit(id: ExprId) -> bool {
    id == ExprStore::NULL || id == ExprStore::EPS
}

/// Renders a D⁺ listing, one element per line.
pub fn render_set(store: &ExprStore, set: &[ExprId]) -> String {
    set.iter()
        .map(|&x| crate::syntax::pretty(store, x) + "\n")
        .collect()
}
