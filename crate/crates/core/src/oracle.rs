//! Brute-force semantics used as ground truth in tests.
//!
//! Membership is decided directly from each operator's set definition by
//! searching factorizations, interleavings, preimages and edit balls. Only
//! the syntax types are shared with the engine; no derivative, ε-test or
//! automaton code is used here.
//!
//! Quotients and prefixes need a witness word. Its length is bounded by an
//! analytic upper bound on the lengths in the relevant argument when that
//! language is finite, and by `2|w| + 8` otherwise. A search that could not
//! be exhaustive marks the result incomplete.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::operators::Op;
use crate::symbol::{Alphabet, Symbol, Word};
use crate::syntax::{Definitions, ExprId, ExprStore, Term};

/// Words of length at most `bound` in a language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub bound: usize,
    pub words: BTreeSet<Word>,
    /// Some witness search was cut short, so `words` may be inexact.
    pub incomplete: bool,
}

impl Slice {
    pub fn contains(&self, w: &[Symbol]) -> bool {
        self.words.contains(w)
    }

    /// Words shortest first, then in alphabet order.
    pub fn sorted(&self) -> Vec<Word> {
        let mut ws: Vec<Word> = self.words.iter().cloned().collect();
        ws.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        ws
    }

    /// `{ v : u·v ∈ self, |v| ≤ bound − |u| }`.
    pub fn quotient(&self, u: &[Symbol]) -> BTreeSet<Word> {
        self.words
            .iter()
            .filter(|w| w.starts_with(u))
            .map(|w| w[u.len()..].to_vec())
            .collect()
    }
}

/// Upper bound on the lengths of words in a language.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthBound {
    Empty,
    Finite(usize),
    Unbounded,
}

impl LengthBound {
    fn map(self, f: impl FnOnce(usize) -> usize) -> Self {
        match self {
            LengthBound::Finite(m) => LengthBound::Finite(f(m)),
            other => other,
        }
    }

    fn plus(self, other: Self) -> Self {
        use LengthBound::*;
        match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Unbounded,
        }
    }

    fn max(self, other: Self) -> Self {
        use LengthBound::*;
        match (self, other) {
            (Empty, x) | (x, Empty) => x,
            (Finite(a), Finite(b)) => Finite(a.max(b)),
            _ => Unbounded,
        }
    }

    fn finite(self) -> Option<usize> {
        match self {
            LengthBound::Empty => Some(0),
            LengthBound::Finite(m) => Some(m),
            LengthBound::Unbounded => None,
        }
    }
}

/// Brute-force evaluator over a fixed alphabet and set of tables.
#[derive(Clone, Debug)]
pub struct Oracle<'d> {
    defs: &'d Definitions,
    /// Most candidate witnesses a single quotient search may try.
    pub witness_budget: usize,
}

impl<'d> Oracle<'d> {
    pub fn new(defs: &'d Definitions) -> Self {
        Oracle {
            defs,
            witness_budget: 20_000,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.defs.alphabet
    }

    /// All words of length at most `n` in `L(t)`.
    pub fn slice(&self, t: &Term, n: usize) -> Slice {
        let mut run = Run::new(self);
        let words = self
            .defs
            .alphabet
            .words_up_to(n)
            .into_iter()
            .filter(|w| run.member(t, w))
            .collect();
        Slice {
            bound: n,
            words,
            incomplete: run.incomplete,
        }
    }

    /// Slice of a canonical expression, read back as a term.
    pub fn slice_expr(&self, store: &ExprStore, id: ExprId, n: usize) -> Slice {
        self.slice(&store.to_term(id), n)
    }

    /// `w ∈ L(t)`.
    pub fn member(&self, t: &Term, w: &[Symbol]) -> bool {
        Run::new(self).member(t, w)
    }

    /// `w ∈ L(t)` together with the incompleteness flag of the search.
    pub fn member_checked(&self, t: &Term, w: &[Symbol]) -> (bool, bool) {
        let mut run = Run::new(self);
        let b = run.member(t, w);
        (b, run.incomplete)
    }
}

/// Upper bound on word lengths in `L(t)`. Sound but not tight.
pub fn length_bound(t: &Term, defs: &Definitions) -> LengthBound {
    use LengthBound::*;
    let b = |t: &Term| length_bound(t, defs);
    match t {
        Term::Null => Empty,
        Term::Eps => Finite(0),
        Term::Sym(_) => Finite(1),
        Term::Union(l, r) => b(l).max(b(r)),
        Term::Concat(l, r) => b(l).plus(b(r)),
        Term::Star(x) => match b(x) {
            Empty | Finite(0) => Finite(0),
            _ => Unbounded,
        },
        Term::Op(op, args) => {
            let a0 = b(&args[0]);
            match op {
                Op::And => {
                    let a1 = b(&args[1]);
                    match (a0, a1) {
                        (Empty, _) | (_, Empty) => Empty,
                        (Finite(x), Finite(y)) => Finite(x.min(y)),
                        (Finite(x), _) | (_, Finite(x)) => Finite(x),
                        _ => Unbounded,
                    }
                }
                Op::Not => Unbounded,
                Op::Shuffle => a0.plus(b(&args[1])),
                Op::ShClose => match a0 {
                    Empty | Finite(0) => Finite(0),
                    _ => Unbounded,
                },
                Op::Hom(h) => {
                    let k = defs.hom(h).map_or(0, |t| t.max_image_len());
                    a0.map(|m| m * k)
                }
                Op::Hinv(h) => match defs.hom(h) {
                    Some(t) if t.is_erasing() && a0 != Empty => Unbounded,
                    _ => a0,
                },
                Op::Xk { .. } | Op::Hamming(_) | Op::Bar | Op::Id | Op::Prefixes => a0,
                Op::Lev(k) => a0.map(|m| m + *k as usize),
                Op::Tilde => a0.max(Finite(0)),
                Op::UpClose => match a0 {
                    Empty => Empty,
                    _ => Unbounded,
                },
                Op::LQuot => match a0 {
                    Empty => Empty,
                    _ => b(&args[1]),
                },
                Op::RQuot => match b(&args[1]) {
                    Empty => Empty,
                    _ => a0,
                },
            }
        }
    }
}

/// One evaluation with a membership memo keyed by subterm address.
struct Run<'o, 'd> {
    oracle: &'o Oracle<'d>,
    memo: HashMap<(usize, Word), bool>,
    bounds: HashMap<usize, LengthBound>,
    incomplete: bool,
}

impl<'o, 'd> Run<'o, 'd> {
    fn new(oracle: &'o Oracle<'d>) -> Self {
        Run {
            oracle,
            memo: HashMap::new(),
            bounds: HashMap::new(),
            incomplete: false,
        }
    }

    fn sigma(&self) -> &'d [Symbol] {
        self.oracle.defs.alphabet.symbols()
    }

    fn bound(&mut self, t: &Term) -> LengthBound {
        let key = t as *const Term as usize;
        if let Some(&b) = self.bounds.get(&key) {
            return b;
        }
        let b = length_bound(t, self.oracle.defs);
        self.bounds.insert(key, b);
        b
    }

    fn member(&mut self, t: &Term, w: &[Symbol]) -> bool {
        let key = (t as *const Term as usize, w.to_vec());
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let b = self.member_uncached(t, w);
        self.memo.insert(key, b);
        b
    }

    fn member_uncached(&mut self, t: &Term, w: &[Symbol]) -> bool {
        match t {
            Term::Null => false,
            Term::Eps => w.is_empty(),
            Term::Sym(s) => w.len() == 1 && w[0] == *s,
            Term::Union(l, r) => self.member(l, w) || self.member(r, w),
            Term::Concat(l, r) => (0..=w.len()).any(|i| self.member(l, &w[..i]) && self.member(r, &w[i..])),
            Term::Star(x) => {
                let mut ok = vec![false; w.len() + 1];
                ok[0] = true;
                for j in 1..=w.len() {
                    ok[j] = (0..j).any(|i| ok[i] && self.member(x, &w[i..j]));
                }
                ok[w.len()]
            }
            Term::Op(op, args) => self.member_op(op, args, w),
        }
    }

    fn member_op(&mut self, op: &Op, args: &[Term], w: &[Symbol]) -> bool {
        let l = &args[0];
        match op {
            Op::And => self.member(l, w) && self.member(&args[1], w),
            Op::Not => !self.member(l, w),
            Op::Shuffle => {
                // enumerate only the positions of the side with the smaller
                // finite length bound
                let r = &args[1];
                let (b1, b2) = (self.bound_of(l), self.bound_of(r));
                let left_small = match (b1, b2) {
                    (Some(x), Some(y)) => x <= y,
                    (b1, _) => b1.is_some(),
                };
                let (small, large, bound) = if left_small { (l, r, b1) } else { (r, l, b2) };
                masks_up_to(w.len(), bound.unwrap_or(w.len())).into_iter().any(|m| {
                    let (sub, rest) = split_mask(w, m);
                    self.member(small, &sub) && self.member(large, &rest)
                })
            }
            Op::ShClose => self.shclose_member(l, w),
            Op::Hom(h) => {
                let table = self.oracle.defs.hom(h).expect("table exists").clone();
                if table.is_erasing() {
                    self.incomplete = true;
                }
                let mut pre = Vec::new();
                preimages(&table, w, &mut Vec::new(), &mut pre);
                pre.iter().any(|u| self.member(l, u))
            }
            Op::Hinv(h) => {
                let image = self.oracle.defs.hom(h).expect("table exists").apply(w);
                self.member(l, &image)
            }
            Op::Xk { i, k } => self.xk_member(l, *i as usize, *k as usize, w),
            Op::Hamming(k) => {
                let ball = hamming_ball(w, *k as usize, self.sigma());
                ball.iter().any(|u| self.member(l, u))
            }
            Op::Lev(k) => {
                let ball = edit_ball(w, *k as usize, self.sigma());
                ball.iter().any(|u| self.member(l, u))
            }
            Op::Tilde => w.is_empty() || self.member(l, w),
            Op::Bar => !w.is_empty() && self.member(l, w),
            Op::UpClose => {
                let most = self.bound_of(l).unwrap_or(w.len());
                let subs: HashSet<Word> =
                    masks_up_to(w.len(), most).into_iter().map(|m| split_mask(w, m).0).collect();
                subs.iter().any(|u| self.member(l, u))
            }
            Op::Id => self.member(l, w),
            Op::LQuot => {
                // ∃u ∈ U. u·w ∈ W
                let (u_term, w_term) = (l, &args[1]);
                let mu = self.bound_of(u_term);
                let mw = self.bound_of(w_term);
                if mw.is_some_and(|m| m < w.len()) {
                    return false;
                }
                let limit = min_bound(&[mu, mw.map(|m| m - w.len())]);
                self.search(limit, w.len(), |run, u| {
                    let mut uw = u.to_vec();
                    uw.extend_from_slice(w);
                    run.member(u_term, u) && run.member(w_term, &uw)
                })
            }
            Op::RQuot => {
                // ∃u ∈ L₂. w·u ∈ L₁
                let (l1, l2) = (l, &args[1]);
                let m1 = self.bound_of(l1);
                let m2 = self.bound_of(l2);
                if m1.is_some_and(|m| m < w.len()) {
                    return false;
                }
                let limit = min_bound(&[m2, m1.map(|m| m - w.len())]);
                self.search(limit, w.len(), |run, u| {
                    let mut wu = w.to_vec();
                    wu.extend_from_slice(u);
                    run.member(l2, u) && run.member(l1, &wu)
                })
            }
            Op::Prefixes => {
                let m = self.bound_of(l);
                if m.is_some_and(|m| m < w.len()) {
                    return false;
                }
                let limit = m.map(|m| m - w.len());
                self.search(limit, w.len(), |run, u| {
                    let mut wu = w.to_vec();
                    wu.extend_from_slice(u);
                    run.member(l, &wu)
                })
            }
        }
    }

    /// Membership in `L^‖`: pick the factor holding the first position,
    /// then the rest must again be in `L^‖`.
    fn shclose_member(&mut self, l: &Term, w: &[Symbol]) -> bool {
        if w.is_empty() {
            return true;
        }
        // memoize under the address of the argument, tagged to stay apart
        // from plain membership in `l`
        let key = (l as *const Term as usize ^ usize::MAX, w.to_vec());
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let mut found = false;
        for m in (1u32..1 << w.len()).filter(|m| m & 1 == 1) {
            let (sub, rest) = split_mask(w, m);
            if self.member(l, &sub) && self.shclose_member(l, &rest) {
                found = true;
                break;
            }
        }
        self.memo.insert(key, found);
        found
    }

    /// Finite length bound of a term's language, `None` if unbounded.
    fn bound_of(&mut self, t: &Term) -> Option<usize> {
        self.bound(t).finite()
    }

    /// Tries every candidate witness of length at most `limit`. Without a
    /// finite limit the search falls back to `2n + 8` and is flagged; a
    /// limit shrunk to fit the budget is flagged too.
    fn search(
        &mut self,
        limit: Option<usize>,
        n: usize,
        mut test: impl FnMut(&mut Self, &[Symbol]) -> bool,
    ) -> bool {
        let limit = limit.unwrap_or_else(|| {
            self.incomplete = true;
            2 * n + 8
        });
        let k = self.sigma().len();
        let mut capped = limit;
        while capped > 0 && count_words(k, capped) > self.oracle.witness_budget {
            capped -= 1;
        }
        if capped < limit {
            self.incomplete = true;
        }
        for u in self.oracle.defs.alphabet.words_up_to(capped) {
            if test(self, &u) {
                return true;
            }
        }
        false
    }

    fn xk_member(&mut self, l: &Term, i: usize, k: usize, w: &[Symbol]) -> bool {
        let sigma = self.sigma();
        if w.is_empty() {
            return self
                .oracle
                .defs
                .alphabet
                .words_up_to(i - 1)
                .iter()
                .any(|u| self.member(l, u));
        }
        let m = w.len();
        let longest = self.bound_of(l).unwrap_or(usize::MAX);
        // positions i, i+k, …, i+(m−1)k (1-based) carry w; length n keeps
        // exactly m of them
        for n in (i + (m - 1) * k..i + m * k).take_while(|&n| n <= longest) {
            let fixed: HashMap<usize, Symbol> = (0..m).map(|j| (i - 1 + j * k, w[j])).collect();
            let free: Vec<usize> = (0..n).filter(|p| !fixed.contains_key(p)).collect();
            let total = sigma.len().pow(free.len() as u32);
            for code in 0..total {
                let mut u = vec![Symbol('\0'); n];
                for (&p, &s) in &fixed {
                    u[p] = s;
                }
                let mut c = code;
                for &p in &free {
                    u[p] = sigma[c % sigma.len()];
                    c /= sigma.len();
                }
                if self.member(l, &u) {
                    return true;
                }
            }
        }
        false
    }
}

/// The least finite bound, `None` if every bound is infinite.
fn min_bound(bounds: &[Option<usize>]) -> Option<usize> {
    bounds.iter().flatten().min().copied()
}

fn count_words(k: usize, n: usize) -> usize {
    (0..=n).map(|l| k.saturating_pow(l as u32)).fold(0usize, |a, b| a.saturating_add(b))
}

/// Every `n`-bit mask with at most `ones` bits set.
fn masks_up_to(n: usize, ones: usize) -> Vec<u32> {
    if ones >= n {
        return (0u32..1 << n).collect();
    }
    let mut out = vec![0u32];
    for size in 1..=ones {
        // Gosper's hack walks the masks of one popcount in increasing order
        let mut m: u32 = (1 << size) - 1;
        while m < 1 << n {
            out.push(m);
            let c = m & m.wrapping_neg();
            let r = m + c;
            m = (((r ^ m) >> 2) / c) | r;
        }
    }
    out
}

/// The subsequence selected by the bits of `m` and the complementary one.
fn split_mask(w: &[Symbol], m: u32) -> (Word, Word) {
    let mut sub = Vec::new();
    let mut rest = Vec::new();
    for (i, &s) in w.iter().enumerate() {
        if m >> i & 1 == 1 {
            sub.push(s);
        } else {
            rest.push(s);
        }
    }
    (sub, rest)
}

/// All `u` with `h(u) = w`, using only non-erasing images.
fn preimages(h: &crate::syntax::HomTable, w: &[Symbol], acc: &mut Word, out: &mut Vec<Word>) {
    if w.is_empty() {
        out.push(acc.clone());
        return;
    }
    for (b, img) in h.images() {
        if !img.is_empty() && w.starts_with(img) {
            acc.push(b);
            preimages(h, &w[img.len()..], acc, out);
            acc.pop();
        }
    }
}

/// Words of the same length as `w` differing in at most `k` positions.
fn hamming_ball(w: &[Symbol], k: usize, sigma: &[Symbol]) -> BTreeSet<Word> {
    let mut ball = BTreeSet::from([w.to_vec()]);
    for _ in 0..k {
        let mut next = ball.clone();
        for u in &ball {
            for p in 0..u.len() {
                for &s in sigma {
                    let mut v = u.clone();
                    v[p] = s;
                    next.insert(v);
                }
            }
        }
        ball = next;
    }
    ball
}

/// Words within Levenshtein distance `k` of `w`.
fn edit_ball(w: &[Symbol], k: usize, sigma: &[Symbol]) -> BTreeSet<Word> {
    let mut ball = BTreeSet::from([w.to_vec()]);
    for _ in 0..k {
        let mut next = ball.clone();
        for u in &ball {
            for p in 0..=u.len() {
                for &s in sigma {
                    let mut v = u.clone();
                    v.insert(p, s);
                    next.insert(v);
                }
                if p < u.len() {
                    let mut v = u.clone();
                    v.remove(p);
                    next.insert(v);
                    for &s in sigma {
                        let mut v = u.clone();
                        v[p] = s;
                        next.insert(v);
                    }
                }
            }
        }
        ball = next;
    }
    ball
}
