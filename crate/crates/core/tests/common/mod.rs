//! Seeded random corpora shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xderiv_core::symbol::{Symbol, Word};
use xderiv_core::{Definitions, Op, Term};

/// `H` is non-erasing; `E` erases `a` and is only used under `hinv`.
pub const DEFS: &str = "alphabet: a b\nhom H: a -> ab, b -> b\nhom E: a -> @e, b -> b\n";

pub fn defs() -> Definitions {
    Definitions::parse(DEFS).expect("fixture definitions parse")
}

/// Which constructors a generated term may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    /// Union, concatenation and star only, no star: a finite language.
    Finite,
    /// Union, concatenation and star.
    Regular,
    /// Regular plus linear operators with boolean ε-tests.
    Linear,
    /// Linear plus the linear operators tested through semantic hooks,
    /// whose hook arguments stay in `Linear` (or `Finite` for divisors).
    Compilable,
    /// Compilable plus the general-rule operators `shclose` and `lquot`.
    Full,
}

pub struct Gen {
    rng: ChaCha8Rng,
    /// Inside `xk` or `hinv` the oracle checks words several times longer
    /// than the slice bound, so operators it decides by subset search
    /// (shuffle, upclose, shclose) are left out there.
    stretched: bool,
}

#[derive(Clone, Copy)]
enum Ctor {
    Union,
    Concat,
    Star,
    And,
    Not,
    Shuffle,
    Hom,
    Hinv,
    Hamming,
    Tilde,
    Bar,
    UpClose,
    Id,
    Xk,
    Lev,
    RQuot,
    Prefixes,
    ShClose,
    LQuot,
}

impl Ctor {
    fn is_binary(self) -> bool {
        matches!(
            self,
            Ctor::Union | Ctor::Concat | Ctor::And | Ctor::Shuffle | Ctor::RQuot | Ctor::LQuot
        )
    }
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            stretched: false,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn word(&mut self, max_len: usize) -> Word {
        let len = self.rng.gen_range(0..=max_len);
        (0..len)
            .map(|_| Symbol(if self.rng.gen_bool(0.5) { 'a' } else { 'b' }))
            .collect()
    }

    fn leaf(&mut self) -> Term {
        match self.rng.gen_range(0..20) {
            0..=7 => Term::sym('a'),
            8..=14 => Term::sym('b'),
            15..=17 => Term::Eps,
            _ => Term::Null,
        }
    }

    fn split(&mut self, budget: usize) -> (usize, usize) {
        let left = self.rng.gen_range(1..budget);
        (left, budget - left)
    }

    /// A term with at most `size` nodes.
    pub fn term(&mut self, tier: Tier, size: usize) -> Term {
        if size <= 1 {
            return self.leaf();
        }
        let mut ctors = vec![Ctor::Union, Ctor::Concat, Ctor::Concat];
        if tier != Tier::Finite {
            ctors.push(Ctor::Star);
        }
        if matches!(tier, Tier::Linear | Tier::Compilable | Tier::Full) {
            ctors.extend([
                Ctor::And,
                Ctor::Not,
                Ctor::Shuffle,
                Ctor::Hom,
                Ctor::Hinv,
                Ctor::Hamming,
                Ctor::Tilde,
                Ctor::Bar,
                Ctor::UpClose,
                Ctor::Id,
            ]);
        }
        if matches!(tier, Tier::Compilable | Tier::Full) {
            ctors.extend([Ctor::Xk, Ctor::Lev, Ctor::RQuot, Ctor::Prefixes]);
        }
        if tier == Tier::Full {
            ctors.extend([Ctor::ShClose, Ctor::LQuot]);
        }
        if self.stretched {
            ctors.retain(|c| !matches!(c, Ctor::Shuffle | Ctor::UpClose | Ctor::ShClose));
        }
        let inner = size - 1;
        if inner < 2 {
            ctors.retain(|c| !c.is_binary());
        }
        let Some(&ctor) = ctors.choose(&mut self.rng) else {
            return self.leaf();
        };
        let unary = |g: &mut Gen, op: Op, t: Tier| Term::op(op, vec![g.term(t, inner)]);
        match ctor {
            Ctor::Union => {
                let (l, r) = self.split(inner);
                Term::union(self.term(tier, l), self.term(tier, r))
            }
            Ctor::Concat => {
                let (l, r) = self.split(inner);
                Term::concat(self.term(tier, l), self.term(tier, r))
            }
            Ctor::Star => Term::star(self.term(tier, inner)),
            Ctor::And | Ctor::Shuffle => {
                let (l, r) = self.split(inner);
                let op = if matches!(ctor, Ctor::And) { Op::And } else { Op::Shuffle };
                // keep shuffles small: the oracle enumerates interleavings
                let (l, r) = if matches!(ctor, Ctor::Shuffle) { (l.min(5), r.min(5)) } else { (l, r) };
                Term::op(op, vec![self.term(tier, l), self.term(tier, r)])
            }
            Ctor::Not => unary(self, Op::Not, tier),
            Ctor::Hom => unary(self, Op::Hom("H".into()), tier),
            Ctor::Hinv => {
                let table = if self.rng.gen_bool(0.5) { "H" } else { "E" };
                self.stretched_term(|g| unary(g, Op::Hinv(table.into()), tier))
            }
            Ctor::Hamming => {
                let k = self.rng.gen_range(0..=2);
                unary(self, Op::Hamming(k), tier)
            }
            Ctor::Tilde => unary(self, Op::Tilde, tier),
            Ctor::Bar => unary(self, Op::Bar, tier),
            Ctor::UpClose => unary(self, Op::UpClose, tier),
            Ctor::Id => unary(self, Op::Id, tier),
            Ctor::Xk => {
                let k = self.rng.gen_range(1..=2);
                let i = self.rng.gen_range(1..=k);
                let arg = self.stretched_term(|g| g.term(Tier::Linear, inner.min(6)));
                Term::op(Op::Xk { i, k }, vec![arg])
            }
            Ctor::Lev => {
                let k = self.rng.gen_range(0..=1);
                let arg = self.term(Tier::Linear, inner.min(6));
                Term::op(Op::Lev(k), vec![arg])
            }
            Ctor::RQuot => {
                let (l, r) = self.split(inner);
                let body = self.term(Tier::Linear, l);
                let divisor = self.term(Tier::Finite, r.min(5));
                Term::op(Op::RQuot, vec![body, divisor])
            }
            Ctor::Prefixes => {
                let arg = self.term(Tier::Finite, inner.min(7));
                Term::op(Op::Prefixes, vec![arg])
            }
            Ctor::ShClose => {
                let arg = self.term(Tier::Linear, inner.min(4));
                Term::op(Op::ShClose, vec![arg])
            }
            Ctor::LQuot => {
                let (l, r) = self.split(inner);
                let divisor = self.term(Tier::Finite, l.min(5));
                let body = self.term(Tier::Linear, r);
                Term::op(Op::LQuot, vec![divisor, body])
            }
        }
    }

    fn stretched_term(&mut self, f: impl FnOnce(&mut Gen) -> Term) -> Term {
        let outer = std::mem::replace(&mut self.stretched, true);
        let t = f(self);
        self.stretched = outer;
        t
    }

    /// `count` terms with sizes drawn from `1..=max_size`.
    pub fn corpus(&mut self, tier: Tier, count: usize, max_size: usize) -> Vec<Term> {
        (0..count)
            .map(|_| {
                let size = self.rng.gen_range(1..=max_size);
                self.term(tier, size)
            })
            .collect()
    }
}

/// Words of length at most `n` over `{a, b}`.
pub fn words_up_to(n: usize) -> Vec<Word> {
    defs().alphabet.words_up_to(n)
}

/// Proptest strategies for shrinkable terms.
pub mod arb {
    use proptest::prelude::*;
    use xderiv_core::{Op, Term};

    pub fn leaf() -> impl Strategy<Value = Term> {
        prop_oneof![
            4 => Just(Term::sym('a')),
            4 => Just(Term::sym('b')),
            2 => Just(Term::Eps),
            1 => Just(Term::Null),
        ]
    }

    /// Union, concatenation and star.
    pub fn regular(depth: u32) -> impl Strategy<Value = Term> {
        leaf().prop_recursive(depth, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::union(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::concat(l, r)),
                inner.prop_map(Term::star),
            ]
        })
    }

    /// Unary operators that are linear with a boolean ε-test.
    pub fn unary_op() -> impl Strategy<Value = Op> {
        prop_oneof![
            Just(Op::Not),
            Just(Op::Hom("H".into())),
            Just(Op::Hinv("H".into())),
            Just(Op::Hinv("E".into())),
            (0u32..=2).prop_map(Op::Hamming),
            Just(Op::Tilde),
            Just(Op::Bar),
            Just(Op::UpClose),
            Just(Op::Id),
        ]
    }

    /// Regular constructors plus linear operators with boolean ε-tests.
    pub fn linear(depth: u32) -> impl Strategy<Value = Term> {
        leaf().prop_recursive(depth, 24, 2, |inner| {
            prop_oneof![
                2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::union(l, r)),
                2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::concat(l, r)),
                1 => inner.clone().prop_map(Term::star),
                1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::op(Op::And, vec![l, r])),
                1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::op(Op::Shuffle, vec![l, r])),
                3 => (unary_op(), inner).prop_map(|(op, t)| Term::op(op, vec![t])),
            ]
        })
    }
}
