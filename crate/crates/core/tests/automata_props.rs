//! Derivative automata, equivalence and the iterated-derivative space.

mod common;

use std::collections::BTreeSet;

use common::{arb, defs, words_up_to};
use proptest::prelude::*;
use xderiv_core::dspace::DEFAULT_DPLUS_CAP;
use xderiv_core::oracle::Oracle;
use xderiv_core::{EquivResult, Op, Session, Side, Term, Word};

const MAX_STATES: usize = 10_000;
const MAX_PAIRS: usize = 1_000_000;

fn session() -> Session {
    Session::new(defs()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn automaton_accepts_the_language(t in arb::linear(3)) {
        let d = defs();
        let oracle = Oracle::new(&d);
        let mut s = session();
        let e = s.intern(&t).unwrap();
        let dfa = s.compile(e, MAX_STATES).unwrap();
        let got: BTreeSet<Word> = dfa.accepted_words(5).into_iter().collect();
        prop_assert_eq!(got, oracle.slice(&t, 5).words);
    }

    #[test]
    fn minimization_preserves_the_language(t in arb::linear(3)) {
        let mut s = session();
        let e = s.intern(&t).unwrap();
        let dfa = s.compile(e, MAX_STATES).unwrap();
        let min = dfa.minimize();
        prop_assert!(min.len() <= dfa.len());
        prop_assert_eq!(min.minimize().len(), min.len());
        for w in words_up_to(6) {
            prop_assert_eq!(min.run(&w).unwrap(), dfa.run(&w).unwrap());
        }
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric(x in arb::linear(3), y in arb::linear(3)) {
        let mut s = session();
        let (e1, e2) = (s.intern(&x).unwrap(), s.intern(&y).unwrap());
        prop_assert_eq!(s.equiv(e1, e1, MAX_PAIRS).unwrap(), EquivResult::Equivalent);
        let there = s.equiv(e1, e2, MAX_PAIRS).unwrap();
        let back = s.equiv(e2, e1, MAX_PAIRS).unwrap();
        match (there, back) {
            (EquivResult::Equivalent, EquivResult::Equivalent) => {}
            (
                EquivResult::Counterexample { word: w1, side: s1 },
                EquivResult::Counterexample { word: w2, side: s2 },
            ) => {
                prop_assert_eq!(w1, w2);
                prop_assert_ne!(s1, s2);
            }
            (a, b) => prop_assert!(false, "asymmetric: {:?} / {:?}", a, b),
        }
    }

    #[test]
    fn counterexamples_are_shortest_and_sided(x in arb::linear(3), y in arb::linear(3)) {
        let d = defs();
        let oracle = Oracle::new(&d);
        let mut s = session();
        let (e1, e2) = (s.intern(&x).unwrap(), s.intern(&y).unwrap());
        match s.equiv(e1, e2, MAX_PAIRS).unwrap() {
            EquivResult::Equivalent => {
                prop_assert_eq!(oracle.slice(&x, 5).words, oracle.slice(&y, 5).words);
            }
            EquivResult::Counterexample { word, side } => {
                let (in1, in2) = (oracle.member(&x, &word), oracle.member(&y, &word));
                prop_assert_ne!(in1, in2);
                prop_assert_eq!(side == Side::First, in1);
                // nothing shorter separates them
                for w in words_up_to(word.len()).into_iter().filter(|w| w.len() < word.len()) {
                    prop_assert_eq!(oracle.member(&x, &w), oracle.member(&y, &w));
                }
            }
        }
    }

    #[test]
    fn double_complement_is_the_identity(t in arb::linear(3)) {
        let mut s = session();
        let e = s.intern(&t).unwrap();
        let nn = s.intern(&Term::op(Op::Not, vec![Term::op(Op::Not, vec![t.clone()])])).unwrap();
        prop_assert_eq!(s.equiv(e, nn, MAX_PAIRS).unwrap(), EquivResult::Equivalent);
    }

    #[test]
    fn zero_distance_hamming_is_the_identity(t in arb::linear(3)) {
        let mut s = session();
        let e = s.intern(&t).unwrap();
        let h = s.intern(&Term::op(Op::Hamming(0), vec![t.clone()])).unwrap();
        prop_assert_eq!(s.equiv(e, h, MAX_PAIRS).unwrap(), EquivResult::Equivalent);
    }

    #[test]
    fn iterated_derivatives_lie_in_dplus(t in arb::regular(3)) {
        let mut s = session();
        let r = s.intern(&t).unwrap();
        for w in words_up_to(4).into_iter().filter(|w| !w.is_empty()) {
            let dw = s.derive_word(&w, r).unwrap();
            prop_assert!(s.dplus_contains(dw, r).unwrap(), "D({:?}, {}) = {}", w, s.pretty(r), s.pretty(dw));
        }
    }

    #[test]
    fn linear_derivatives_lie_in_dplus(t in arb::linear(2)) {
        let mut s = session();
        let r = s.intern(&t).unwrap();
        for w in words_up_to(3).into_iter().filter(|w| !w.is_empty()) {
            let dw = s.derive_word(&w, r).unwrap();
            prop_assert!(s.dplus_contains(dw, r).unwrap(), "D({:?}, {}) = {}", w, s.pretty(r), s.pretty(dw));
        }
    }

    #[test]
    fn dplus_membership_matches_enumeration(t in arb::regular(3)) {
        let mut s = session();
        let r = s.intern(&t).unwrap();
        prop_assume!(s.store.size(r) <= 6);
        let set = s.dplus_enumerate(r, DEFAULT_DPLUS_CAP).unwrap();
        for &x in &set {
            prop_assert!(s.dplus_contains(x, r).unwrap());
        }
        // every derivative of an element is again an element
        for &x in &set {
            for a in s.alphabet().symbols().to_vec() {
                let dx = s.derive(a, x).unwrap();
                prop_assert!(set.contains(&dx));
            }
        }
    }

    #[test]
    fn automaton_states_are_iterated_derivatives(t in arb::regular(4)) {
        let mut s = session();
        let r = s.intern(&t).unwrap();
        let dfa = s.compile(r, MAX_STATES).unwrap();
        for &q in &dfa.states {
            prop_assert!(s.dstar_contains(q, r).unwrap());
        }
    }
}

#[test]
fn shortest_accepted_agrees_with_enumeration() {
    let mut s = session();
    for text in ["(a+b)*abb", "a&b", "xk[1,2](bb)", "!(a*)", "hamming[1](aaa)"] {
        let e = s.parse(text).unwrap();
        let dfa = s.compile(e, MAX_STATES).unwrap();
        let first = dfa.accepted_words(8).into_iter().next();
        assert_eq!(dfa.shortest_accepted(), first, "{text}");
    }
}
