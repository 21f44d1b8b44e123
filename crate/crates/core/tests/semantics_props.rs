//! Derivatives and ε-tests against brute-force semantics.

mod common;

use common::{arb, defs, words_up_to};
use proptest::prelude::*;
use xderiv_core::operators::{EpsAnswer, EpsCapability};
use xderiv_core::oracle::Oracle;
use xderiv_core::{Op, Session, Symbol, Term};

fn session() -> Session {
    Session::new(defs()).unwrap()
}

fn symbol() -> impl Strategy<Value = Symbol> {
    prop_oneof![Just(Symbol('a')), Just(Symbol('b'))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derivative_is_the_left_quotient(t in arb::linear(4), a in symbol()) {
        let d = defs();
        let oracle = Oracle::new(&d);
        let mut s = session();
        let e = s.intern(&t).unwrap();
        let da = s.derive(a, e).unwrap();
        let want: std::collections::BTreeSet<_> = oracle.slice(&t, 5).quotient(&[a]);
        let got = oracle.slice_expr(&s.store, da, 4).words;
        prop_assert_eq!(got, want, "D({}, {}) = {}", a, s.pretty(e), s.pretty(da));
    }

    #[test]
    fn nullability_matches_empty_word_membership(t in arb::linear(4)) {
        let d = defs();
        let oracle = Oracle::new(&d);
        let mut s = session();
        let e = s.intern(&t).unwrap();
        let n = s.nullable(e).decided().unwrap();
        prop_assert_eq!(n, oracle.member(&t, &[]));
    }

    #[test]
    fn boolean_eps_functions_agree_with_semantics(op in arb::unary_op(), x in arb::linear(3)) {
        let d = defs();
        let oracle = Oracle::new(&d);
        let mut s = session();
        s.register(&op).unwrap();
        let def = s.registry().get(&op).unwrap().clone();
        prop_assert!(matches!(def.eps, EpsCapability::BooleanFn(_)));
        let flag = oracle.member(&x, &[]);
        let EpsAnswer::Value(v) = def.eps_capability(&[flag]) else {
            return Err(TestCaseError::fail("expected a boolean answer"));
        };
        prop_assert_eq!(v, oracle.member(&Term::op(op, vec![x]), &[]));
    }

    #[test]
    fn binary_eps_functions_agree_with_semantics(
        shuffle in any::<bool>(),
        x in arb::linear(3),
        y in arb::linear(3),
    ) {
        let d = defs();
        let oracle = Oracle::new(&d);
        let s = session();
        let op = if shuffle { Op::Shuffle } else { Op::And };
        let def = s.registry().get(&op).unwrap().clone();
        let flags = [oracle.member(&x, &[]), oracle.member(&y, &[])];
        let EpsAnswer::Value(v) = def.eps_capability(&flags) else {
            return Err(TestCaseError::fail("expected a boolean answer"));
        };
        prop_assert_eq!(v, oracle.member(&Term::op(op, vec![x, y]), &[]));
    }

    #[test]
    fn derivative_distributes_over_smart_union(
        r in arb::linear(3),
        t in arb::linear(3),
        a in symbol(),
    ) {
        let mut s = session();
        let (r, t) = (s.intern(&r).unwrap(), s.intern(&t).unwrap());
        let sum = s.store.smart_union(r, t);
        let lhs = s.derive(a, sum).unwrap();
        let (dr, dt) = (s.derive(a, r).unwrap(), s.derive(a, t).unwrap());
        prop_assert_eq!(lhs, s.store.smart_union(dr, dt));
    }

    #[test]
    fn smart_concat_has_the_same_derivative(
        r in arb::linear(3),
        t in arb::linear(3),
        a in symbol(),
    ) {
        let mut s = session();
        let (r, t) = (s.intern(&r).unwrap(), s.intern(&t).unwrap());
        let smart = s.store.smart_concat(r, t);
        let raw = s.store.concat(r, t);
        prop_assert_eq!(s.derive(a, smart).unwrap(), s.derive(a, raw).unwrap());
    }

    #[test]
    fn matching_agrees_with_semantics(t in arb::linear(4)) {
        let d = defs();
        let oracle = Oracle::new(&d);
        let mut s = session();
        let e = s.intern(&t).unwrap();
        let slice = oracle.slice(&t, 5);
        for w in words_up_to(5) {
            prop_assert_eq!(s.matches(e, &w).unwrap(), slice.contains(&w));
        }
    }

    #[test]
    fn approximations_grow_with_the_distance(t in arb::regular(4), k in 0u32..2) {
        let d = defs();
        let oracle = Oracle::new(&d);
        for (small, large) in [
            (Op::Hamming(k), Op::Hamming(k + 1)),
            (Op::Lev(k), Op::Lev(k + 1)),
        ] {
            let a = oracle.slice(&Term::op(small, vec![t.clone()]), 4).words;
            let b = oracle.slice(&Term::op(large, vec![t.clone()]), 4).words;
            prop_assert!(a.is_subset(&b));
        }
        let base = oracle.slice(&t, 4).words;
        let up = oracle.slice(&Term::op(Op::UpClose, vec![t.clone()]), 4).words;
        prop_assert!(base.is_subset(&up));
    }
}

#[test]
fn hook_tested_operators_decide_nullability() {
    let mut s = session();
    let d = defs();
    let oracle = Oracle::new(&d);
    for (text, nullable) in [
        ("xk[2,2](a)", true),
        ("xk[2,2](aa)", false),
        ("xk[1,2](b*)", true),
        ("lev[1](ab)", false),
        ("lev[1](a)", true),
        ("rquot(ab, b)", false),
        ("rquot(ab, ab)", true),
        ("lquot(a+b, b)", true),
        ("lquot(a, b)", false),
        ("prefixes(ab)", true),
        ("prefixes(@0)", false),
    ] {
        let e = s.parse(text).unwrap();
        assert_eq!(s.nullable(e).decided().unwrap(), nullable, "{text}");
        assert_eq!(oracle.slice_expr(&s.store, e, 0).contains(&[]), nullable, "{text}");
    }
}

#[test]
fn nested_hooks_are_undecided() {
    let mut s = session();
    let e = s.parse("xk[1,2](prefixes(ab*))").unwrap();
    assert!(s.nullable(e).as_bool().is_none());
    assert!(s.matches(e, &[]).is_err());
}
