use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use xderiv_core::dspace::DEFAULT_DPLUS_CAP;
use xderiv_core::oracle::Oracle;
use xderiv_core::symbol::word;
use xderiv_core::transducer::build_fst;
use xderiv_core::{Definitions, Op, Session};

fn session() -> Session {
    Session::new(Definitions::default()).unwrap()
}

fn matching(c: &mut Criterion) {
    let input = word(&"ab".repeat(200));
    c.bench_function("match (a+b)*abb, 400 symbols, cold", |b| {
        b.iter(|| {
            let mut s = session();
            let e = s.parse("(a+b)*abb").unwrap();
            black_box(s.matches(e, &input).unwrap())
        })
    });
    c.bench_function("match lev[2](abba)&!(a*), cold", |b| {
        b.iter(|| {
            let mut s = session();
            let e = s.parse("lev[2](abba)&!(a*)").unwrap();
            black_box(s.matches(e, &word("abab")).unwrap())
        })
    });
}

fn compilation(c: &mut Criterion) {
    for text in ["(a+b)*a(a+b)(a+b)(a+b)", "hamming[2]((ab)*)", "upclose(aba)&!(b*a*)"] {
        c.bench_function(&format!("compile {text}"), |b| {
            b.iter(|| {
                let mut s = session();
                let e = s.parse(text).unwrap();
                black_box(s.compile(e, 10_000).unwrap().len())
            })
        });
    }
    c.bench_function("equiv (a+b)* vs (a*b*)*", |b| {
        b.iter(|| {
            let mut s = session();
            let e1 = s.parse("(a+b)*").unwrap();
            let e2 = s.parse("(a*b*)*").unwrap();
            black_box(s.equiv(e1, e2, 1_000_000).unwrap())
        })
    });
}

fn iterated_derivatives(c: &mut Criterion) {
    c.bench_function("dplus_enumerate (ab+ba)*a", |b| {
        b.iter(|| {
            let mut s = session();
            let e = s.parse("(ab+ba)*a").unwrap();
            black_box(s.dplus_enumerate(e, DEFAULT_DPLUS_CAP).unwrap().len())
        })
    });
}

fn transducers(c: &mut Criterion) {
    let mut s = session();
    s.register(&Op::Hamming(2)).unwrap();
    let fst = build_fst(&Op::Hamming(2), s.registry()).unwrap();
    let input = word("abbabaab");
    c.bench_function("transduce hamming[2], 8 symbols", |b| {
        b.iter(|| black_box(fst.transduce(&input, 64, 64).outputs.len()))
    });
}

fn oracle(c: &mut Criterion) {
    let defs = Definitions::default();
    let mut s = Session::new(defs.clone()).unwrap();
    let e = s.parse("shuffle(ab, (ba)*)").unwrap();
    let t = s.store.to_term(e);
    let oracle = Oracle::new(&defs);
    c.bench_function("oracle slice shuffle(ab, (ba)*) at 7", |b| {
        b.iter(|| black_box(oracle.slice(&t, 7).words.len()))
    });
}

criterion_group!(benches, matching, compilation, iterated_derivatives, transducers, oracle);
criterion_main!(benches);
