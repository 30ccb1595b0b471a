//! Randomized property suites, shared by the `properties` test target and the
//! acceptance runner. Each suite returns the number of cases run.
#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use scatterlab::linpoly::{Binomial, LinearizedPoly};
use scatterlab::mvpoly::MvPoly;
use scatterlab::scatter::is_scattered_bruteforce;
use scatterlab::{make_field, FieldCtx, FqnElem};

pub type Suite = fn(u32) -> Result<u32, String>;

pub const SUITES: &[(&str, Suite)] = &[
    ("field axioms", field_axioms),
    ("norm and trace", norm_trace),
    ("adjoint identity and involution", adjoint_identity),
    ("adjoint invariance of scatteredness", adjoint_invariance),
    ("multiplicity axioms", multiplicity_axioms),
];

fn runner(cases: u32) -> TestRunner {
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn fields(shapes: &[(u64, u32, u32)]) -> Vec<Arc<FieldCtx>> {
    shapes.iter().map(|&(p, e, n)| make_field(p, e, n).unwrap()).collect()
}

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<u32, String> {
    runner(cases).run(&s, f).map(|_| cases).map_err(|e| e.to_string())
}

fn el(k: &FieldCtx, c: u64) -> FqnElem {
    k.elem_unchecked(c % k.size())
}

pub fn field_axioms(cases: u32) -> Result<u32, String> {
    // includes fields above the table limit, exercising the table-free paths
    let ks = fields(&[(2, 1, 8), (3, 1, 5), (2, 2, 3), (5, 1, 4), (7, 2, 2), (2, 1, 30), (3, 2, 10), (13, 1, 3)]);
    let s = (0..ks.len(), any::<u64>(), any::<u64>(), any::<u64>(), 0i64..12);
    run(cases, s, |(fi, a, b, c, k)| {
        let f = &ks[fi];
        let (a, b, c) = (el(f, a), el(f, b), el(f, c));
        prop_assert!(f.add(a, b) == f.add(b, a), "add commutes");
        prop_assert!(f.mul(a, b) == f.mul(b, a), "mul commutes");
        prop_assert!(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), "mul associates");
        prop_assert!(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)), "add associates");
        prop_assert!(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)), "distributive");
        prop_assert!(f.add(a, f.neg(a)).is_zero() && f.sub(a, b) == f.add(a, f.neg(b)), "negation");
        if !a.is_zero() {
            prop_assert!(f.mul(a, f.inv(a).unwrap()) == FqnElem::ONE, "inverse");
            prop_assert!(f.pow(a, f.size() as u128 - 1) == FqnElem::ONE, "Lagrange");
        }
        prop_assert!(f.frobenius(f.mul(a, b), k) == f.mul(f.frobenius(a, k), f.frobenius(b, k)), "frobenius multiplicative");
        prop_assert!(f.frobenius(f.add(a, b), k) == f.add(f.frobenius(a, k), f.frobenius(b, k)), "frobenius additive");
        prop_assert!(f.frobenius(f.frobenius(a, k), -k) == a, "frobenius inverse");
        prop_assert!(f.parse_elem(&f.format_elem(a)).unwrap() == a, "text round trip");
        Ok(())
    })
}

pub fn norm_trace(cases: u32) -> Result<u32, String> {
    let ks = fields(&[(2, 1, 6), (3, 1, 6), (2, 2, 4), (5, 1, 4), (3, 1, 8), (2, 1, 12)]);
    let s = (0..ks.len(), any::<u64>(), any::<u64>(), any::<u64>(), any::<u32>());
    run(cases, s, |(fi, a, b, r, mi)| {
        let f = &ks[fi];
        let n = f.n();
        let divs: Vec<u32> = (1..=n).filter(|m| n % m == 0).collect();
        let m = divs[mi as usize % divs.len()];
        let (a, b) = (el(f, a), el(f, b));
        let c = f.trace(el(f, r), m).unwrap();
        let nm = |x| f.norm(x, m).unwrap();
        let tr = |x| f.trace(x, m).unwrap();
        prop_assert!(nm(f.mul(a, b)) == f.mul(nm(a), nm(b)), "norm multiplicative");
        prop_assert!(tr(f.add(a, b)) == f.add(tr(a), tr(b)), "trace additive");
        prop_assert!(tr(f.mul(c, a)) == f.mul(c, tr(a)), "trace F_{{q^m}}-linear");
        prop_assert!(f.in_subfield(nm(a), m).unwrap() && f.in_subfield(tr(a), m).unwrap(), "values in the subfield");
        // transitivity through F_{q^m}
        prop_assert!(f.norm(a, 1).unwrap() == f.norm_between(nm(a), m, 1).unwrap(), "norm transitive");
        prop_assert!(f.trace(a, 1).unwrap() == f.trace_between(tr(a), m, 1).unwrap(), "trace transitive");
        if !a.is_zero() {
            let e = (f.q_pow(n) - 1) / (f.q_pow(m) - 1);
            prop_assert!(nm(a) == f.pow(a, e), "norm as a power");
        }
        Ok(())
    })
}

pub fn adjoint_identity(cases: u32) -> Result<u32, String> {
    let ks = fields(&[(2, 1, 5), (3, 1, 4), (2, 2, 3), (5, 1, 3), (3, 1, 6), (2, 1, 8)]);
    let s = (0..ks.len(), prop::collection::vec(any::<u64>(), 8), any::<u64>(), any::<u64>());
    run(cases, s, |(fi, cs, x, y)| {
        let k = &ks[fi];
        let n = k.n() as usize;
        let f = LinearizedPoly::new(k, cs[..n].iter().map(|&c| el(k, c)).collect()).unwrap();
        let g = f.adjoint();
        let (x, y) = (el(k, x), el(k, y));
        let lhs = k.trace(k.mul(f.eval(x), y), 1).unwrap();
        let rhs = k.trace(k.mul(x, g.eval(y)), 1).unwrap();
        prop_assert!(lhs == rhs, "Tr(f(x) y) = Tr(x f^(y))");
        prop_assert!(g.adjoint() == f, "involution");
        Ok(())
    })
}

pub fn adjoint_invariance(cases: u32) -> Result<u32, String> {
    let ks = fields(&[(2, 1, 3), (2, 1, 4), (2, 1, 5), (3, 1, 3), (3, 1, 4), (2, 2, 3), (5, 1, 3), (2, 1, 6), (3, 1, 5)]);
    let s = (0..ks.len(), any::<u32>(), any::<u32>(), any::<u64>());
    run(cases, s, |(fi, i, j, a)| {
        let k = &ks[fi];
        let n = k.n();
        let (i, j) = (i % n, j % n);
        let alpha = el(k, a);
        if i == j || alpha.is_zero() {
            return Ok(());
        }
        let f = Binomial::new(i, j, alpha, n).to_poly(k);
        let v = is_scattered_bruteforce(&f).unwrap();
        let w = is_scattered_bruteforce(&f.adjoint()).unwrap();
        prop_assert!(v.scattered == w.scattered, "f and its adjoint disagree");
        Ok(())
    })
}

fn sparse(k: &Arc<FieldCtx>, nv: usize, terms: &[(Vec<u16>, u64)]) -> MvPoly {
    MvPoly::from_terms(k, nv, terms.iter().map(|(e, c)| (e[..nv].to_vec(), el(k, *c)))).unwrap()
}

pub fn multiplicity_axioms(cases: u32) -> Result<u32, String> {
    let ks = fields(&[(2, 1, 2), (3, 1, 2), (2, 1, 3), (5, 1, 1)]);
    const NV: usize = 3;
    let terms = || prop::collection::vec((prop::collection::vec(0u16..3, NV), any::<u64>()), 1..5);
    let s = (0..ks.len(), terms(), terms(), prop::collection::vec(any::<u64>(), NV), 0u32..3, 0u32..3);
    run(cases, s, |(fi, t1, t2, q, k1, k2)| {
        let k = &ks[fi];
        let pt: Vec<FqnElem> = q.iter().map(|&c| el(k, c)).collect();
        // (X_0 - Q_0)^k shifts force positive multiplicities regularly
        let lin = |v: usize| &MvPoly::var(k, NV, v) - &MvPoly::constant(k, NV, pt[v]);
        let p = &sparse(k, NV, &t1) * &lin(0).pow(k1);
        let r = &sparse(k, NV, &t2) * &lin(1).pow(k2);
        if p.is_zero() || r.is_zero() {
            return Ok(());
        }
        let (mp, mr) = (p.multiplicity(&pt).unwrap(), r.multiplicity(&pt).unwrap());
        prop_assert!((&p * &r).multiplicity(&pt).unwrap() == mp + mr, "multiplicative");
        let s = &p + &r;
        if !s.is_zero() {
            let ms = s.multiplicity(&pt).unwrap();
            prop_assert!(ms >= mp.min(mr), "sum bound");
            if mp != mr {
                prop_assert!(ms == mp.min(mr), "sum equality for distinct multiplicities");
            }
        }
        prop_assert!((mp == 0) == !p.eval(&pt).unwrap().is_zero(), "zero multiplicity iff nonvanishing");
        prop_assert!(lin(2).multiplicity(&pt).unwrap() == 1, "linear form through Q");
        let c = MvPoly::constant(k, NV, FqnElem::ONE);
        prop_assert!(c.multiplicity(&pt).unwrap() == 0, "nonzero constant");
        Ok(())
    })
}
