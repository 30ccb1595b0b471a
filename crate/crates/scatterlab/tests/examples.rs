use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};
use rayon::prelude::*;

use scatterlab::equiv::{cmpz_equivalent, enumerate_cmpz6_classes};
use scatterlab::linpoly::{normalize_binomial, Binomial, LinearizedPoly};
use scatterlab::mvpoly::{
    abc_decompose, build_p, gcd1_certificate, n6_gcd3_discriminants, n8_gcd4_classification, MvPoly,
};
use scatterlab::scatter::{
    binomial_bruteforce, classify_binomial, cmpz8_criterion, is_scattered_curve_criterion, lang_weil_lower_bound,
    linear_set_size, BinomialScanner, CLASSIFICATION_Q_MIN,
};
use scatterlab::{make_field, FieldCtx, FqnElem};

fn nonzero(k: &FieldCtx) -> impl Iterator<Item = FqnElem> + '_ {
    (1..k.size()).map(|c| k.elem_unchecked(c))
}

#[test]
fn cmpz_norm_one_has_big_kernel_and_small_linear_set() {
    for q in [2u64, 3] {
        let k = make_field(q, 1, 6).unwrap();
        let d = nonzero(&k).find(|&d| k.norm(d, 3).unwrap() == FqnElem::ONE && d != FqnElem::ONE).unwrap();
        // δx^q + x^{q^4}
        let mut c = vec![FqnElem::ZERO; 6];
        c[1] = d;
        c[4] = FqnElem::ONE;
        let f = LinearizedPoly::new(&k, c).unwrap();
        assert_eq!(f.kernel_dim(), 3);
        assert!(linear_set_size(&f).unwrap() < (k.size() - 1) / (q - 1));
    }
}

#[test]
fn trace_shape_over_cubic_extension_is_not_scattered() {
    for q in [2u64, 3, 5] {
        let k = make_field(q, 1, 3).unwrap();
        let b = Binomial::new(1, 2, FqnElem::ONE, 3);
        let v = binomial_bruteforce(&k, &b).unwrap();
        assert!(!v.scattered);
        let (x, y) = v.witness.unwrap();
        let f = b.to_poly(&k);
        assert_eq!(k.div(f.eval(x), x).unwrap(), k.div(f.eval(y), y).unwrap());
        assert!(!k.in_subfield(k.div(x, y).unwrap(), 1).unwrap());
        assert!(!classify_binomial(&k, &b).unwrap().predicted_scattered);
    }
}

#[test]
fn classification_examples() {
    let k = make_field(3, 1, 5).unwrap();
    let g = k.generator();
    let c = classify_binomial(&k, &Binomial::new(1, 4, g, 5)).unwrap();
    assert!(c.predicted_scattered && c.below_threshold);
    for a in nonzero(&k).step_by(17) {
        assert!(!classify_binomial(&k, &Binomial::new(1, 2, a, 5)).unwrap().predicted_scattered);
    }
    assert_eq!(CLASSIFICATION_Q_MIN, 162_019_556_021);
}

#[test]
fn n8_even_q_has_no_cmpz_binomial() {
    let k = make_field(2, 1, 8).unwrap();
    for i in 1..=3 {
        let mut sc = BinomialScanner::new(&k, i, i + 4).unwrap();
        assert!(nonzero(&k).all(|d| !sc.verdict(d).scattered), "I = {i}");
    }
    assert!(nonzero(&k).all(|d| !cmpz8_criterion(&k, d).unwrap().predicted_scattered));
}

#[test]
fn n8_classification_truth_set_q3() {
    let k = make_field(3, 1, 8).unwrap();
    let minus_one = k.neg(FqnElem::ONE);
    let sub = k.subfield_elements(4).unwrap();
    let mut hits = Vec::new();
    for &b in sub.iter().filter(|&&b| !b.is_zero() && b != FqnElem::ONE) {
        if n8_gcd4_classification(&k, b).unwrap() {
            hits.push(b);
            // the implied condition β^{q^3+q^2+q-1} = 1
            assert_eq!(k.pow(b, 27 + 9 + 3 - 1), FqnElem::ONE);
        }
    }
    assert_eq!(sub.len() - 2, 79);
    assert_eq!(hits, vec![minus_one]);
}

#[test]
fn gcd3_delta_lies_in_base_field_q3() {
    let k = make_field(3, 1, 6).unwrap();
    for b in k.subfield_elements(3).unwrap().into_iter().filter(|&b| !b.is_zero() && b != FqnElem::ONE) {
        let r = n6_gcd3_discriminants(&k, b).unwrap();
        assert!(r.delta_in_fq);
        assert_eq!(r.identity_holds, Some(true));
    }
}

#[test]
fn p_on_the_diagonal_and_abc_have_no_common_zero() {
    let k = make_field(3, 1, 5).unwrap();
    let p = build_p(&k, 5, 1, 3, k.generator()).unwrap();
    let x = k.generator();
    assert!(p.eval(&[x; 5]).unwrap().is_zero());
    let (a, b, c) = abc_decompose(&p).unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    let mut common = 0;
    for _ in 0..10_000 {
        let pt: Vec<FqnElem> = (0..5).map(|_| k.elem_unchecked(rng.next_u64() % k.size())).collect();
        // X_I = X_{n-I} or X_J = X_{n-J} kills G or H: the trivial common zeros
        if pt[1] == pt[4] || pt[3] == pt[2] {
            continue;
        }
        let z = |m: &MvPoly| m.eval(&pt).unwrap().is_zero();
        if z(&a) && z(&b) && z(&c) {
            common += 1;
        }
    }
    assert_eq!(common, 0);
}

#[test]
fn gcd1_examples() {
    let k = make_field(3, 1, 5).unwrap();
    let r = gcd1_certificate(&k, 1, 3, k.from_int(2)).unwrap();
    assert!(r.passes);
    assert_eq!(r.m_ac, 1);
    assert!(r.m_b >= 1);
    let k = make_field(2, 1, 7).unwrap();
    for i in 1..7u32 {
        for j in i + 1..7 {
            if i + j != 7 {
                let r = gcd1_certificate(&k, i, j, FqnElem::ONE).unwrap();
                assert!(r.passes, "n = 7, ({i}, {j}): {r:?}");
            }
        }
    }
}

#[test]
fn equivalence_examples() {
    let k = make_field(3, 1, 6).unwrap();
    let g = k.generator();
    let d = k.pow(g, 5);
    // N(δ') N(δ) = 1 with δ' = δ^{-q}
    let d2 = k.inv(k.frobenius(d, 1)).unwrap();
    assert!(cmpz_equivalent(&k, 1, d, 5, d2).unwrap());
    assert!(cmpz_equivalent(&k, 1, d, 1, d).unwrap());
    let r = enumerate_cmpz6_classes(2, false).unwrap();
    assert_eq!((r.class_count, r.formula_value), (0, 0));
}

#[test]
fn normalization_examples() {
    let k = make_field(3, 1, 6).unwrap();
    let g = k.generator();
    let (b, _) = normalize_binomial(&k, 3, 1, g).unwrap();
    assert_eq!((b.i, b.j), (1, 3));
    let (b, _) = normalize_binomial(&k, 4, 5, g).unwrap();
    assert_eq!((b.i, b.j), (1, 2));
    let (b, t) = normalize_binomial(&k, 1, 3, g).unwrap();
    assert_eq!((b.i, b.j, b.alpha, t.len()), (1, 3, g, 0));
}

#[test]
fn lang_weil_examples() {
    let lw = lang_weil_lower_bound(4, 1, 1000).unwrap();
    assert_eq!(lw.lower_bound, (1000i64.pow(4) - 5 * 1000i64.pow(3)).into());
    for n in 5u32..=8 {
        // q = ceil(2^{13n/3 + 4})
        let e = 13 * n + 12;
        let mut q = 2f64.powf(e as f64 / 3.0) as u128 - 2;
        while q * q * q < 1u128 << e {
            q += 1;
        }
        let q = q as u64;
        let lw = lang_weil_lower_bound(n - 1, 1 << n, q).unwrap();
        assert!(lw.threshold_ok);
        assert!(lw.lower_bound > (1u64 << (n + 1)).into());
    }
}

/// Scatteredness of x^{q^I} + αx^{q^J} and of its adjoint
/// x^{q^{n-I}} + α^{q^{n-J}} x^{q^{n-J}} agree everywhere with q^n <= 4096, n <= 8.
#[test]
fn adjoint_invariance_exhaustive() {
    let specs = [(2, 1, 3), (2, 1, 4), (2, 1, 5), (2, 1, 6), (2, 1, 7), (2, 1, 8), (3, 1, 3), (3, 1, 4), (3, 1, 5), (3, 1, 6), (3, 1, 7), (2, 2, 3), (2, 2, 4), (2, 2, 5), (2, 2, 6), (5, 1, 3), (5, 1, 4), (5, 1, 5), (7, 1, 3), (7, 1, 4)];
    for (p, e, n) in specs {
        let k: Arc<FieldCtx> = make_field(p, e, n).unwrap();
        let b = Binomial::new(1, 2, k.generator(), n);
        let expect = Binomial::new(n - 1, n - 2, k.frobenius(k.generator(), (n - 2) as i64), n);
        assert_eq!(b.to_poly(&k).adjoint(), expect.to_poly(&k));
        let pairs: Vec<(u32, u32)> = (1..n).flat_map(|i| (1..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let bad: usize = pairs
            .par_iter()
            .map(|&(i, j)| {
                let mut f = BinomialScanner::new(&k, i, j).unwrap();
                let mut g = BinomialScanner::new(&k, n - i, n - j).unwrap();
                nonzero(&k)
                    .filter(|&a| f.verdict(a).scattered != g.verdict(k.frobenius(a, (n - j) as i64)).scattered)
                    .count()
            })
            .sum();
        assert_eq!(bad, 0, "q = {p}^{e}, n = {n}");
    }
}

#[test]
fn curve_criterion_examples() {
    let k = make_field(3, 1, 5).unwrap();
    let one = Binomial::new(1, 4, FqnElem::ONE, 5);
    let v = is_scattered_curve_criterion(&k, &one).unwrap();
    assert!(!v.scattered && v.witness.is_some());
}
