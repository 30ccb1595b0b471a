//! Sparse multivariate polynomials over F_{q^n}, plus the varieties and
//! irreducibility certificates built on top of them.

mod cert;
mod parse;
mod varieties;

pub use cert::*;
pub use varieties::*;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqnElem};

pub type Exp = SmallVec<[u16; 8]>;

#[derive(Clone)]
pub struct MvPoly {
    ctx: Arc<FieldCtx>,
    nvars: usize,
    terms: BTreeMap<Exp, FqnElem>,
}

impl PartialEq for MvPoly {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.nvars == other.nvars && self.terms == other.terms
    }
}
impl Eq for MvPoly {}

impl fmt::Debug for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MvPoly[{}]({})", self.nvars, self.to_text())
    }
}

impl MvPoly {
    pub fn zero(ctx: &Arc<FieldCtx>, nvars: usize) -> Self {
        MvPoly { ctx: ctx.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, nvars: usize, c: FqnElem) -> Self {
        Self::monomial(ctx, nvars, smallvec::smallvec![0; nvars], c)
    }

    pub fn one(ctx: &Arc<FieldCtx>, nvars: usize) -> Self {
        Self::constant(ctx, nvars, FqnElem::ONE)
    }

    pub fn var(ctx: &Arc<FieldCtx>, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e: Exp = smallvec::smallvec![0; nvars];
        e[i] = 1;
        Self::monomial(ctx, nvars, e, FqnElem::ONE)
    }

    fn monomial(ctx: &Arc<FieldCtx>, nvars: usize, e: Exp, c: FqnElem) -> Self {
        let mut p = Self::zero(ctx, nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u16>, FqnElem)>>(ctx: &Arc<FieldCtx>, nvars: usize, it: I) -> Result<Self> {
        let mut p = Self::zero(ctx, nvars);
        for (e, c) in it {
            if e.len() != nvars {
                return Err(Error::VarCountMismatch(e.len(), nvars));
            }
            p.add_term(Exp::from_vec(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exp, c: FqnElem) {
        if c.is_zero() {
            return;
        }
        let ctx = &self.ctx;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ctx.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn terms(&self) -> impl Iterator<Item = (&[u16], FqnElem)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.ctx, &other.ctx) {
            return Err(Error::CtxMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, &c) in &other.terms {
            r.add_term(e.clone(), c);
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut r = Self::zero(&self.ctx, self.nvars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Exp = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, self.ctx.mul(c1, c2));
            }
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.ctx.from_int(-1))
    }

    pub fn scale(&self, c: FqnElem) -> Self {
        let mut r = Self::zero(&self.ctx, self.nvars);
        if c.is_zero() {
            return r;
        }
        r.terms = self.terms.iter().map(|(e, &v)| (e.clone(), self.ctx.mul(v, c))).collect();
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(&self.ctx, self.nvars);
        let mut b = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        r
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v] as u32).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut r = Self::zero(&self.ctx, self.nvars);
        r.terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().map(|&x| x as u32).sum::<u32>() == d)
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        r
    }

    pub fn eval(&self, point: &[FqnElem]) -> Result<FqnElem> {
        if point.len() != self.nvars {
            return Err(Error::VarCountMismatch(point.len(), self.nvars));
        }
        let ctx = &self.ctx;
        let mut s = FqnElem::ZERO;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = ctx.mul(t, ctx.pow(point[i], k as u128));
                    if t.is_zero() {
                        break;
                    }
                }
            }
            s = ctx.add(s, t);
        }
        Ok(s)
    }

    /// Substitutes the given variables; the variable count is unchanged.
    pub fn specialize(&self, assignment: &[(usize, FqnElem)]) -> Result<Self> {
        for &(v, _) in assignment {
            if v >= self.nvars {
                return Err(Error::VarCountMismatch(v + 1, self.nvars));
            }
        }
        let ctx = &self.ctx;
        let mut r = Self::zero(ctx, self.nvars);
        for (e, &c) in &self.terms {
            let mut e = e.clone();
            let mut t = c;
            for &(v, x) in assignment {
                if e[v] > 0 {
                    t = ctx.mul(t, ctx.pow(x, e[v] as u128));
                    e[v] = 0;
                }
            }
            r.add_term(e, t);
        }
        Ok(r)
    }

    /// Coefficient of X_v^k, as a polynomial not involving X_v.
    pub fn coeff_in(&self, v: usize, k: u32) -> Self {
        let mut r = Self::zero(&self.ctx, self.nvars);
        for (e, &c) in &self.terms {
            if e[v] as u32 == k {
                let mut e = e.clone();
                e[v] = 0;
                r.terms.insert(e, c);
            }
        }
        r
    }

    /// den^d · p(.., X_v = num/den, ..) with d = deg_{X_v} p.
    pub fn substitute_rational(&self, v: usize, num: &Self, den: &Self) -> Result<Self> {
        self.check(num)?;
        self.check(den)?;
        let d = self.degree_in(v);
        let mut num_pows = vec![Self::one(&self.ctx, self.nvars)];
        let mut den_pows = vec![Self::one(&self.ctx, self.nvars)];
        for k in 1..=d as usize {
            num_pows.push(&num_pows[k - 1] * num);
            den_pows.push(&den_pows[k - 1] * den);
        }
        let mut r = Self::zero(&self.ctx, self.nvars);
        for k in 0..=d {
            let ck = self.coeff_in(v, k);
            if ck.is_zero() {
                continue;
            }
            r = &r + &(&ck * &(&num_pows[k as usize] * &den_pows[(d - k) as usize]));
        }
        Ok(r)
    }

    /// For p = A·X_v + B with A ≠ 0, returns (-B, A), i.e. X_v = -B/A on p = 0.
    pub fn solve_linear(&self, v: usize) -> Result<(Self, Self)> {
        let d = self.degree_in(v);
        if d > 1 {
            return Err(Error::DegreeTooHigh(d));
        }
        let a = self.coeff_in(v, 1);
        if a.is_zero() {
            return Err(Error::EliminationDegenerate);
        }
        Ok((self.coeff_in(v, 0).neg(), a))
    }

    /// m_Q(p): the least total degree with a nonzero homogeneous part of p(X + Q).
    pub fn multiplicity(&self, q: &[FqnElem]) -> Result<u32> {
        if q.len() != self.nvars {
            return Err(Error::VarCountMismatch(q.len(), self.nvars));
        }
        let top = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        let ctx = &self.ctx;
        let p = ctx.p();
        for d in 0..=top {
            let mut acc: BTreeMap<Exp, FqnElem> = BTreeMap::new();
            for (e, &c) in &self.terms {
                let forced: u32 = e.iter().zip(q).filter(|(_, x)| x.is_zero()).map(|(&k, _)| k as u32).sum();
                let tdeg: u32 = e.iter().map(|&k| k as u32).sum();
                if forced > d || tdeg < d {
                    continue;
                }
                let mut k: Exp = smallvec::smallvec![0; self.nvars];
                shifts(ctx, p, e, q, 0, d, c, &mut k, &mut acc);
            }
            if acc.values().any(|x| !x.is_zero()) {
                return Ok(d);
            }
        }
        unreachable!("the top-degree part of p(X+Q) equals that of p")
    }

    /// Sorted terms, `exponents:coefficient` joined by spaces; `0` if empty.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(e, &c)| {
                let es: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                format!("[{}]:{}", es.join(","), self.ctx.format_elem(c))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses an expression in X0..X{nvars-1}, integers, the named constants,
    /// `+ - * ^` and parentheses.
    pub fn parse_expr(ctx: &Arc<FieldCtx>, nvars: usize, s: &str, consts: &[(&str, FqnElem)]) -> Result<Self> {
        parse::parse(ctx, nvars, s, consts)
    }
}

// Enumerates k <= e with |k| = d, k_i = e_i where Q_i = 0, accumulating
// c · Π binom(e_i, k_i) Q_i^{e_i - k_i} X^k.
#[allow(clippy::too_many_arguments)]
fn shifts(
    ctx: &FieldCtx,
    p: u64,
    e: &[u16],
    q: &[FqnElem],
    i: usize,
    left: u32,
    c: FqnElem,
    k: &mut Exp,
    acc: &mut BTreeMap<Exp, FqnElem>,
) {
    if i == e.len() {
        if left == 0 {
            let slot = acc.entry(k.clone()).or_insert(FqnElem::ZERO);
            *slot = ctx.add(*slot, c);
        }
        return;
    }
    let rest: u32 = e[i + 1..].iter().map(|&x| x as u32).sum();
    let (lo, hi) = if q[i].is_zero() { (e[i] as u32, e[i] as u32) } else { (0, e[i] as u32) };
    for ki in lo..=hi.min(left) {
        if left - ki > rest {
            continue;
        }
        let b = binom_mod(e[i] as u64, ki as u64, p);
        if b == 0 {
            continue;
        }
        let mut t = ctx.mul(c, ctx.from_int(b as i64));
        if ki < e[i] as u32 {
            t = ctx.mul(t, ctx.pow(q[i], (e[i] as u32 - ki) as u128));
        }
        k[i] = ki as u16;
        shifts(ctx, p, e, q, i + 1, left - ki, t, k, acc);
    }
    k[i] = 0;
}

/// binom(n, k) mod p by Lucas.
fn binom_mod(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let mut c = 1u128;
        for t in 0..b {
            c = c * (a - t) as u128 / (t + 1) as u128;
        }
        r = (r as u128 * (c % p as u128) % p as u128) as u64;
        n /= p;
        k /= p;
    }
    r
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&MvPoly> for &MvPoly {
            type Output = MvPoly;
            /// Panics on mismatched contexts or variable counts; see the `try_` forms.
            fn $m(self, rhs: &MvPoly) -> MvPoly {
                self.$f(rhs).expect("mismatched polynomial operands")
            }
        }
        impl $tr<MvPoly> for MvPoly {
            type Output = MvPoly;
            fn $m(self, rhs: MvPoly) -> MvPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &MvPoly {
    type Output = MvPoly;
    fn neg(self) -> MvPoly {
        MvPoly::neg(self)
    }
}
