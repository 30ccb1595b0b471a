//! q-polynomials Σ a_i X^{q^i} modulo X^{q^n} - X.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqnElem};

#[derive(Clone)]
pub struct LinearizedPoly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<FqnElem>,
}

impl fmt::Debug for LinearizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearizedPoly({})", self.to_text())
    }
}

impl PartialEq for LinearizedPoly {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.coeffs == other.coeffs
    }
}

impl LinearizedPoly {
    pub fn new(ctx: &Arc<FieldCtx>, coeffs: Vec<FqnElem>) -> Result<Self> {
        if coeffs.len() != ctx.n() as usize {
            return Err(Error::PreconditionViolated(format!(
                "expected {} coefficients, got {}",
                ctx.n(),
                coeffs.len()
            )));
        }
        Ok(LinearizedPoly { ctx: ctx.clone(), coeffs })
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        LinearizedPoly { ctx: ctx.clone(), coeffs: vec![FqnElem::ZERO; ctx.n() as usize] }
    }

    /// c·X^{q^i}, i taken mod n.
    pub fn monomial(ctx: &Arc<FieldCtx>, i: i64, c: FqnElem) -> Self {
        let mut f = Self::zero(ctx);
        f.coeffs[i.rem_euclid(ctx.n() as i64) as usize] = c;
        f
    }

    pub fn identity(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(ctx, 0, FqnElem::ONE)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FqnElem] {
        &self.coeffs
    }

    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, x: FqnElem) -> FqnElem {
        let k = &self.ctx;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(FqnElem::ZERO, |acc, (i, &c)| k.add(acc, k.mul(c, k.frobenius(x, i as i64))))
    }

    pub fn add(&self, g: &Self) -> Result<Self> {
        self.same_ctx(g)?;
        let k = &self.ctx;
        let coeffs = self.coeffs.iter().zip(&g.coeffs).map(|(&a, &b)| k.add(a, b)).collect();
        Ok(LinearizedPoly { ctx: k.clone(), coeffs })
    }

    /// The adjoint with respect to Tr(xy): the coefficient a_i moves to index
    /// n-i and is raised to q^{n-i}.
    pub fn adjoint(&self) -> Self {
        let k = &self.ctx;
        let n = k.n() as usize;
        let mut out = vec![FqnElem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            let j = (n - i) % n;
            out[j] = k.frobenius(a, j as i64);
        }
        LinearizedPoly { ctx: k.clone(), coeffs: out }
    }

    /// f∘g in the quotient ring: c_k = Σ_{i+j≡k} a_i b_j^{q^i}.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.same_ctx(g)?;
        let k = &self.ctx;
        let n = k.n() as usize;
        let mut out = vec![FqnElem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in g.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = k.mul(a, k.frobenius(b, i as i64));
                out[(i + j) % n] = k.add(out[(i + j) % n], t);
            }
        }
        Ok(LinearizedPoly { ctx: k.clone(), coeffs: out })
    }

    /// dim_{F_q} ker f, as n minus the F_q-rank of the images of a normal basis.
    pub fn kernel_dim(&self) -> usize {
        let k = &self.ctx;
        let xi = k.find_normal_element();
        let images: Vec<FqnElem> = (0..k.n()).map(|i| self.eval(k.frobenius(xi, i as i64))).collect();
        k.n() as usize - k.fq_rank(&images)
    }

    fn same_ctx(&self, g: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &g.ctx) {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    /// `x^q^I + (coeff) x^q^J` style text; unit coefficients are left bare.
    pub fn to_text(&self) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                if c == FqnElem::ONE {
                    format!("x^q^{i}")
                } else {
                    format!("({}) x^q^{i}", self.ctx.format_elem(c))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    pub fn parse(ctx: &Arc<FieldCtx>, s: &str) -> Result<Self> {
        let mut f = Self::zero(ctx);
        let s = s.trim();
        if s == "0" {
            return Ok(f);
        }
        for term in s.split(" + ") {
            let term = term.trim();
            let (coeff, mono) = if let Some(rest) = term.strip_prefix('(') {
                let close = rest.find(')').ok_or_else(|| Error::Parse(format!("unclosed coefficient in {term:?}")))?;
                (ctx.parse_elem(&rest[..close])?, rest[close + 1..].trim())
            } else {
                (FqnElem::ONE, term)
            };
            let i: usize = mono
                .strip_prefix("x^q^")
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad monomial {mono:?}")))?;
            if i >= ctx.n() as usize {
                return Err(Error::Parse(format!("q-degree {i} is not below n = {}", ctx.n())));
            }
            f.coeffs[i] = ctx.add(f.coeffs[i], coeff);
        }
        Ok(f)
    }
}

/// f(x) = x^{q^I} + α x^{q^J}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Binomial {
    pub i: u32,
    pub j: u32,
    pub alpha: FqnElem,
    pub n: u32,
    /// Set when 0 < I < J < n, I < n/2 (I <= n/4 for J - I = n/2) and gcd(I, J, n) = 1.
    pub normalized: bool,
}

impl Binomial {
    pub fn new(i: u32, j: u32, alpha: FqnElem, n: u32) -> Binomial {
        let mut b = Binomial { i, j, alpha, n, normalized: false };
        b.normalized = b.is_canonical();
        b
    }

    pub fn to_poly(&self, ctx: &Arc<FieldCtx>) -> LinearizedPoly {
        let mut f = LinearizedPoly::monomial(ctx, self.i as i64, FqnElem::ONE);
        let j = (self.j % self.n) as usize;
        f.coeffs[j] = ctx.add(f.coeffs[j], self.alpha);
        f
    }

    pub fn gcd_ijn(&self) -> u32 {
        crate::gcd(crate::gcd(self.i as u64, self.j as u64), self.n as u64) as u32
    }

    fn is_canonical(&self) -> bool {
        let (i, j, n) = (self.i, self.j, self.n);
        if !(0 < i && i < j && j < n) || self.alpha.is_zero() || self.gcd_ijn() != 1 {
            return false;
        }
        if 2 * (j - i) == n {
            4 * i <= n
        } else {
            2 * i < n
        }
    }

    pub fn text(&self, ctx: &FieldCtx) -> String {
        format!("x^q^{} + ({}) x^q^{}", self.i, ctx.format_elem(self.alpha), self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// x^{q^I} + α x^{q^J} ↦ x^{q^J} + α^{-1} x^{q^I} (scalar multiple).
    Swap,
    /// Replace by the adjoint, then rescale to make the lower term monic.
    Adjoint,
}

/// Canonical representative with the same scatteredness as the input.
pub fn normalize_binomial(ctx: &FieldCtx, i: u32, j: u32, alpha: FqnElem) -> Result<(Binomial, Vec<Transform>)> {
    let n = ctx.n();
    if alpha.is_zero() {
        return Err(Error::PreconditionViolated("alpha must be nonzero".into()));
    }
    let (mut i, mut j) = (i % n, j % n);
    if i == j {
        return Err(Error::DegenerateBinomial);
    }
    if i == 0 || j == 0 {
        return Err(Error::PreconditionViolated("exponents must lie in 1..n-1".into()));
    }
    let mut alpha = alpha;
    let mut note = Vec::new();
    if i > j {
        std::mem::swap(&mut i, &mut j);
        alpha = ctx.inv(alpha)?;
        note.push(Transform::Swap);
    }
    let cmpz = 2 * (j - i) == n;
    let flip = if cmpz { 4 * i > n } else { 2 * i >= n };
    if flip {
        // adjoint: x^{q^{n-I}} + α^{q^{n-J}} x^{q^{n-J}}; divide by the coefficient of the lower term
        let a = ctx.frobenius(alpha, (n - j) as i64);
        let (ni, nj) = (n - j, n - i);
        alpha = ctx.inv(a)?;
        i = ni;
        j = nj;
        note.push(Transform::Adjoint);
    }
    Ok((Binomial::new(i, j, alpha, n), note))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn eval_examples() {
        let k = make_field(2, 1, 2).unwrap();
        let t = k.elem(2).unwrap();
        let f = LinearizedPoly::parse(&k, "x^q^1 + x^q^0").unwrap();
        assert_eq!(f.eval(t), FqnElem::ONE);
        assert_eq!(LinearizedPoly::zero(&k).eval(t), FqnElem::ZERO);
        let k3 = make_field(3, 1, 4).unwrap();
        let xq = LinearizedPoly::monomial(&k3, 1, FqnElem::ONE);
        for x in k3.subfield_elements(1).unwrap() {
            assert_eq!(xq.eval(x), x);
        }
    }

    #[test]
    fn compose_examples() {
        let k = make_field(2, 1, 5).unwrap();
        let xq = LinearizedPoly::monomial(&k, 1, FqnElem::ONE);
        assert_eq!(xq.compose(&xq).unwrap(), LinearizedPoly::monomial(&k, 2, FqnElem::ONE));
        let f = LinearizedPoly::parse(&k, "(01101) x^q^1 + x^q^3").unwrap();
        assert_eq!(f.compose(&LinearizedPoly::identity(&k)).unwrap(), f);
        let other = make_field(2, 1, 5).unwrap();
        assert_eq!(f.compose(&LinearizedPoly::identity(&other)), Err(Error::CtxMismatch));
    }

    #[test]
    fn adjoint_of_binomial() {
        let k = make_field(3, 1, 5).unwrap();
        let a = k.elem(17).unwrap();
        let b = Binomial::new(1, 3, a, 5).to_poly(&k);
        let adj = b.adjoint();
        let mut want = LinearizedPoly::monomial(&k, 4, FqnElem::ONE);
        want.coeffs[2] = k.frobenius(a, 2);
        assert_eq!(adj, want);
        let s = LinearizedPoly::monomial(&k, 0, a);
        assert_eq!(s.adjoint(), s);
    }

    #[test]
    fn kernel_examples() {
        let k = make_field(3, 1, 4).unwrap();
        let f = LinearizedPoly::parse(&k, "x^q^1 + (2) x^q^0").unwrap();
        assert_eq!(f.kernel_dim(), 1);
        let s = LinearizedPoly::monomial(&k, 0, k.generator());
        assert_eq!(s.kernel_dim(), 0);
        assert_eq!(LinearizedPoly::zero(&k).kernel_dim(), 4);
    }

    #[test]
    fn kernel_half_for_norm_one() {
        // δx^{q^s} + x^{q^{s+n/2}} with δ^{1+q^{n/2}} = 1
        let k = make_field(2, 1, 6).unwrap();
        for c in 1..k.size() {
            let d = k.elem(c).unwrap();
            if k.norm(d, 3).unwrap() != FqnElem::ONE {
                continue;
            }
            let mut f = LinearizedPoly::monomial(&k, 4, FqnElem::ONE);
            f.coeffs[1] = d;
            assert_eq!(f.kernel_dim(), 3);
        }
    }

    #[test]
    fn text_round_trip() {
        let k = make_field(5, 1, 3).unwrap();
        let f = LinearizedPoly::parse(&k, "x^q^0 + (032) x^q^2").unwrap();
        assert_eq!(f.to_text(), "x^q^0 + (032) x^q^2");
        assert_eq!(LinearizedPoly::parse(&k, &f.to_text()).unwrap(), f);
        assert!(LinearizedPoly::parse(&k, "x^q^3").is_err());
        assert!(LinearizedPoly::parse(&k, "(03 x^q^1").is_err());
    }

    #[test]
    fn normalization_examples() {
        let k = make_field(2, 1, 6).unwrap();
        let a = k.generator();
        let (b, note) = normalize_binomial(&k, 3, 1, a).unwrap();
        assert_eq!((b.i, b.j, b.alpha), (1, 3, k.inv(a).unwrap()));
        assert_eq!(note, vec![Transform::Swap]);
        let (b, note) = normalize_binomial(&k, 4, 5, a).unwrap();
        assert_eq!((b.i, b.j), (1, 2));
        assert_eq!(b.alpha, k.inv(k.frobenius(a, 1)).unwrap());
        assert_eq!(note, vec![Transform::Adjoint]);
        let (b, note) = normalize_binomial(&k, 1, 3, a).unwrap();
        assert_eq!((b.i, b.j, b.alpha), (1, 3, a));
        assert!(note.is_empty() && b.normalized);
        assert_eq!(normalize_binomial(&k, 2, 8, a).unwrap_err(), Error::DegenerateBinomial);
        // CMPZ shape over F_{q^8}: (3, 7) goes to (1, 5)
        let k8 = make_field(2, 1, 8).unwrap();
        let (b, _) = normalize_binomial(&k8, 3, 7, a).unwrap();
        assert_eq!((b.i, b.j), (1, 5));
    }
}
