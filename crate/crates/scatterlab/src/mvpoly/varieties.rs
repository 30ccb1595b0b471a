use std::sync::Arc;

use super::MvPoly;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqnElem};
use crate::gcd;

fn diff(ctx: &Arc<FieldCtx>, n: usize, a: usize, b: usize) -> MvPoly {
    &MvPoly::var(ctx, n, a % n) - &MvPoly::var(ctx, n, b % n)
}

/// Π_ℓ (X_ℓ - X_{ℓ+s}) over ℓ < n outside `skip`, indices mod n.
fn cyclic_product(ctx: &Arc<FieldCtx>, n: usize, s: usize, skip: &[usize]) -> MvPoly {
    let mut p = MvPoly::one(ctx, n);
    for l in 0..n {
        if !skip.contains(&l) {
            p = &p * &diff(ctx, n, l, l + s);
        }
    }
    p
}

/// P = A Π(X_ℓ - X_{ℓ+I}) - Π(X_ℓ - X_{ℓ+J}) in X_0..X_{n-1}.
pub fn build_p(ctx: &Arc<FieldCtx>, n: u32, i: u32, j: u32, a: FqnElem) -> Result<MvPoly> {
    let n = n as usize;
    let g = gcd(((j as i64 - i as i64).rem_euclid(n as i64)) as u64, n as u64) as u32;
    if g != 1 {
        return Err(Error::GcdNotOne(g));
    }
    let f1 = cyclic_product(ctx, n, i as usize % n, &[]);
    let f2 = cyclic_product(ctx, n, j as usize % n, &[]);
    Ok(&f1.scale(a) - &f2)
}

/// G and H with F_1 = (X_0 - X_I)(X_{n-I} - X_0) G and F_2 likewise with J.
pub fn gh_factors(ctx: &Arc<FieldCtx>, n: u32, i: u32, j: u32) -> (MvPoly, MvPoly) {
    let n = n as usize;
    let (i, j) = (i as usize, j as usize);
    (cyclic_product(ctx, n, i, &[0, n - i]), cyclic_product(ctx, n, j, &[0, n - j]))
}

/// Coefficients of X_0^2, X_0, 1. They do not involve X_0.
pub fn abc_decompose(p: &MvPoly) -> Result<(MvPoly, MvPoly, MvPoly)> {
    let d = p.degree_in(0);
    if d > 2 {
        return Err(Error::DegreeTooHigh(d));
    }
    Ok((p.coeff_in(0, 2), p.coeff_in(0, 1), p.coeff_in(0, 0)))
}

/// The G = gcd(J-I, n) polynomials
/// Z_i = Π_ℓ (X_{ℓK+i} - X_{ℓK+i+I}) - β^{q^i} Π_ℓ (X_{ℓK+i} - X_{ℓK+i+J}),
/// ℓ < n/G, K = J - I. For G = 1 this is β·P evaluated at A = 1/β.
pub fn build_z_system(ctx: &Arc<FieldCtx>, n: u32, i: u32, j: u32, beta: FqnElem) -> Result<Vec<MvPoly>> {
    let n = n as usize;
    if !(i < j && (j as usize) < n) {
        return Err(Error::PreconditionViolated(format!("need I < J < n, got ({i}, {j})")));
    }
    let k = (j - i) as usize;
    let g = gcd(k as u64, n as u64) as usize;
    let d = n / g;
    let mut out = Vec::with_capacity(g);
    for r in 0..g {
        let mut lhs = MvPoly::one(ctx, n);
        let mut rhs = MvPoly::one(ctx, n);
        for l in 0..d {
            let base = l * k + r;
            lhs = &lhs * &diff(ctx, n, base, base + i as usize);
            rhs = &rhs * &diff(ctx, n, base, base + j as usize);
        }
        out.push(&lhs - &rhs.scale(ctx.frobenius(beta, r as i64)));
    }
    Ok(out)
}
