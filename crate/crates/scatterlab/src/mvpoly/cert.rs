//! Point certificates for the irreducibility arguments, and the closed-form
//! tests for the n = 6 and n = 8 CMPZ shapes.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{abc_decompose, build_p, build_z_system, MvPoly};
use crate::error::{Error, Result};
use crate::field::{make_field, FieldCtx, FqnElem};
use crate::gcd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertCase {
    #[serde(rename = "gcd1")]
    Gcd1,
    #[serde(rename = "n6gcd2")]
    N6Gcd2,
    #[serde(rename = "n8gcd2")]
    N8Gcd2,
    #[serde(rename = "n8gcd4")]
    N8Gcd4,
    #[serde(rename = "n6gcd3")]
    N6Gcd3,
    #[serde(rename = "n8gcd4-classification")]
    N8Gcd4Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub case: CertCase,
    /// Indices of the coordinates given in `point`.
    pub point_vars: Vec<usize>,
    pub point: Vec<String>,
    pub m_ac: u32,
    pub m_b: u32,
    pub a_nonzero: bool,
    pub b_zero: bool,
    pub c_simple: bool,
    pub passes: bool,
    /// Degree over F_p of the field the point was found in.
    pub extension_degree: u32,
    pub notes: String,
}

struct PointCheck {
    m_ac: u32,
    m_b: u32,
    a_nonzero: bool,
    b_zero: bool,
    c_simple: bool,
}

impl PointCheck {
    fn new(a: &MvPoly, b: &MvPoly, c: &MvPoly, pt: &[FqnElem]) -> Result<Self> {
        let ac = a * c;
        Ok(PointCheck {
            m_ac: ac.multiplicity(pt)?,
            m_b: if b.is_zero() { u32::MAX } else { b.multiplicity(pt)? },
            a_nonzero: !a.eval(pt)?.is_zero(),
            b_zero: b.eval(pt)?.is_zero(),
            c_simple: !c.is_zero() && c.multiplicity(pt)? == 1,
        })
    }

    fn mult_ok(&self) -> bool {
        self.m_ac % 2 == 1 && self.m_b as u64 * 2 > self.m_ac as u64
    }

    fn simple_ok(&self) -> bool {
        self.a_nonzero && self.b_zero && self.c_simple
    }

    fn report(&self, case: CertCase, ctx: &FieldCtx, vars: Vec<usize>, pt: &[FqnElem], passes: bool, notes: String) -> CertificateReport {
        CertificateReport {
            case,
            point: vars.iter().map(|&v| ctx.format_elem(pt[v])).collect(),
            point_vars: vars,
            m_ac: self.m_ac,
            m_b: self.m_b,
            a_nonzero: self.a_nonzero,
            b_zero: self.b_zero,
            c_simple: self.c_simple,
            passes,
            extension_degree: ctx.degree(),
            notes,
        }
    }
}

/// Which construction applies to (n, I, J), by the divisibility of G and H by X_J - X_{n-J}.
fn gcd1_case(n: usize, i: usize, j: usize) -> u8 {
    let pair = |s: usize, skip: [usize; 2]| {
        (0..n).filter(|l| !skip.contains(l)).any(|l| {
            let m = (l + s) % n;
            (l == j && m == n - j) || (l == n - j && m == j)
        })
    };
    let in_g = j != n - j && pair(i, [0, n - i]);
    let in_h = j != n - j && pair(j, [0, n - j]);
    if in_h {
        3
    } else if in_g {
        2
    } else {
        1
    }
}

/// The (n-1)-tuples of each construction, as (ℓ, full point with X_0 = 0).
fn gcd1_points(ctx: &Arc<FieldCtx>, n: usize, i: usize, j: usize, case: u8) -> Vec<(Option<usize>, Vec<FqnElem>)> {
    let xi = ctx.find_normal_element();
    let pw = |t: usize| ctx.frobenius(xi, t as i64);
    let base = |zero: [usize; 2]| {
        let mut u: Vec<FqnElem> = (0..n).map(pw).collect();
        u[0] = FqnElem::ZERO;
        for z in zero {
            u[z] = FqnElem::ZERO;
        }
        u
    };
    match case {
        2 => vec![(None, base([j, n - j]))],
        _ => {
            let (zero, s) = if case == 1 { ([j, n - j], i) } else { ([i, n - i], j) };
            let mut pts: Vec<_> = (1..n)
                .filter(|&l| {
                    let m = (l + s) % n;
                    ![0, zero[0], zero[1]].contains(&l) && ![0, zero[0], zero[1]].contains(&m)
                })
                .map(|l| {
                    let mut u = base(zero);
                    u[(l + s) % n] = pw(l);
                    (Some(l), u)
                })
                .collect();
            if case == 3 {
                // without a coincident pair; needed for (n, I, J) = (6, 1, 2)
                pts.push((None, base(zero)));
            }
            pts
        }
    }
}

/// A point Q with m_Q(ac) odd and 2 m_Q(b) > m_Q(ac) for P = a X_0^2 + b X_0 + c.
/// Falls back to F_{q^{2n}} coordinates when no construction works over F_{q^n}.
pub fn gcd1_certificate(ctx: &Arc<FieldCtx>, i: u32, j: u32, a: FqnElem) -> Result<CertificateReport> {
    let n = ctx.n();
    if n < 5 {
        return Err(Error::PreconditionViolated(format!("needs n >= 5, got {n}")));
    }
    if !(0 < i && i < j && j < n) {
        return Err(Error::PreconditionViolated(format!("need 0 < I < J < n, got ({i}, {j})")));
    }
    let g = gcd((j - i) as u64, n as u64) as u32;
    if g != 1 {
        return Err(Error::GcdNotOne(g));
    }
    let (nu, iu, ju) = (n as usize, i as usize, j as usize);
    let case = gcd1_case(nu, iu, ju);
    let mut first = None;
    for field in [ctx.clone(), make_field(ctx.p(), ctx.e(), 2 * n)?] {
        let av = if Arc::ptr_eq(&field, ctx) { a } else { field.embed_from(ctx, a)? };
        let p = build_p(&field, n, i, j, av)?;
        let (pa, pb, pc) = abc_decompose(&p)?;
        let pts = gcd1_points(&field, nu, iu, ju, case);
        if pts.is_empty() {
            return Err(Error::CaseSelectionFailed(format!("no admissible ℓ for (n, I, J) = ({n}, {i}, {j}), case {case}")));
        }
        for (l, pt) in pts {
            let chk = PointCheck::new(&pa, &pb, &pc, &pt)?;
            let passes = chk.mult_ok();
            let notes = match l {
                Some(l) => format!("case {case}, ℓ = {l}"),
                None if case == 3 => "case 3, no coincident pair".to_string(),
                None => format!("case {case}"),
            };
            let rep = chk.report(CertCase::Gcd1, &field, (1..nu).collect(), &pt, passes, notes);
            if passes {
                return Ok(rep);
            }
            first.get_or_insert(rep);
        }
    }
    Ok(first.unwrap())
}

/// (a, b, c) with a X_1^2 + b X_1 + c the result of solving the first Z
/// equation for X_0 and clearing the denominator in the second.
pub fn eliminate_gcd2(ctx: &Arc<FieldCtx>, n: u32, beta: FqnElem) -> Result<(MvPoly, MvPoly, MvPoly)> {
    let z = build_z_system(ctx, n, 1, 3, beta)?;
    let (num, den) = z[0].solve_linear(0)?;
    let r = z[1].substitute_rational(0, &num, &den)?;
    let d = r.degree_in(1);
    if d > 2 {
        return Err(Error::DegreeTooHigh(d));
    }
    Ok((r.coeff_in(1, 2), r.coeff_in(1, 1), r.coeff_in(1, 0)))
}

fn check_gcd2_beta(ctx: &FieldCtx, n: u32, beta: FqnElem) -> Result<()> {
    if ctx.n() != n {
        return Err(Error::PreconditionViolated(format!("needs n = {n}")));
    }
    if beta.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !ctx.in_subfield(beta, 2)? {
        return Err(Error::NotInSubfield(2));
    }
    Ok(())
}

/// Q = (X_2, .., X_5) = (0, ξ, ξ^q, 0) for x^q + α x^{q^3} over F_{q^6}, β = α^{1+q^2+q^4}.
pub fn n6_gcd2_certificate(ctx: &Arc<FieldCtx>, beta: FqnElem) -> Result<CertificateReport> {
    check_gcd2_beta(ctx, 6, beta)?;
    let (a, b, c) = eliminate_gcd2(ctx, 6, beta)?;
    let xi = ctx.find_normal_element();
    let pt = [FqnElem::ZERO, FqnElem::ZERO, FqnElem::ZERO, xi, ctx.frobenius(xi, 1), FqnElem::ZERO];
    let chk = PointCheck::new(&a, &b, &c, &pt)?;
    let passes = chk.simple_ok();
    Ok(chk.report(CertCase::N6Gcd2, ctx, (2..6).collect(), &pt, passes, "ξ normal in F_{q^6}".into()))
}

/// Sweeps Q = (u_2, β^q u_5 u_6/(β^q u_5 + u_5 - u_6), 0, u_5, u_6, 0) over
/// the first `sweep` powers of the generator, for x^q + α x^{q^3} over F_{q^8}.
pub fn n8_gcd2_certificate(ctx: &Arc<FieldCtx>, beta: FqnElem, sweep: usize) -> Result<CertificateReport> {
    check_gcd2_beta(ctx, 8, beta)?;
    let (a, b, c) = eliminate_gcd2(ctx, 8, beta)?;
    let bq = ctx.frobenius(beta, 1);
    let vals: Vec<FqnElem> = (0..sweep as u128).map(|k| ctx.pow(ctx.generator(), k)).collect();
    let mut cands = Vec::with_capacity(sweep.pow(3));
    for &u2 in &vals {
        for &u5 in &vals {
            for &u6 in &vals {
                cands.push((u2, u5, u6));
            }
        }
    }
    let total = cands.len();
    let found = cands.par_iter().find_map_first(|&(u2, u5, u6)| {
        let den = ctx.sub(ctx.add(ctx.mul(bq, u5), u5), u6);
        if den.is_zero() {
            return None;
        }
        let x3 = ctx.div(ctx.mul(ctx.mul(bq, u5), u6), den).ok()?;
        let pt = [FqnElem::ZERO, FqnElem::ZERO, u2, x3, FqnElem::ZERO, u5, u6, FqnElem::ZERO];
        let chk = PointCheck::new(&a, &b, &c, &pt).ok()?;
        chk.simple_ok().then_some((pt, chk, (u2, u5, u6)))
    });
    match found {
        Some((pt, chk, (u2, u5, u6))) => {
            let notes = format!(
                "u2 = {}, u5 = {}, u6 = {}",
                ctx.format_elem(u2),
                ctx.format_elem(u5),
                ctx.format_elem(u6)
            );
            Ok(chk.report(CertCase::N8Gcd2, ctx, (2..8).collect(), &pt, true, notes))
        }
        None => Err(Error::SearchExhausted(total)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CPolyReport {
    pub case: CertCase,
    pub s_homogeneous: bool,
    pub s_degree: Option<u32>,
    /// deg_{X_i} S for i = 1, 3, 4, 5, 6.
    pub s_var_degrees: Vec<u32>,
    pub c_degree: Option<u32>,
    pub leading_part_matches: bool,
    pub x4_divides_t: bool,
    pub r1_matches: bool,
    pub r2_matches: bool,
    pub passes: bool,
    pub c_text: String,
}

fn check_gcd4_beta(ctx: &FieldCtx, beta: FqnElem) -> Result<()> {
    if ctx.n() != 8 {
        return Err(Error::PreconditionViolated("needs n = 8".into()));
    }
    if ctx.p() != 2 {
        return Err(Error::PreconditionViolated("needs q even".into()));
    }
    if beta.is_zero() || beta == FqnElem::ONE {
        return Err(Error::BetaDegenerate);
    }
    if !ctx.in_subfield(beta, 4)? {
        return Err(Error::NotInSubfield(4));
    }
    Ok(())
}

/// Σ c_(e) X^e from a list of (coefficient, exponent pairs) in 8 variables.
fn poly8(ctx: &Arc<FieldCtx>, terms: &[(FqnElem, &[usize])]) -> MvPoly {
    let mut p = MvPoly::zero(ctx, 8);
    for &(c, vars) in terms {
        let mut m = MvPoly::constant(ctx, 8, c);
        for &v in vars {
            m = &m * &MvPoly::var(ctx, 8, v);
        }
        p = &p + &m;
    }
    p
}

/// Eliminates X_0, X_2, X_7 from the n = 8, (I, J) = (1, 5) system and
/// returns c = S(0, X_3, .., X_6) with its structural checks.
pub fn n8_gcd4_c_poly(ctx: &Arc<FieldCtx>, beta: FqnElem) -> Result<(MvPoly, CPolyReport)> {
    check_gcd4_beta(ctx, beta)?;
    let z = build_z_system(ctx, 8, 1, 5, beta)?;
    let (n0, d0) = z[0].solve_linear(0)?;
    let (n2, d2) = z[1].solve_linear(2)?;
    let e2 = z[2].substitute_rational(2, &n2, &d2)?;
    if e2.degree_in(7) != 1 {
        return Err(Error::EliminationDegenerate);
    }
    let (r1, r2) = (e2.coeff_in(7, 1), e2.coeff_in(7, 0));
    let s = z[3].substitute_rational(0, &n0, &d0)?.substitute_rational(7, &r2.neg(), &r1)?;
    let c = s.specialize(&[(1, FqnElem::ZERO)])?;

    let b: Vec<FqnElem> = (0..4).map(|k| ctx.frobenius(beta, k)).collect();
    let one = FqnElem::ONE;
    let add = |x, y| ctx.add(x, y);
    let b12 = ctx.mul(b[1], b[2]);
    let want_r1 = poly8(
        ctx,
        &[
            (add(b12, b[1]), &[1, 3]),
            (add(b12, one), &[1, 6]),
            (add(add(b12, b[1]), add(b[2], one)), &[3, 6]),
            (add(b12, b[2]), &[6, 6]),
            (add(b[1], one), &[1, 5]),
            (add(b[1], b[2]), &[5, 6]),
            (add(b[2], one), &[3, 5]),
        ],
    );
    let want_r2 = poly8(
        ctx,
        &[
            (add(b12, b[2]), &[1, 3, 5]),
            (add(add(b12, b[1]), add(b[2], one)), &[1, 5, 6]),
            (add(b12, one), &[3, 5, 6]),
            (add(b12, b[1]), &[5, 6, 6]),
            (add(b[1], b[2]), &[1, 3, 6]),
            (add(b[1], one), &[3, 6, 6]),
            (add(b[2], one), &[1, 6, 6]),
        ],
    );
    let lead = poly8(
        ctx,
        &[(add(b12, one), &[3, 5]), (add(b12, b[1]), &[5, 6]), (add(b[1], one), &[3, 6])],
    ) * poly8(ctx, &[(add(b[3], one), &[3, 5, 6])]);
    let t = &c - &lead;
    let rep = CPolyReport {
        case: CertCase::N8Gcd4,
        s_homogeneous: s.is_homogeneous(),
        s_degree: s.total_degree(),
        s_var_degrees: [1, 3, 4, 5, 6].iter().map(|&v| s.degree_in(v)).collect(),
        c_degree: c.total_degree(),
        leading_part_matches: c.specialize(&[(4, FqnElem::ZERO)])? == lead,
        x4_divides_t: t.specialize(&[(4, FqnElem::ZERO)])?.is_zero(),
        r1_matches: r1 == want_r1,
        r2_matches: r2 == want_r2,
        passes: false,
        c_text: c.to_text(),
    };
    let passes = rep.s_homogeneous
        && rep.s_degree == Some(5)
        && rep.s_var_degrees.iter().all(|&d| d <= 2)
        && rep.c_degree == Some(5)
        && rep.leading_part_matches
        && rep.x4_divides_t
        && rep.r1_matches
        && rep.r2_matches;
    Ok((c, CPolyReport { passes, ..rep }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialDivision {
    pub family: String,
    pub tried: usize,
    /// Parameters of the first candidate found to divide, if any.
    pub divisor_params: Option<Vec<String>>,
}

/// Tries the seven low-degree candidate factors of c_* = c(X_4 = 1): the three
/// linear ones with u over `linear_sweep`, the four quadrics with their
/// parameters over `quad_sweep`.
pub fn n8_gcd4_trial_division(
    c: &MvPoly,
    beta: FqnElem,
    linear_sweep: &[FqnElem],
    quad_sweep: &[FqnElem],
) -> Result<Vec<TrialDivision>> {
    let ctx = c.ctx().clone();
    let cs = c.specialize(&[(4, FqnElem::ONE)])?;
    let x = |i| MvPoly::var(&ctx, 8, i);
    let k = |v: FqnElem| MvPoly::constant(&ctx, 8, v);
    let fmt = |v: &[FqnElem]| v.iter().map(|&e| ctx.format_elem(e)).collect::<Vec<_>>();
    let mut out = Vec::new();

    for (name, v) in [("X3 + u1", 3usize), ("X5 + u2", 5), ("X6 + u3", 6)] {
        let hit = linear_sweep.par_iter().find_map_first(|&u| {
            let r = cs.specialize(&[(v, ctx.neg(u))]).ok()?;
            r.is_zero().then(|| fmt(&[u]))
        });
        out.push(TrialDivision { family: name.into(), tried: linear_sweep.len(), divisor_params: hit });
    }

    let bq = ctx.frobenius(beta, 1);
    let bqq = ctx.frobenius(beta, 2);
    let b12 = ctx.mul(bq, bqq);
    let mut quads: Vec<[FqnElem; 4]> = Vec::with_capacity(quad_sweep.len().pow(4));
    for &a in quad_sweep {
        for &b in quad_sweep {
            for &c in quad_sweep {
                for &d in quad_sweep {
                    quads.push([a, b, c, d]);
                }
            }
        }
    }
    // (family, variable solved for, builder of (num, den) from the four parameters)
    type Builder<'a> = Box<dyn Fn(&[FqnElem]) -> (MvPoly, MvPoly) + Sync + 'a>;
    let fams: Vec<(&str, usize, Builder)> = vec![
        (
            "X3X5 + u4X3 + u5X5 + u6X6 + u7",
            3,
            Box::new(|u| ((&(&(&x(5) * &k(u[1])) + &(&x(6) * &k(u[2]))) + &k(u[3])).neg(), &x(5) + &k(u[0]))),
        ),
        (
            "X3X6 + u8X3 + u9X5 + u10X6 + u11",
            3,
            Box::new(|u| ((&(&(&x(5) * &k(u[1])) + &(&x(6) * &k(u[2]))) + &k(u[3])).neg(), &x(6) + &k(u[0]))),
        ),
        (
            "X5X6 + u12X3 + u13X5 + u14X6 + u15",
            5,
            Box::new(|u| ((&(&(&x(3) * &k(u[0])) + &(&x(6) * &k(u[2]))) + &k(u[3])).neg(), &x(6) + &k(u[1]))),
        ),
        (
            "bracket + u16X3 + u17X5 + u18X6 + u19",
            6,
            Box::new(|u| {
                let num = &(&(&(&(&x(3) * &x(5)) * &k(ctx.add(b12, FqnElem::ONE))) + &(&x(3) * &k(u[0]))) + &(&x(5) * &k(u[1])))
                    + &k(u[3]);
                let den = &(&(&x(5) * &k(ctx.add(b12, bq))) + &(&x(3) * &k(ctx.add(bq, FqnElem::ONE)))) + &k(u[2]);
                (num.neg(), den)
            }),
        ),
    ];
    for (name, v, build) in &fams {
        let hit = quads.par_iter().find_map_first(|u| {
            let (num, den) = build(u);
            let r = cs.substitute_rational(*v, &num, &den).ok()?;
            r.is_zero().then(|| fmt(u))
        });
        out.push(TrialDivision { family: name.to_string(), tried: quads.len(), divisor_params: hit });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gcd3Report {
    pub case: CertCase,
    /// Coefficients (constant, linear, quadratic).
    pub p1: [String; 3],
    pub p2: [String; 3],
    pub delta: String,
    pub delta_in_fq: bool,
    /// Δ-factorization identity (odd q only).
    pub identity_holds: Option<bool>,
    /// Value of the absolute trace in the even-q test, when defined.
    pub trace_value: Option<String>,
    /// Roots of p1 and p2 lie in F_{q^3}, by the Δ / trace test.
    pub a_b_in_fq3: bool,
    /// Distinct roots of p1 and p2 in F_{q^3}, counted directly.
    pub roots_p1: usize,
    pub roots_p2: usize,
}

/// p_1, p_2 and the F_{q^3}-rationality test of their roots, x^q + α x^{q^4}
/// over F_{q^6}, β = α^{1+q^3}.
pub fn n6_gcd3_discriminants(ctx: &Arc<FieldCtx>, beta: FqnElem) -> Result<Gcd3Report> {
    if ctx.n() != 6 {
        return Err(Error::PreconditionViolated("needs n = 6".into()));
    }
    if beta.is_zero() || beta == FqnElem::ONE {
        return Err(Error::BetaDegenerate);
    }
    if !ctx.in_subfield(beta, 3)? {
        return Err(Error::NotInSubfield(3));
    }
    let k = ctx;
    let q = k.q() as u128;
    let one = FqnElem::ONE;
    let pw = |x, e: u128| k.pow(x, e);
    let bm1 = k.sub(beta, one);
    let two = k.from_int(2);
    let lead = k.mul(bm1, k.frobenius(bm1, 1));
    let p1 = [
        k.mul(k.frobenius(beta, 1), k.frobenius(bm1, 2)),
        k.add(
            k.sub(k.add(k.sub(pw(beta, 1 + q), pw(beta, 1 + q * q)), pw(beta, q + q * q)), k.mul(two, pw(beta, q))),
            one,
        ),
        lead,
    ];
    let p2 = [
        k.mul(beta, k.frobenius(bm1, 2)),
        k.add(k.sub(k.sub(k.add(pw(beta, 1 + q), pw(beta, 1 + q * q)), pw(beta, q + q * q)), k.mul(two, beta)), one),
        lead,
    ];
    let tr = |x| k.trace_between(x, 3, 1).unwrap();
    let nm = |x| k.norm_between(x, 3, 1).unwrap();
    let nb = nm(beta);
    let delta = k.add(
        k.sub(tr(pw(beta, 2 + 2 * q)), k.mul(two, k.add(k.mul(nb, tr(beta)), tr(pw(beta, 1 + q))))),
        k.add(k.mul(k.from_int(8), nb), one),
    );
    let delta_in_fq = k.in_subfield(delta, 1)?;
    let root_count = |p: &[FqnElem; 3]| -> Result<usize> {
        let b = k.div(p[1], p[2])?;
        let c = k.div(p[0], p[2])?;
        k.quadratic_root_count(b, c, 3)
    };
    let (roots_p1, roots_p2) = (root_count(&p1)?, root_count(&p2)?);
    let (identity_holds, trace_value, a_b_in_fq3) = if k.p() == 2 {
        // the squared linear coefficient of p_1: (e_2(β) + 1)^2 = Tr(β^{2+2q}) + 1
        let den = k.add(tr(pw(beta, 2 + 2 * q)), one);
        if den.is_zero() {
            (None, None, false)
        } else {
            let v = k.abs_trace(k.div(k.mul(beta, nm(bm1)), den)?, 3)?;
            (None, Some(k.format_elem(v)), v.is_zero())
        }
    } else {
        let r = k.div(beta, bm1)?;
        let s = k.sub(tr(r), one);
        let rhs = k.mul(k.mul(nm(bm1), nm(bm1)), k.sub(k.mul(s, s), k.mul(k.from_int(4), nm(r))));
        let square = delta_in_fq && !delta.is_zero() && is_square_in_fq(k, delta);
        (Some(rhs == delta), None, square)
    };
    let f = |p: &[FqnElem; 3]| [k.format_elem(p[0]), k.format_elem(p[1]), k.format_elem(p[2])];
    Ok(Gcd3Report {
        case: CertCase::N6Gcd3,
        p1: f(&p1),
        p2: f(&p2),
        delta: k.format_elem(delta),
        delta_in_fq,
        identity_holds,
        trace_value,
        a_b_in_fq3,
        roots_p1,
        roots_p2,
    })
}

fn is_square_in_fq(k: &FieldCtx, x: FqnElem) -> bool {
    // x in F_q^*: a square iff x^{(q-1)/2} = 1
    k.pow(x, (k.q() as u128 - 1) / 2) == FqnElem::ONE
}

/// Both conditions on β = α^{1+q^4} for x^q + α x^{q^5} over F_{q^8}.
pub fn n8_gcd4_classification(ctx: &FieldCtx, beta: FqnElem) -> Result<bool> {
    if ctx.n() % 4 != 0 {
        return Err(Error::BadTowerLevel { m: 4, n: ctx.n() });
    }
    if beta.is_zero() || beta == FqnElem::ONE {
        return Err(Error::BetaDegenerate);
    }
    if !ctx.in_subfield(beta, 4)? {
        return Err(Error::NotInSubfield(4));
    }
    let k = ctx;
    let one = FqnElem::ONE;
    let b: Vec<FqnElem> = (0..4).map(|i| k.frobenius(beta, i)).collect();
    let m: Vec<FqnElem> = b.iter().map(|&x| k.sub(x, one)).collect();
    let b12 = k.mul(b[1], b[2]);
    let lhs1 = k.neg(k.div(k.add(b[0], b[3]), k.mul(m[0], m[3]))?);
    let rhs1 = k.div(k.add(b12, one), k.mul(m[1], m[2]))?;
    let sq = |x| k.mul(x, x);
    let lhs2 = k.div(sq(k.sub(b[3], b[0])), sq(k.mul(m[0], m[3])))?;
    let rhs2 = k.div(sq(k.sub(b12, one)), sq(k.mul(m[1], m[2])))?;
    Ok(lhs1 == rhs1 && lhs2 == rhs2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_selection() {
        assert_eq!(gcd1_case(6, 1, 2), 3);
        assert_eq!(gcd1_case(5, 1, 2), 2);
        assert_eq!(gcd1_case(5, 2, 3), 1);
        assert_eq!(gcd1_case(6, 2, 3), 1);
    }

    #[test]
    fn gcd1_small() {
        let k = make_field(3, 1, 5).unwrap();
        let a = k.from_int(2);
        for (i, j) in [(1, 2), (1, 3), (2, 4)] {
            let r = gcd1_certificate(&k, i, j, a);
            assert!(r.as_ref().is_ok_and(|r| r.passes), "({i},{j}) {r:?}");
        }
        assert_eq!(gcd1_certificate(&k, 1, 3, a).unwrap().notes, "case 2");
        let k6 = make_field(3, 1, 6).unwrap();
        let r = gcd1_certificate(&k6, 1, 2, a).unwrap();
        assert!(r.passes);
        assert_eq!(r.notes, "case 3, no coincident pair");
    }

    #[test]
    fn n6_gcd2_point() {
        let k = make_field(3, 1, 6).unwrap();
        for beta in k.subfield_elements(2).unwrap().into_iter().skip(1) {
            let r = n6_gcd2_certificate(&k, beta).unwrap();
            assert!(r.passes, "{r:?}");
            assert_eq!(r.m_ac, 1);
        }
    }

    #[test]
    fn gcd2_golden_n6() {
        // a and c of the displayed listing, with the opposite overall sign
        let k = make_field(3, 1, 6).unwrap();
        let beta = k.subfield_elements(2).unwrap()[2];
        let (a, _b, c) = eliminate_gcd2(&k, 6, beta).unwrap();
        let cs = [("b", beta), ("bq", k.frobenius(beta, 1))];
        let pa = MvPoly::parse_expr(&k, 6, "(1-b)*X3^2*X5+(b+bq-1)*X3*X4*X5+(b-bq)*X3*X5^2-b*X4*X5^2-X3^2*X4+X3*X4^2+(b*X3^2-(b+bq-1)*X3*X4+(b-bq+1)*(X4-X3)*X5+bq*X5^2-X4^2)*X2+bq*(X4-X5)*X2^2", &cs).unwrap();
        let pc = MvPoly::parse_expr(&k, 6, "bq*X3^2*X4*X5*(X4-X5)+((b-bq+1)*(X4-X3)*X3*X4*X5+(b+bq-1)*X3*X4*X5^2-b*X4^2*X5^2-bq*X3^2*X4^2+X3^2*X5^2)*X2+(b*X3^2*X4-(b-bq)*X3*X4^2-(b+bq-1)*X3*X4*X5+b*X4^2*X5-X3*X5^2-X4^2*X5+X4*X5^2)*X2^2", &cs).unwrap();
        assert_eq!(a, pa.neg());
        assert_eq!(c, pc.neg());
    }

    #[test]
    fn n8_gcd4_structure() {
        let k = make_field(2, 1, 8).unwrap();
        let beta = k.subfield_elements(4).unwrap()[3];
        let (c, rep) = n8_gcd4_c_poly(&k, beta).unwrap();
        assert!(rep.passes, "{rep:?}");
        assert!(c.is_homogeneous());
        assert_eq!(n8_gcd4_c_poly(&make_field(3, 1, 8).unwrap(), FqnElem::ONE).unwrap_err(), Error::PreconditionViolated("needs q even".into()));
    }

    #[test]
    fn gcd3_identity_q3() {
        let k = make_field(3, 1, 6).unwrap();
        for beta in k.subfield_elements(3).unwrap() {
            if beta.is_zero() || beta == FqnElem::ONE {
                continue;
            }
            let r = n6_gcd3_discriminants(&k, beta).unwrap();
            assert!(r.delta_in_fq);
            assert_eq!(r.identity_holds, Some(true));
        }
    }

    #[test]
    fn gcd3_trace_test_matches_roots_q4() {
        let k = make_field(2, 2, 6).unwrap();
        for beta in k.subfield_elements(3).unwrap() {
            if beta.is_zero() || beta == FqnElem::ONE {
                continue;
            }
            let r = n6_gcd3_discriminants(&k, beta).unwrap();
            assert_eq!(r.a_b_in_fq3, r.roots_p1 == 2 && r.roots_p2 == 2, "β = {}", k.format_elem(beta));
        }
    }

    #[test]
    fn gcd4_minus_one() {
        let k = make_field(3, 1, 4).unwrap();
        assert!(n8_gcd4_classification(&k, k.from_int(-1)).unwrap());
        assert_eq!(n8_gcd4_classification(&k, FqnElem::ONE), Err(Error::BetaDegenerate));
    }
}
