//! Equivalence of the CMPZ graphs δx^{q^s} + x^{q^{s+n/2}} and the class count for n = 6.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{make_field, FieldCtx, FqnElem};
use crate::gcd;
use crate::scatter::{cmpz6_criterion, BinomialScanner};
#[cfg(test)]
use crate::scatter::binomial_bruteforce;

fn half_norm(ctx: &FieldCtx, d: FqnElem) -> Result<FqnElem> {
    ctx.norm(d, ctx.n() / 2)
}

/// x ↦ x^{p^j} for j < e·n/2: the automorphisms of F_{q^{n/2}}.
fn sigmas(ctx: &FieldCtx) -> impl Iterator<Item = u32> {
    0..ctx.e() * ctx.n() / 2
}

fn check_args(ctx: &FieldCtx, s: u32, d: FqnElem) -> Result<()> {
    let n = ctx.n();
    if n % 2 != 0 {
        return Err(Error::PreconditionViolated("n must be even".into()));
    }
    if d.is_zero() {
        return Err(Error::PreconditionViolated("δ must be nonzero".into()));
    }
    if gcd(s as u64, n as u64) != 1 {
        return Err(Error::PreconditionViolated(format!("gcd(n, s) = gcd({n}, {s}) != 1")));
    }
    if half_norm(ctx, d)? == FqnElem::ONE {
        return Err(Error::PreconditionViolated("N_{q^n/q^{n/2}}(δ) = 1".into()));
    }
    Ok(())
}

/// Both subspaces of CMPZ shape; equivalent iff the half norms agree up to an
/// automorphism (s1 = s2) or are inverse up to one (s1 + s2 = n).
pub fn cmpz_equivalent(ctx: &FieldCtx, s1: u32, d1: FqnElem, s2: u32, d2: FqnElem) -> Result<bool> {
    check_args(ctx, s1, d1)?;
    check_args(ctx, s2, d2)?;
    let (n1, n2) = (half_norm(ctx, d1)?, half_norm(ctx, d2)?);
    let n = ctx.n();
    if s1 == s2 && sigmas(ctx).any(|j| ctx.frobenius_p(n1, j) == n2) {
        return Ok(true);
    }
    if s1 + s2 == n && sigmas(ctx).any(|j| ctx.mul(n2, ctx.frobenius_p(n1, j)) == FqnElem::ONE) {
        return Ok(true);
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRow {
    pub delta: String,
    pub norm: String,
    pub orbit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmpzClassReport {
    pub q: u64,
    pub n: u32,
    pub scattered_deltas: usize,
    /// Classes with equal half norms (σ = id); this is the count that tracks the formula.
    pub class_count: usize,
    /// Classes when σ ranges over all automorphisms of F_{q^3}.
    pub sigma_orbit_count: usize,
    pub formula_value: u64,
    pub class_count_matches: bool,
    pub sigma_orbit_count_matches: bool,
    /// Minimal encoding in each σ = id class.
    pub class_representatives: Vec<String>,
    /// Brute-force disagreements with the closed-form condition, if cross-checked.
    pub bruteforce_disagreements: Option<usize>,
    #[serde(skip)]
    pub orbit_table: Vec<OrbitRow>,
}

impl CmpzClassReport {
    /// delta,norm,orbit with the σ = id class index.
    pub fn orbit_csv(&self) -> String {
        let mut s = String::from("delta,norm,orbit\n");
        for r in &self.orbit_table {
            s.push_str(&format!("{},{},{}\n", r.delta, r.norm, r.orbit));
        }
        s
    }
}

pub fn cmpz6_formula(q: u64) -> u64 {
    (q * q + q + 1) * q.saturating_sub(2) / 2
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Scattered x^q + δ x^{q^4} over F_{q^6}, partitioned into equivalence classes.
pub fn enumerate_cmpz6_classes(q: u64, crosscheck: bool) -> Result<CmpzClassReport> {
    let (p, e) = crate::field::prime_power(q)?;
    let ctx = make_field(p, e, 6)?;
    ctx.check_scan_cap()?;
    enumerate_in(&ctx, crosscheck)
}

fn enumerate_in(ctx: &Arc<FieldCtx>, crosscheck: bool) -> Result<CmpzClassReport> {
    let codes: Vec<u64> = (1..ctx.size()).collect();
    // (δ, N(δ), closed-form verdict, brute verdict)
    let scanner = || if crosscheck { BinomialScanner::new(ctx, 1, 4).ok() } else { None };
    let rows: Vec<(FqnElem, FqnElem, bool, Option<bool>)> = codes
        .par_iter()
        .map_init(scanner, |sc, &c| {
            let d = ctx.elem_unchecked(c);
            let nd = half_norm(ctx, d).ok()?;
            if nd == FqnElem::ONE {
                return None;
            }
            let pred = cmpz6_criterion(ctx, d).ok()?.predicted_scattered;
            let brute = sc.as_mut().map(|s| s.verdict(d).scattered);
            (pred || brute == Some(true)).then_some((d, nd, pred, brute))
        })
        .flatten()
        .collect();
    let disagreements = crosscheck.then(|| rows.iter().filter(|r| r.3 != Some(r.2)).count());
    let scattered: Vec<(FqnElem, FqnElem)> = rows.iter().filter(|r| r.2).map(|r| (r.0, r.1)).collect();

    // one representative per norm value; the σ = id relation is equal norm
    let mut by_norm: BTreeMap<u64, Vec<FqnElem>> = BTreeMap::new();
    for &(d, nd) in &scattered {
        by_norm.entry(nd.code()).or_default().push(d);
    }
    let reps: Vec<FqnElem> = by_norm.values().map(|v| *v.iter().min_by_key(|d| d.code()).unwrap()).collect();
    let m = reps.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .into_par_iter()
        .flat_map_iter(|a| {
            let reps = &reps;
            ((a + 1)..m).filter_map(move |b| cmpz_equivalent(ctx, 1, reps[a], 1, reps[b]).ok().filter(|&x| x).map(|_| (a, b)))
        })
        .collect();
    let mut uf = UnionFind((0..m).collect());
    for (a, b) in pairs {
        uf.union(a, b);
    }
    let sigma_orbits = (0..m).filter(|&i| uf.find(i) == i).count();

    let mut orbit_table = Vec::with_capacity(scattered.len());
    let class_of: BTreeMap<u64, usize> = by_norm.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut sorted = scattered.clone();
    sorted.sort_by_key(|x| x.0.code());
    for (d, nd) in sorted {
        orbit_table.push(OrbitRow { delta: ctx.format_elem(d), norm: ctx.format_elem(nd), orbit: class_of[&nd.code()] });
    }
    let formula = cmpz6_formula(ctx.q());
    Ok(CmpzClassReport {
        q: ctx.q(),
        n: 6,
        scattered_deltas: scattered.len(),
        class_count: m,
        sigma_orbit_count: sigma_orbits,
        formula_value: formula,
        class_count_matches: m as u64 == formula,
        sigma_orbit_count_matches: sigma_orbits as u64 == formula,
        class_representatives: reps.iter().map(|&d| ctx.format_elem(d)).collect(),
        bruteforce_disagreements: disagreements,
        orbit_table,
    })
}
