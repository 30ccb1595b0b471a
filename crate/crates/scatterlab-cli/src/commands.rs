use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use scatterlab::equiv::enumerate_cmpz6_classes;
use scatterlab::field::{make_field_with, prime_power, FieldOptions};
use scatterlab::linpoly::{normalize_binomial, Binomial};
use scatterlab::mvpoly::{
    gcd1_certificate, n6_gcd2_certificate, n6_gcd3_discriminants, n8_gcd2_certificate, n8_gcd4_c_poly,
    n8_gcd4_classification,
};
use scatterlab::scatter::{
    binomial_bruteforce, classify_binomial, is_scattered_curve_criterion, lang_weil_lower_bound, BinomialScanner,
    CurveTable, ScatterVerdict,
};
use scatterlab::{Error, FieldCtx, FqnElem};

use crate::cache::Cache;
use crate::output::{self, Header};
use crate::{BoundArgs, CertArgs, CertKind, CheckArgs, ClassesArgs, CliError, Common, Family, FieldArgs, Format, ScanArgs};

type Res<T> = Result<T, CliError>;

fn init_pool(c: &Common) {
    if let Some(j) = c.jobs {
        // a second call only fails if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
}

fn char_and_e(f: &FieldArgs) -> Res<(u64, u32)> {
    match (f.p, f.q) {
        (Some(p), None) => Ok((p, f.e)),
        (None, Some(q)) => Ok(prime_power(q)?),
        (Some(p), Some(q)) => {
            if p.checked_pow(f.e) == Some(q) {
                Ok((p, f.e))
            } else {
                Err(CliError::Usage(format!("-q {q} is not {p}^{}", f.e)))
            }
        }
        (None, None) => Err(CliError::Usage("give -p (and -e) or -q".into())),
    }
}

fn options(cap: Option<u64>) -> FieldOptions {
    let mut o = FieldOptions::default();
    if let Some(c) = cap {
        o.scan_cap = c;
    }
    o
}

fn size_of(p: u64, degree: u32) -> Option<u64> {
    p.checked_pow(degree)
}

/// Refuses oversized scans before the field (and its tables) is built.
fn scan_field(p: u64, e: u32, n: u32, cap: Option<u64>) -> Res<Arc<FieldCtx>> {
    let o = options(cap);
    match size_of(p, e * n) {
        Some(s) if s <= o.scan_cap => Ok(make_field_with(p, e, n, o)?),
        s => Err(Error::ScanCapExceeded { size: s.unwrap_or(u64::MAX), cap: o.scan_cap }.into()),
    }
}

fn parse_elem(ctx: &FieldCtx, s: &str) -> Res<FqnElem> {
    Ok(ctx.parse_elem(s)?)
}

fn verdict_json(ctx: &FieldCtx, v: &ScatterVerdict) -> Value {
    json!({
        "scattered": v.scattered,
        "linear_set_size": v.linear_set_size,
        "max_size": v.max_size,
        "method": v.method,
        "witness": v.witness.map(|(x, y)| [ctx.format_elem(x), ctx.format_elem(y)]),
    })
}

fn csv_only_for(cmd: &str) -> CliError {
    CliError::Usage(format!("csv output is not available for {cmd}"))
}

// ---- check ----

pub fn check(a: CheckArgs, argv: Vec<String>) -> Res<()> {
    init_pool(&a.common);
    let started = Instant::now();
    if a.common.format == Format::Csv {
        return Err(csv_only_for("check"));
    }
    let (p, e) = char_and_e(&a.field)?;
    let ctx = scan_field(p, e, a.n, a.common.cap)?;
    let alpha = parse_elem(&ctx, &a.alpha)?;
    let (nb, transforms) = normalize_binomial(&ctx, a.i, a.j, alpha)?;
    let raw = Binomial::new(a.i, a.j, alpha, a.n);
    let brute_target = if a.i < a.n && a.j < a.n { raw } else { nb };
    let brute = binomial_bruteforce(&ctx, &brute_target)?;
    let curve = is_scattered_curve_criterion(&ctx, &nb);
    let class = classify_binomial(&ctx, &nb);
    let rec = json!({
        "kind": "check",
        "input": raw.text(&ctx),
        "normalized": {
            "i": nb.i,
            "j": nb.j,
            "alpha": ctx.format_elem(nb.alpha),
            "text": nb.text(&ctx),
            "transforms": transforms,
        },
        "bruteforce": verdict_json(&ctx, &brute),
        "curve": match &curve {
            Ok(v) => verdict_json(&ctx, v),
            Err(e) => json!({"error": e.to_string()}),
        },
        "classification": match &class {
            Ok(c) => serde_json::to_value(c).unwrap(),
            Err(e) => json!({"error": e.to_string()}),
        },
        "agree_curve_bruteforce": curve.as_ref().ok().map(|v| v.scattered == brute.scattered),
        "agree_classification_bruteforce": class.as_ref().ok().map(|c| c.predicted_scattered == brute.scattered),
    });
    let h = Header { command: "check", argv: &argv, config: &a, field: Some(ctx.header()) };
    output::jsonl(&h, started, "off", &[rec])?;
    Ok(())
}

// ---- scan ----

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
struct Rec {
    kind: String,
    i: u32,
    j: u32,
    alpha: String,
    bruteforce: bool,
    linear_set_size: Option<u64>,
    curve: Option<bool>,
    predicted: Option<bool>,
    clause: Option<String>,
    below_threshold: Option<bool>,
    witness: Option<[String; 2]>,
    half_norm: Option<String>,
}

const REC_COLUMNS: &[&str] = &[
    "i",
    "j",
    "alpha",
    "bruteforce",
    "linear_set_size",
    "curve",
    "predicted",
    "clause",
    "below_threshold",
    "witness",
    "half_norm",
];

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn family_pairs(family: Family, n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    match family {
        Family::Lp => {
            for s in 1..n {
                if 2 * s < n && gcd(s, n) == 1 {
                    out.push((s, n - s));
                }
            }
        }
        Family::Cmpz => {
            if n % 2 == 0 {
                for s in 1..n / 2 {
                    if 4 * s <= n && gcd(s, n) == 1 {
                        out.push((s, s + n / 2));
                    }
                }
            }
        }
        Family::AllBinomials => {
            for i in 1..n {
                for j in i + 1..n {
                    if Binomial::new(i, j, FqnElem::ONE, n).normalized {
                        out.push((i, j));
                    }
                }
            }
        }
    }
    out
}

fn scan_alphas(ctx: &FieldCtx, list: &str) -> Res<(Vec<FqnElem>, Value)> {
    if list.trim() == "all" {
        return Ok(((1..ctx.size()).map(|c| ctx.elem_unchecked(c)).collect(), json!("all")));
    }
    let mut set = BTreeSet::new();
    for t in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let x = parse_elem(ctx, t)?;
        if x.is_zero() {
            return Err(CliError::Usage("alpha must be nonzero".into()));
        }
        set.insert(x);
    }
    let v: Vec<FqnElem> = set.into_iter().collect();
    let key = json!(v.iter().map(|x| x.code()).collect::<Vec<_>>());
    Ok((v, key))
}

fn scan_block(ctx: &Arc<FieldCtx>, family: Family, i: u32, j: u32, alphas: &[FqnElem]) -> Res<Vec<Value>> {
    let n = ctx.n();
    let table = CurveTable::new(ctx, i, j).ok();
    let with_half = family == Family::Cmpz && n % 2 == 0;
    let recs: Vec<Res<Rec>> = alphas
        .par_iter()
        .map_init(
            || BinomialScanner::new(ctx, i, j).ok(),
            |sc, &alpha| {
                let b = Binomial::new(i, j, alpha, n);
                let brute = match sc {
                    Some(s) => s.verdict(alpha),
                    None => binomial_bruteforce(ctx, &b)?,
                };
                let curve = match &table {
                    Some(t) => Some(t.verdict(alpha)?.scattered),
                    None => None,
                };
                let class = classify_binomial(ctx, &b).ok();
                Ok(Rec {
                    kind: "record".into(),
                    i,
                    j,
                    alpha: ctx.format_elem(alpha),
                    bruteforce: brute.scattered,
                    linear_set_size: brute.linear_set_size,
                    curve,
                    predicted: class.as_ref().map(|c| c.predicted_scattered),
                    clause: class.as_ref().map(|c| serde_json::to_value(c.clause).unwrap().as_str().unwrap().to_string()),
                    below_threshold: class.as_ref().map(|c| c.below_threshold),
                    witness: brute.witness.map(|(x, y)| [ctx.format_elem(x), ctx.format_elem(y)]),
                    half_norm: if with_half { Some(ctx.format_elem(ctx.norm(alpha, n / 2)?)) } else { None },
                })
            },
        )
        .collect();
    recs.into_iter().map(|r| r.map(|r| serde_json::to_value(r).unwrap())).collect()
}

#[derive(Debug, Serialize)]
struct Summary {
    kind: &'static str,
    family: Family,
    pairs: Vec<(u32, u32)>,
    records: usize,
    scattered: usize,
    /// Clause histogram over classified records with a positive prediction.
    clauses: BTreeMap<String, usize>,
    unclassified: usize,
    /// Curve criterion against the exhaustive count. Must be empty.
    criterion_disagreements: Vec<String>,
    /// Classification against the exhaustive count, above the proved threshold.
    classification_disagreements: Vec<String>,
    /// Same, for q below the threshold: sporadic examples, not errors.
    below_threshold_disagreements: Vec<String>,
    /// Distinct N_{q^n/q^{n/2}}(α) among scattered records, per (I, J).
    half_norm_classes: Option<BTreeMap<String, usize>>,
}

fn summarize(family: Family, pairs: Vec<(u32, u32)>, recs: &[Rec]) -> Summary {
    let key = |r: &Rec| format!("{},{},{}", r.i, r.j, r.alpha);
    let mut s = Summary {
        kind: "summary",
        family,
        pairs,
        records: recs.len(),
        scattered: recs.iter().filter(|r| r.bruteforce).count(),
        clauses: BTreeMap::new(),
        unclassified: recs.iter().filter(|r| r.predicted.is_none()).count(),
        criterion_disagreements: Vec::new(),
        classification_disagreements: Vec::new(),
        below_threshold_disagreements: Vec::new(),
        half_norm_classes: None,
    };
    let mut halves: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for r in recs {
        if r.predicted == Some(true) {
            *s.clauses.entry(r.clause.clone().unwrap_or_default()).or_default() += 1;
        }
        if r.curve.is_some_and(|c| c != r.bruteforce) {
            s.criterion_disagreements.push(key(r));
        }
        if let Some(p) = r.predicted {
            if p != r.bruteforce {
                if r.below_threshold == Some(true) {
                    s.below_threshold_disagreements.push(key(r));
                } else {
                    s.classification_disagreements.push(key(r));
                }
            }
        }
        if let (true, Some(h)) = (r.bruteforce, &r.half_norm) {
            halves.entry(format!("{},{}", r.i, r.j)).or_default().insert(h.clone());
        }
    }
    if family == Family::Cmpz {
        let mut m: BTreeMap<String, usize> = halves.into_iter().map(|(k, v)| (k, v.len())).collect();
        for (i, j) in &s.pairs {
            m.entry(format!("{i},{j}")).or_insert(0);
        }
        s.half_norm_classes = Some(m);
    }
    s
}

pub fn scan(a: ScanArgs, argv: Vec<String>) -> Res<()> {
    init_pool(&a.common);
    let started = Instant::now();
    let (p, e) = char_and_e(&a.field)?;
    let ctx = scan_field(p, e, a.n, a.common.cap)?;
    let (alphas, alpha_key) = scan_alphas(&ctx, &a.alpha)?;
    let pairs: Vec<(u32, u32)> = family_pairs(a.family, a.n)
        .into_iter()
        .filter(|&(i, j)| a.i.is_none_or(|x| x == i) && a.j.is_none_or(|x| x == j))
        .collect();
    let mut cache = Cache::open(a.common.cache.clone());
    let mut recs: Vec<Rec> = Vec::new();
    for &(i, j) in &pairs {
        let parts = json!({
            "command": "scan",
            "field": ctx.header(),
            "family": a.family,
            "i": i,
            "j": j,
            "alphas": alpha_key,
        });
        let block = cache.get_or(&parts, || scan_block(&ctx, a.family, i, j, &alphas))?;
        for v in block {
            recs.push(serde_json::from_value(v).map_err(|e| CliError::Usage(format!("corrupt cache entry: {e}")))?);
        }
    }
    let h = Header { command: "scan", argv: &argv, config: &a, field: Some(ctx.header()) };
    let values: Vec<Value> = recs.iter().map(|r| serde_json::to_value(r).unwrap()).collect();
    match a.common.format {
        Format::Csv => output::csv(&h, REC_COLUMNS, &values)?,
        Format::Jsonl => {
            let mut lines = values;
            lines.push(serde_json::to_value(summarize(a.family, pairs, &recs)).unwrap());
            output::jsonl(&h, started, cache.status(), &lines)?;
        }
    }
    Ok(())
}

// ---- classes ----

pub fn classes(a: ClassesArgs, argv: Vec<String>) -> Res<()> {
    init_pool(&a.common);
    let started = Instant::now();
    let (p, e) = prime_power(a.q)?;
    let cap = options(a.common.cap).scan_cap;
    match size_of(p, 6 * e) {
        Some(s) if s <= cap => {}
        s => return Err(Error::ScanCapExceeded { size: s.unwrap_or(u64::MAX), cap }.into()),
    }
    let mut cache = Cache::open(a.common.cache.clone());
    let parts = json!({"command": "classes", "q": a.q, "crosscheck": a.crosscheck});
    let vals = cache.get_or(&parts, || -> Res<Vec<Value>> {
        let r = enumerate_cmpz6_classes(a.q, a.crosscheck)?;
        let mut rep = serde_json::to_value(&r).unwrap();
        rep["kind"] = json!("classes");
        Ok(vec![rep, serde_json::to_value(&r.orbit_table).unwrap()])
    })?;
    let field = make_field_with(p, e, 6, options(a.common.cap))?.header();
    let h = Header { command: "classes", argv: &argv, config: &a, field: Some(field) };
    match a.common.format {
        Format::Jsonl => output::jsonl(&h, started, cache.status(), &vals[..1])?,
        Format::Csv => {
            let rows = vals[1].as_array().cloned().unwrap_or_default();
            output::csv(&h, &["delta", "norm", "orbit"], &rows)?
        }
    }
    Ok(())
}

// ---- cert ----

fn cert_shape(k: CertKind) -> (Option<u32>, u32, bool) {
    // (fixed n, subfield degree of β, β = 1 excluded)
    match k {
        CertKind::Gcd1 => (None, 1, false),
        CertKind::N6Gcd2 => (Some(6), 2, false),
        CertKind::N8Gcd2 => (Some(8), 2, false),
        CertKind::N8Gcd4 => (Some(8), 4, true),
        CertKind::N6Gcd3 => (Some(6), 3, true),
        CertKind::N8Gcd4Classification => (Some(8), 4, true),
    }
}

fn cert_one(ctx: &Arc<FieldCtx>, a: &CertArgs, n: u32, x: FqnElem) -> Result<(Value, bool), Error> {
    let f = |x| ctx.format_elem(x);
    let (mut v, ok) = match a.case {
        CertKind::Gcd1 => {
            let (i, j) = (a.i.unwrap_or(0), a.j.unwrap_or(0));
            let r = gcd1_certificate(ctx, i, j, x)?;
            let ok = r.passes;
            let mut v = serde_json::to_value(r).unwrap();
            v["A"] = json!(f(x));
            v["n"] = json!(n);
            v["i"] = json!(i);
            v["j"] = json!(j);
            (v, ok)
        }
        CertKind::N6Gcd2 => {
            let r = n6_gcd2_certificate(ctx, x)?;
            (serde_json::to_value(&r).unwrap(), r.passes)
        }
        CertKind::N8Gcd2 => {
            let r = n8_gcd2_certificate(ctx, x, a.sweep)?;
            (serde_json::to_value(&r).unwrap(), r.passes)
        }
        CertKind::N8Gcd4 => {
            let (_, r) = n8_gcd4_c_poly(ctx, x)?;
            (serde_json::to_value(&r).unwrap(), r.passes)
        }
        CertKind::N6Gcd3 => {
            let r = n6_gcd3_discriminants(ctx, x)?;
            (serde_json::to_value(&r).unwrap(), r.a_b_in_fq3)
        }
        CertKind::N8Gcd4Classification => {
            let holds = n8_gcd4_classification(ctx, x)?;
            let minus_one = x == ctx.neg(FqnElem::ONE);
            (json!({"case": "n8gcd4-classification", "holds": holds, "beta_is_minus_one": minus_one}), holds)
        }
    };
    v["kind"] = json!("cert");
    if a.case != CertKind::Gcd1 {
        v["beta"] = json!(f(x));
    }
    Ok((v, ok))
}

pub fn cert(a: CertArgs, argv: Vec<String>) -> Res<()> {
    init_pool(&a.common);
    let started = Instant::now();
    if a.common.format == Format::Csv {
        return Err(csv_only_for("cert"));
    }
    let (p, e) = char_and_e(&a.field)?;
    let (fixed_n, m, skip_one) = cert_shape(a.case);
    let n = match (fixed_n, a.n) {
        (Some(f), Some(g)) if f != g => return Err(CliError::Usage(format!("{:?} needs n = {f}", a.case))),
        (Some(f), _) => f,
        (None, Some(g)) => g,
        (None, None) => return Err(CliError::Usage("gcd1 needs -n".into())),
    };
    if a.case == CertKind::Gcd1 && (a.i.is_none() || a.j.is_none()) {
        return Err(CliError::Usage("gcd1 needs -I and -J".into()));
    }
    let ctx = make_field_with(p, e, n, options(a.common.cap))?;
    let list = if a.case == CertKind::Gcd1 { a.a.clone().unwrap_or_else(|| "all".into()) } else { a.beta.clone() };
    let explicit = list.trim() != "all";
    let xs: Vec<FqnElem> = if explicit {
        list.split(',').map(|t| parse_elem(&ctx, t)).collect::<Res<_>>()?
    } else {
        ctx.subfield_elements(m)?
            .into_iter()
            .filter(|x| !x.is_zero() && !(skip_one && *x == FqnElem::ONE))
            .collect()
    };
    let mut cache = Cache::open(a.common.cache.clone());
    let parts = json!({
        "command": "cert",
        "field": ctx.header(),
        "case": a.case,
        "i": a.i,
        "j": a.j,
        "sweep": a.sweep,
        "values": xs.iter().map(|x| x.code()).collect::<Vec<_>>(),
    });
    let lines = cache.get_or(&parts, || -> Res<Vec<Value>> {
        let done: Vec<Result<(Value, bool), Error>> = xs.par_iter().map(|&x| cert_one(&ctx, &a, n, x)).collect();
        let mut lines = Vec::new();
        let (mut passed, mut failed, mut errors) = (0usize, Vec::new(), Vec::new());
        for (x, r) in xs.iter().zip(done) {
            match r {
                Ok((v, ok)) => {
                    if ok {
                        passed += 1;
                    } else {
                        failed.push(ctx.format_elem(*x));
                    }
                    lines.push(v);
                }
                // a single explicit value reports its error through the exit code
                Err(e) if explicit && xs.len() == 1 => return Err(e.into()),
                Err(e) => {
                    errors.push(json!({"value": ctx.format_elem(*x), "error": e.to_string()}));
                }
            }
        }
        lines.push(json!({
            "kind": "summary",
            "case": a.case,
            "count": xs.len(),
            "passed": passed,
            "failed": failed,
            "errors": errors,
        }));
        Ok(lines)
    })?;
    let h = Header { command: "cert", argv: &argv, config: &a, field: Some(ctx.header()) };
    output::jsonl(&h, started, cache.status(), &lines)?;
    Ok(())
}

// ---- bound ----

pub fn bound(a: BoundArgs, argv: Vec<String>) -> Res<()> {
    let started = Instant::now();
    if a.common.format == Format::Csv {
        return Err(csv_only_for("bound"));
    }
    let lw = lang_weil_lower_bound(a.ndim, a.degree, a.q)?;
    let positive = lw.lower_bound > 0.into();
    let mut v = serde_json::to_value(&lw).unwrap();
    v["kind"] = json!("bound");
    v["n_dim"] = json!(a.ndim);
    v["degree"] = json!(a.degree);
    v["q"] = json!(a.q);
    v["points_guaranteed"] = json!(lw.threshold_ok && positive);
    let h = Header { command: "bound", argv: &argv, config: &a, field: None };
    output::jsonl(&h, started, "off", &[v])?;
    Ok(())
}
