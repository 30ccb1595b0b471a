//! Arithmetic in F_{p^D} viewed as the tower F_p ⊆ F_q ⊆ F_{q^n}, D = e·n.
//!
//! Elements are stored as the integer code Σ c_i p^i of their coefficient
//! vector in the power basis of the modulus. Small fields carry log/exp and
//! Zech tables; larger ones fall back to polynomial arithmetic.

mod fpoly;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub use fpoly::{first_irreducible, is_irreducible, is_prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FqnElem(u64);

impl FqnElem {
    pub const ZERO: FqnElem = FqnElem(0);
    pub const ONE: FqnElem = FqnElem(1);

    pub fn code(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FieldOptions {
    /// Largest p^D accepted for arithmetic.
    pub arith_cap: u64,
    /// Largest p^D accepted by exhaustive scans.
    pub scan_cap: u64,
    /// Largest p^D for which log/exp tables are built.
    pub table_limit: u64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            arith_cap: 1 << 40,
            scan_cap: 1 << 28,
            table_limit: 1 << 22,
        }
    }
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    // log(1 + g^k), or NONE when 1 + g^k = 0; odd characteristic only
    zech: Vec<u32>,
}

const NONE: u32 = u32::MAX;

/// How `frobenius_with` computes x^{q^k}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobPath {
    Tables,
    Matrix,
    Pow,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FieldHeader {
    pub p: u64,
    pub e: u32,
    pub n: u32,
    pub q: u64,
    pub degree: u32,
    pub modulus: Vec<u64>,
}

#[derive(Debug)]
pub struct FieldCtx {
    p: u64,
    e: u32,
    n: u32,
    d: u32,
    q: u64,
    size: u64,
    modulus: Vec<u64>,
    pw: Vec<u64>,
    tables: Option<Tables>,
    // frob[k][j] = (t^j)^{q^k}
    frob: Option<Vec<Vec<FqnElem>>>,
    gen: FqnElem,
    opts: FieldOptions,
}

pub fn make_field(p: u64, e: u32, n: u32) -> Result<Arc<FieldCtx>> {
    FieldCtx::new(p, e, n, FieldOptions::default()).map(Arc::new)
}

pub fn make_field_with(p: u64, e: u32, n: u32, opts: FieldOptions) -> Result<Arc<FieldCtx>> {
    FieldCtx::new(p, e, n, opts).map(Arc::new)
}

/// Splits a prime power q into (p, e).
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let f = fpoly::factor(q);
    if f.is_empty() || f.iter().any(|&x| x != f[0]) {
        return Err(Error::PreconditionViolated(format!("{q} is not a prime power")));
    }
    Ok((f[0], f.len() as u32))
}

impl FieldCtx {
    pub fn new(p: u64, e: u32, n: u32, opts: FieldOptions) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || n == 0 {
            return Err(Error::PreconditionViolated("e and n must be positive".into()));
        }
        let d = e.checked_mul(n).ok_or(Error::DegreeOverflow { p, degree: u32::MAX, cap_bits: 0 })?;
        let cap_bits = 63 - opts.arith_cap.leading_zeros();
        let overflow = Error::DegreeOverflow { p, degree: d, cap_bits };
        let size = p.checked_pow(d).ok_or(overflow.clone())?;
        if size > opts.arith_cap || d > 64 {
            return Err(overflow);
        }
        let q = p.pow(e);
        let modulus = first_irreducible(p, d);
        let mut pw = Vec::with_capacity(d as usize + 1);
        let mut acc = 1u64;
        for _ in 0..d {
            pw.push(acc);
            acc = acc.wrapping_mul(p);
        }
        pw.push(acc);
        let mut ctx = FieldCtx {
            p,
            e,
            n,
            d,
            q,
            size,
            modulus,
            pw,
            tables: None,
            frob: None,
            gen: FqnElem::ONE,
            opts,
        };
        ctx.gen = ctx.find_generator();
        if size <= opts.table_limit && size > 2 {
            ctx.tables = Some(ctx.build_tables());
        }
        if d <= 64 {
            ctx.frob = Some(ctx.build_frobenius());
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn degree(&self) -> u32 {
        self.d
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// p^D, the number of elements.
    pub fn size(&self) -> u64 {
        self.size
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn options(&self) -> &FieldOptions {
        &self.opts
    }
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }
    /// Generator of the multiplicative group.
    pub fn generator(&self) -> FqnElem {
        self.gen
    }

    pub fn header(&self) -> FieldHeader {
        FieldHeader {
            p: self.p,
            e: self.e,
            n: self.n,
            q: self.q,
            degree: self.d,
            modulus: self.modulus.clone(),
        }
    }

    pub fn check_scan_cap(&self) -> Result<()> {
        if self.size > self.opts.scan_cap {
            return Err(Error::ScanCapExceeded { size: self.size, cap: self.opts.scan_cap });
        }
        Ok(())
    }

    // ---- encoding ----

    pub fn elem(&self, code: u64) -> Result<FqnElem> {
        if code >= self.size {
            return Err(Error::Parse(format!("code {code} out of range for a field of size {}", self.size)));
        }
        Ok(FqnElem(code))
    }

    /// Element from a code already known to be in range.
    pub fn elem_unchecked(&self, code: u64) -> FqnElem {
        debug_assert!(code < self.size);
        FqnElem(code)
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Result<FqnElem> {
        if c.len() > self.d as usize || c.iter().any(|&x| x >= self.p) {
            return Err(Error::Parse("coefficient vector out of range".into()));
        }
        Ok(FqnElem(c.iter().enumerate().map(|(i, &x)| x * self.pw[i]).sum()))
    }

    pub fn coeffs(&self, x: FqnElem) -> Vec<u64> {
        let mut out = vec![0; self.d as usize];
        self.digits(x.0, &mut out);
        out
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> FqnElem {
        FqnElem(k.rem_euclid(self.p as i64) as u64)
    }

    fn digits(&self, mut x: u64, out: &mut [u64]) {
        if self.p == 2 {
            for (i, o) in out.iter_mut().enumerate() {
                *o = (x >> i) & 1;
            }
            return;
        }
        for o in out.iter_mut() {
            *o = x % self.p;
            x /= self.p;
        }
    }

    fn encode(&self, c: &[u64]) -> FqnElem {
        if self.p == 2 {
            return FqnElem(c.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b << i)));
        }
        FqnElem(c.iter().rev().fold(0, |acc, &b| acc * self.p + b))
    }

    /// Printable little-endian digit string; one hex character per digit for p <= 16,
    /// comma-separated decimals otherwise.
    pub fn format_elem(&self, x: FqnElem) -> String {
        let c = self.coeffs(x);
        if self.p <= 16 {
            c.iter().map(|&d| std::char::from_digit(d as u32, 16).unwrap()).collect()
        } else {
            c.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    /// Inverse of `format_elem`; also accepts `g^k` (power of the generator) and `0`/`1`.
    pub fn parse_elem(&self, s: &str) -> Result<FqnElem> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("g^") {
            let k: u64 = k.parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            return Ok(self.pow(self.gen, k as u128));
        }
        if s == "g" {
            return Ok(self.gen);
        }
        let digits: Vec<u64> = if self.p <= 16 {
            if s.len() == 1 && self.d > 1 {
                vec![s.chars().next().and_then(|c| c.to_digit(16)).ok_or_else(|| Error::Parse(s.into()))? as u64]
            } else {
                s.chars()
                    .map(|c| c.to_digit(16).map(u64::from).ok_or_else(|| Error::Parse(format!("bad digit in {s:?}"))))
                    .collect::<Result<_>>()?
            }
        } else {
            s.split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad digit in {s:?}"))))
                .collect::<Result<_>>()?
        };
        if digits.len() > self.d as usize {
            return Err(Error::Parse(format!("{s:?} has more than {} digits", self.d)));
        }
        self.from_coeffs(&digits)
    }

    // ---- arithmetic ----

    pub fn add(&self, a: FqnElem, b: FqnElem) -> FqnElem {
        if self.p == 2 {
            return FqnElem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        if let Some(t) = &self.tables {
            let m = (self.size - 1) as u32;
            let la = t.log[a.0 as usize];
            let lb = t.log[b.0 as usize];
            let k = if lb >= la { lb - la } else { lb + m - la };
            let z = t.zech[k as usize];
            if z == NONE {
                return FqnElem::ZERO;
            }
            return FqnElem(t.exp[(la + z) as usize] as u64);
        }
        self.add_digits(a, b, false)
    }

    pub fn sub(&self, a: FqnElem, b: FqnElem) -> FqnElem {
        if self.p == 2 {
            return FqnElem(a.0 ^ b.0);
        }
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FqnElem) -> FqnElem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if let Some(t) = &self.tables {
            let m = (self.size - 1) as u32;
            let l = t.log[a.0 as usize] + m / 2;
            return FqnElem(t.exp[l as usize] as u64);
        }
        self.add_digits(FqnElem::ZERO, a, true)
    }

    fn add_digits(&self, a: FqnElem, b: FqnElem, negate_b: bool) -> FqnElem {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let p = self.p;
        for i in 0..self.d as usize {
            let (da, db) = (x % p, y % p);
            x /= p;
            y /= p;
            let s = if negate_b { (da + p - db) % p } else { (da + db) % p };
            out += s * self.pw[i];
        }
        FqnElem(out)
    }

    pub fn mul(&self, a: FqnElem, b: FqnElem) -> FqnElem {
        if a.0 == 0 || b.0 == 0 {
            return FqnElem::ZERO;
        }
        if let Some(t) = &self.tables {
            let s = t.log[a.0 as usize] + t.log[b.0 as usize];
            return FqnElem(t.exp[s as usize] as u64);
        }
        self.mul_poly(a, b)
    }

    fn mul_poly(&self, a: FqnElem, b: FqnElem) -> FqnElem {
        let d = self.d as usize;
        if self.p == 2 {
            let mut prod: u128 = 0;
            let (x, y) = (a.0 as u128, b.0);
            for i in 0..d {
                if (y >> i) & 1 == 1 {
                    prod ^= x << i;
                }
            }
            let m: u128 = self.modulus.iter().enumerate().fold(0, |acc, (i, &c)| acc | ((c as u128) << i));
            for k in (d..2 * d).rev() {
                if (prod >> k) & 1 == 1 {
                    prod ^= m << (k - d);
                }
            }
            return FqnElem(prod as u64);
        }
        let p = self.p as u128;
        let mut da = [0u64; 64];
        let mut db = [0u64; 64];
        self.digits(a.0, &mut da[..d]);
        self.digits(b.0, &mut db[..d]);
        let mut prod = [0u128; 128];
        for i in 0..d {
            if da[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = (prod[i + j] + da[i] as u128 * db[j] as u128) % p;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..d {
                let m = self.modulus[i] as u128;
                prod[k - d + i] = (prod[k - d + i] + (p - m) % p * c) % p;
            }
            prod[k] = 0;
        }
        let out: Vec<u64> = prod[..d].iter().map(|&c| (c % p) as u64).collect();
        self.encode(&out)
    }

    pub fn pow(&self, a: FqnElem, k: u128) -> FqnElem {
        if k == 0 {
            return FqnElem::ONE;
        }
        if a.0 == 0 {
            return FqnElem::ZERO;
        }
        if let Some(t) = &self.tables {
            let m = (self.size - 1) as u128;
            let l = (t.log[a.0 as usize] as u128 * (k % m)) % m;
            return FqnElem(t.exp[l as usize] as u64);
        }
        self.pow_slow(a, k)
    }

    fn pow_slow(&self, a: FqnElem, mut k: u128) -> FqnElem {
        let mut r = FqnElem::ONE;
        let mut b = a;
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul_poly_or_trivial(r, b);
            }
            b = self.mul_poly_or_trivial(b, b);
            k >>= 1;
        }
        r
    }

    fn mul_poly_or_trivial(&self, a: FqnElem, b: FqnElem) -> FqnElem {
        if a.0 == 0 || b.0 == 0 {
            FqnElem::ZERO
        } else {
            self.mul_poly(a, b)
        }
    }

    pub fn inv(&self, a: FqnElem) -> Result<FqnElem> {
        if a.0 == 0 {
            return Err(Error::ZeroInput);
        }
        if let Some(t) = &self.tables {
            let m = (self.size - 1) as u32;
            let l = t.log[a.0 as usize];
            return Ok(FqnElem(t.exp[((m - l) % m) as usize] as u64));
        }
        Ok(self.pow_slow(a, self.size as u128 - 2))
    }

    pub fn div(&self, a: FqnElem, b: FqnElem) -> Result<FqnElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Discrete log base the generator; `None` for zero.
    pub fn log(&self, a: FqnElem) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(t.log[a.0 as usize] as u64);
        }
        let mut x = FqnElem::ONE;
        for k in 0..self.size - 1 {
            if x == a {
                return Some(k);
            }
            x = self.mul(x, self.gen);
        }
        None
    }

    /// Raw table access for hot loops: g^k with 0 <= k < 2(size-1).
    pub fn exp_table(&self) -> Option<&[u32]> {
        self.tables.as_ref().map(|t| t.exp.as_slice())
    }
    pub fn log_table(&self) -> Option<&[u32]> {
        self.tables.as_ref().map(|t| t.log.as_slice())
    }
    /// log(1 + g^k), `u32::MAX` where 1 + g^k = 0. Empty in characteristic 2.
    pub fn zech_table(&self) -> Option<&[u32]> {
        self.tables.as_ref().map(|t| t.zech.as_slice())
    }

    fn find_generator(&self) -> FqnElem {
        if self.size == 2 {
            return FqnElem::ONE;
        }
        let m = self.size - 1;
        let mut primes = fpoly::factor(m);
        primes.dedup();
        for c in 1..self.size {
            let g = FqnElem(c);
            if primes.iter().all(|&r| self.pow_slow(g, (m / r) as u128) != FqnElem::ONE) {
                return g;
            }
        }
        unreachable!("multiplicative group is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let m = (self.size - 1) as usize;
        let mut exp = vec![0u32; 2 * m];
        let mut log = vec![0u32; self.size as usize];
        let mut x = FqnElem::ONE;
        for k in 0..m {
            exp[k] = x.0 as u32;
            exp[k + m] = x.0 as u32;
            log[x.0 as usize] = k as u32;
            x = self.mul_poly(x, self.gen);
        }
        let mut zech = Vec::new();
        if self.p != 2 {
            zech = vec![NONE; m];
            for (k, z) in zech.iter_mut().enumerate() {
                let s = self.add_digits(FqnElem::ONE, FqnElem(exp[k] as u64), false);
                if s.0 != 0 {
                    *z = log[s.0 as usize];
                }
            }
        }
        Tables { exp, log, zech }
    }

    fn build_frobenius(&self) -> Vec<Vec<FqnElem>> {
        let d = self.d as usize;
        (0..self.n)
            .map(|k| {
                let qk = (self.q as u128).pow(k);
                (0..d).map(|j| self.pow_slow(FqnElem(self.pw[j]), qk)).collect()
            })
            .collect()
    }

    // ---- Frobenius, norm, trace ----

    /// x^{q^k}, k taken mod n.
    pub fn frobenius(&self, x: FqnElem, k: i64) -> FqnElem {
        let path = if self.tables.is_some() {
            FrobPath::Tables
        } else if self.frob.is_some() {
            FrobPath::Matrix
        } else {
            FrobPath::Pow
        };
        self.frobenius_with(x, k, path)
    }

    pub fn frobenius_with(&self, x: FqnElem, k: i64, path: FrobPath) -> FqnElem {
        let k = k.rem_euclid(self.n as i64) as u32;
        if k == 0 || x.0 == 0 {
            return x;
        }
        match path {
            FrobPath::Tables if self.tables.is_some() => self.pow(x, (self.q as u128).pow(k)),
            FrobPath::Matrix if self.frob.is_some() => {
                let cols = &self.frob.as_ref().unwrap()[k as usize];
                let mut dig = [0u64; 64];
                self.digits(x.0, &mut dig[..self.d as usize]);
                let mut acc = FqnElem::ZERO;
                for (j, &c) in dig[..self.d as usize].iter().enumerate() {
                    if c != 0 {
                        acc = self.add_no_table(acc, self.scale_prime(cols[j], c));
                    }
                }
                acc
            }
            _ => self.pow_slow(x, (self.q as u128).pow(k)),
        }
    }

    fn add_no_table(&self, a: FqnElem, b: FqnElem) -> FqnElem {
        if self.p == 2 {
            FqnElem(a.0 ^ b.0)
        } else {
            self.add_digits(a, b, false)
        }
    }

    fn scale_prime(&self, x: FqnElem, c: u64) -> FqnElem {
        if c == 1 {
            return x;
        }
        let mut dig = [0u64; 64];
        let d = self.d as usize;
        self.digits(x.0, &mut dig[..d]);
        for v in dig[..d].iter_mut() {
            *v = ((*v as u128 * c as u128) % self.p as u128) as u64;
        }
        self.encode(&dig[..d])
    }

    /// x^{p^k}: the absolute Frobenius.
    pub fn frobenius_p(&self, x: FqnElem, k: u32) -> FqnElem {
        let k = k % self.d;
        self.pow(x, (self.p as u128).pow(k))
    }

    fn check_level(&self, m: u32) -> Result<()> {
        if m == 0 || self.n % m != 0 {
            return Err(Error::BadTowerLevel { m, n: self.n });
        }
        Ok(())
    }

    /// N_{q^n/q^m}(x).
    pub fn norm(&self, x: FqnElem, m: u32) -> Result<FqnElem> {
        self.check_level(m)?;
        let mut r = FqnElem::ONE;
        for i in 0..self.n / m {
            r = self.mul(r, self.frobenius(x, (m * i) as i64));
        }
        Ok(r)
    }

    /// Tr_{q^n/q^m}(x).
    pub fn trace(&self, x: FqnElem, m: u32) -> Result<FqnElem> {
        self.check_level(m)?;
        let mut r = FqnElem::ZERO;
        for i in 0..self.n / m {
            r = self.add(r, self.frobenius(x, (m * i) as i64));
        }
        Ok(r)
    }

    /// N_{q^top/q^m}(x) for x in the intermediate field F_{q^top}.
    pub fn norm_between(&self, x: FqnElem, top: u32, m: u32) -> Result<FqnElem> {
        self.check_level(top)?;
        if m == 0 || top % m != 0 {
            return Err(Error::BadTowerLevel { m, n: top });
        }
        if !self.in_subfield(x, top)? {
            return Err(Error::NotInSubfield(top));
        }
        let mut r = FqnElem::ONE;
        for i in 0..top / m {
            r = self.mul(r, self.frobenius(x, (m * i) as i64));
        }
        Ok(r)
    }

    /// Tr_{q^top/q^m}(x) for x in F_{q^top}.
    pub fn trace_between(&self, x: FqnElem, top: u32, m: u32) -> Result<FqnElem> {
        self.check_level(top)?;
        if m == 0 || top % m != 0 {
            return Err(Error::BadTowerLevel { m, n: top });
        }
        if !self.in_subfield(x, top)? {
            return Err(Error::NotInSubfield(top));
        }
        let mut r = FqnElem::ZERO;
        for i in 0..top / m {
            r = self.add(r, self.frobenius(x, (m * i) as i64));
        }
        Ok(r)
    }

    /// Tr_{q^m/p}(x) for x in F_{q^m}.
    pub fn abs_trace(&self, x: FqnElem, m: u32) -> Result<FqnElem> {
        self.check_level(m)?;
        if !self.in_subfield(x, m)? {
            return Err(Error::NotInSubfield(m));
        }
        let mut r = FqnElem::ZERO;
        let mut y = x;
        for _ in 0..self.e * m {
            r = self.add(r, y);
            y = self.pow(y, self.p as u128);
        }
        Ok(r)
    }

    pub fn in_subfield(&self, x: FqnElem, m: u32) -> Result<bool> {
        self.check_level(m)?;
        Ok(self.frobenius(x, m as i64) == x)
    }

    /// All elements of F_{q^m}, zero first, then increasing powers of a generator.
    pub fn subfield_elements(&self, m: u32) -> Result<Vec<FqnElem>> {
        self.check_level(m)?;
        let sub = (self.q as u128).pow(m) - 1;
        let step = (self.size as u128 - 1) / sub;
        let h = self.pow(self.gen, step);
        let mut out = Vec::with_capacity(sub as usize + 1);
        out.push(FqnElem::ZERO);
        let mut x = FqnElem::ONE;
        for _ in 0..sub {
            out.push(x);
            x = self.mul(x, h);
        }
        Ok(out)
    }

    /// q^m as an integer.
    pub fn q_pow(&self, m: u32) -> u128 {
        (self.q as u128).pow(m)
    }

    // ---- normal elements and ranks ----

    /// Rank over F_{q^n} of the matrix with rows `rows`.
    pub fn rank(&self, rows: &[Vec<FqnElem>]) -> usize {
        let mut m: Vec<Vec<FqnElem>> = rows.to_vec();
        let ncols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(rank, piv);
            let inv = self.inv(m[rank][col]).unwrap();
            for r in 0..m.len() {
                if r != rank && !m[r][col].is_zero() {
                    let f = self.mul(m[r][col], inv);
                    for c in col..ncols {
                        let t = self.mul(f, m[rank][c]);
                        m[r][c] = self.sub(m[r][c], t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// F_q-dimension of the span of `v`, via the rank of the Moore matrix (v_j^{q^i}).
    pub fn fq_rank(&self, v: &[FqnElem]) -> usize {
        let rows: Vec<Vec<FqnElem>> = (0..self.n)
            .map(|i| v.iter().map(|&x| self.frobenius(x, i as i64)).collect())
            .collect();
        self.rank(&rows)
    }

    pub fn is_normal(&self, x: FqnElem) -> bool {
        let conj: Vec<FqnElem> = (0..self.n).map(|i| self.frobenius(x, i as i64)).collect();
        self.fq_rank(&conj) == self.n as usize
    }

    pub fn find_normal_element(&self) -> FqnElem {
        (1..self.size)
            .map(FqnElem)
            .find(|&x| self.is_normal(x))
            .expect("normal bases exist")
    }

    // ---- quadratics and residues ----

    fn subfield_arg(&self, x: FqnElem, m: u32) -> Result<()> {
        if !self.in_subfield(x, m)? {
            return Err(Error::NotInSubfield(m));
        }
        Ok(())
    }

    /// Whether Y^2 + bY + c has its two roots (with multiplicity) in F_{q^m}.
    pub fn quadratic_splits_in_subfield(&self, b: FqnElem, c: FqnElem, m: u32) -> Result<bool> {
        Ok(self.quadratic_root_count(b, c, m)? > 0)
    }

    /// Number of distinct roots of Y^2 + bY + c in F_{q^m}.
    pub fn quadratic_root_count(&self, b: FqnElem, c: FqnElem, m: u32) -> Result<usize> {
        self.subfield_arg(b, m)?;
        self.subfield_arg(c, m)?;
        let qm = self.q_pow(m);
        if self.p != 2 {
            let four = self.from_int(4);
            let delta = self.sub(self.mul(b, b), self.mul(four, c));
            if delta.is_zero() {
                return Ok(1);
            }
            return Ok(if self.pow(delta, (qm - 1) / 2) == FqnElem::ONE { 2 } else { 0 });
        }
        if b.is_zero() {
            return Ok(1);
        }
        let z = self.div(c, self.mul(b, b))?;
        Ok(if self.abs_trace(z, m)?.is_zero() { 2 } else { 0 })
    }

    /// v^{(q^n-1)/(q^G-1)} = 1.
    pub fn is_power_residue(&self, v: FqnElem, g: u32) -> Result<bool> {
        self.check_level(g)?;
        if v.is_zero() {
            return Err(Error::ZeroInput);
        }
        let ex = (self.q_pow(self.n) - 1) / (self.q_pow(g) - 1);
        Ok(self.pow(v, ex) == FqnElem::ONE)
    }

    /// Maps an element of a subfield of `src` into `self`, as a root of the
    /// same minimal polynomial over F_p. Only meaningful when the caller uses a
    /// single such element (or a Galois-stable configuration).
    pub fn embed_from(&self, src: &FieldCtx, x: FqnElem) -> Result<FqnElem> {
        if src.p != self.p {
            return Err(Error::CtxMismatch);
        }
        let mut deg = 1u32;
        while src.pow(x, (src.p as u128).pow(deg)) != x {
            deg += 1;
        }
        if self.d % deg != 0 {
            return Err(Error::CtxMismatch);
        }
        if deg == 1 {
            return Ok(FqnElem(x.0));
        }
        // minimal polynomial coefficients live in F_p ⊂ src
        let conj: Vec<FqnElem> = (0..deg).map(|i| src.pow(x, (src.p as u128).pow(i))).collect();
        let mut poly = vec![FqnElem::ONE];
        for &r in &conj {
            let mut next = vec![FqnElem::ZERO; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = src.add(next[i + 1], c);
                next[i] = src.sub(next[i], src.mul(c, r));
            }
            poly = next;
        }
        let pc: Vec<FqnElem> = poly.iter().map(|c| FqnElem(c.0)).collect();
        let step = (self.size as u128 - 1) / ((self.p as u128).pow(deg) - 1);
        let h = self.pow(self.gen, step);
        let mut y = FqnElem::ONE;
        for _ in 0..(self.p as u128).pow(deg) - 1 {
            let val = pc.iter().rev().fold(FqnElem::ZERO, |acc, &c| self.add(self.mul(acc, y), c));
            if val.is_zero() {
                return Ok(y);
            }
            y = self.mul(y, h);
        }
        Err(Error::CtxMismatch)
    }
}
