//! Dense polynomials over a prime field, just enough for modulus selection.

use crate::error::{Error, Result};

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut k: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while k > 0 {
        if k & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        k >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo a nonzero `m`.
fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mulmod(r[top], lead_inv, p);
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = mulmod(c, mi, p);
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    rem(&out, m, p)
}

fn pow_rem(base: &[u64], mut k: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = rem(base, m, p);
    while k > 0 {
        if k & 1 == 1 {
            r = mul_rem(&r, &b, m, p);
        }
        b = mul_rem(&b, &b, m, p);
        k >>= 1;
    }
    r
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn sub_x(a: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    if r.len() < 2 {
        r.resize(2, 0);
    }
    r[1] = (r[1] + p - 1) % p;
    trim(&mut r);
    r
}

fn prime_divisors(mut d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= d {
        if d % f == 0 {
            out.push(f);
            while d % f == 0 {
                d /= f;
            }
        }
        f += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

/// `x^(p^k) mod m`, by k successive p-th powers.
fn frob_x(k: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = rem(&[0, 1], m, p);
    for _ in 0..k {
        r = pow_rem(&r, p, m, p);
    }
    r
}

/// Rabin's test. `poly` is little-endian over F_p and must be monic of degree >= 1.
pub fn is_irreducible(p: u64, poly: &[u64]) -> Result<bool> {
    let mut f = poly.to_vec();
    trim(&mut f);
    if f.len() < 2 || *f.last().unwrap() != 1 {
        return Err(Error::NonMonic);
    }
    let d = (f.len() - 1) as u64;
    if d == 1 {
        return Ok(true);
    }
    if !sub_x(&frob_x(d, &f, p), p).is_empty() {
        return Ok(false);
    }
    for l in prime_divisors(d) {
        let h = sub_x(&frob_x(d / l, &f, p), p);
        if gcd(&f, &h, p).len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First monic irreducible polynomial of degree `d`, ordered by the integer
/// sum c_0 + c_1 p + ... + c_{d-1} p^{d-1} of its lower coefficients.
pub fn first_irreducible(p: u64, d: u32) -> Vec<u64> {
    let mut k: u64 = 0;
    loop {
        let mut c = Vec::with_capacity(d as usize + 1);
        let mut t = k;
        for _ in 0..d {
            c.push(t % p);
            t /= p;
        }
        c.push(1);
        if is_irreducible(p, &c).unwrap() {
            return c;
        }
        k += 1;
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

pub(crate) fn factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        while n % f == 0 {
            out.push(f);
            n /= f;
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
