//! Finite fields of order at most 512 with exp/log tables.
//!
//! An element of GF(p^k) is stored as the integer whose base-p digits are
//! its coefficients in the polynomial basis `1, x, ..., x^(k-1)`, where `x`
//! is a root of the defining polynomial. The defining polynomial is the
//! first monic primitive polynomial in lexicographic order of its
//! coefficients, so `x` itself is a primitive element.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::factorize;
use crate::error::{Error, Result};

pub type Fq = u16;

pub const MAX_FIELD_ORDER: u32 = 512;

#[derive(Debug)]
pub struct FqField {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients `c_0..c_{k-1}` of `x^k + c_{k-1} x^{k-1} + ... + c_0`.
    poly: Vec<u32>,
    exp: Vec<Fq>,
    log: Vec<u32>,
    add: Vec<Fq>,
    neg: Vec<Fq>,
}

impl FqField {
    /// The shared field of order `q`.
    pub fn get(q: u32) -> Result<Arc<FqField>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FqField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&q) {
            return Ok(f.clone());
        }
        let f = Arc::new(FqField::new(q)?);
        cache.lock().unwrap().insert(q, f.clone());
        Ok(f)
    }

    pub fn new(q: u32) -> Result<FqField> {
        if !(2..=MAX_FIELD_ORDER).contains(&q) {
            return Err(Error::Unsupported(format!("field order {q} outside 2..={MAX_FIELD_ORDER}")));
        }
        let primes = factorize(q as u64);
        if primes.iter().any(|&p| p != primes[0]) {
            return Err(Error::invalid(format!("{q} is not a prime power")));
        }
        let p = primes[0] as u32;
        let k = primes.len() as u32;
        let poly = find_primitive_poly(p, k);
        let mut f = FqField {
            p,
            k,
            q,
            poly,
            exp: Vec::new(),
            log: Vec::new(),
            add: Vec::new(),
            neg: Vec::new(),
        };
        let n = (q - 1) as usize;
        let x = f.generator_poly();
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = vec![0u32; q as usize];
        let mut cur: Fq = 1;
        for i in 0..n {
            exp.push(cur);
            log[cur as usize] = i as u32;
            cur = f.mul_poly(cur, x);
        }
        debug_assert_eq!(cur, 1);
        let doubled: Vec<Fq> = exp.clone();
        exp.extend(doubled);
        f.exp = exp;
        f.log = log;
        let qs = q as usize;
        f.add = (0..qs * qs)
            .map(|i| f.add_digits((i / qs) as Fq, (i % qs) as Fq))
            .collect();
        f.neg = (0..qs).map(|a| f.neg_digits(a as Fq)).collect();
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn defining_polynomial(&self) -> &[u32] {
        &self.poly
    }

    /// Multiplicative generator `x`.
    pub fn primitive_element(&self) -> Fq {
        self.exp[1]
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q as Fq
    }

    /// The prime-field element `n mod p`.
    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.p as i64) as Fq
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        Some(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Discrete logarithm to base the primitive element.
    pub fn log(&self, a: Fq) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn mult_order(&self, a: Fq) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = (self.q - 1) as u64;
        Some(n / num_integer::gcd(n, l))
    }

    pub fn is_square(&self, a: Fq) -> bool {
        a == 0 || self.p == 2 || self.log[a as usize] % 2 == 0
    }

    /// A basis of the field over its prime field: `1, x, ..., x^(k-1)`.
    pub fn prime_basis(&self) -> Vec<Fq> {
        (0..self.k).map(|i| self.exp[i as usize]).collect()
    }

    /// The involutory automorphism `a -> a^r` of GF(r^2); `None` unless the
    /// order is a square.
    pub fn conj(&self, a: Fq) -> Option<Fq> {
        let r = self.sqrt_order()?;
        Some(self.pow(a, r as u64))
    }

    /// `r` with `r^2 = q`, if any.
    pub fn sqrt_order(&self) -> Option<u32> {
        if self.k % 2 != 0 {
            return None;
        }
        Some(self.p.pow(self.k / 2))
    }

    fn digits(&self, a: Fq) -> Vec<u32> {
        let mut a = a as u32;
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn from_digits(&self, d: &[u32]) -> Fq {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c) as Fq
    }

    fn add_digits(&self, a: Fq, b: Fq) -> Fq {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&s)
    }

    fn neg_digits(&self, a: Fq) -> Fq {
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.from_digits(&d)
    }

    fn generator_poly(&self) -> Fq {
        if self.k == 1 {
            primitive_root(self.p) as Fq
        } else {
            self.p as Fq
        }
    }

    /// Schoolbook multiplication reduced by the defining polynomial. Used
    /// to build the tables and to cross-check them.
    pub fn mul_poly(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p;
        if self.k == 1 {
            return ((a as u32 * b as u32) % p) as Fq;
        }
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            // x^k = -(c_0 + ... + c_{k-1} x^{k-1})
            for (i, &pc) in self.poly.iter().enumerate() {
                let t = (c * pc) % p;
                prod[d - k + i] = (prod[d - k + i] + p - t) % p;
            }
        }
        self.from_digits(&prod[..k])
    }
}

fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let primes = factorize((p - 1) as u64);
    (2..p)
        .find(|&g| {
            primes
                .iter()
                .all(|&r| mod_pow(g as u64, (p as u64 - 1) / r, p as u64) != 1)
        })
        .expect("primitive root exists")
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn find_primitive_poly(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![(p - primitive_root(p)) % p];
    }
    let q = p.pow(k);
    for code in 0..q {
        let coeffs: Vec<u32> = (0..k).map(|i| (code / p.pow(i)) % p).collect();
        if coeffs[0] == 0 {
            continue;
        }
        if x_has_full_order(p, k, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

/// Whether `x` has multiplicative order `p^k - 1` modulo the polynomial.
fn x_has_full_order(p: u32, k: u32, poly: &[u32]) -> bool {
    let k = k as usize;
    let n = p.pow(k as u32) - 1;
    let mut cur = vec![0u32; k];
    cur[0] = 1;
    for step in 1..=n {
        // multiply by x
        let top = cur[k - 1];
        for i in (1..k).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for i in 0..k {
            cur[i] = (cur[i] + p - (top * poly[i]) % p) % p;
        }
        let is_one = cur[0] == 1 && cur[1..].iter().all(|&c| c == 0);
        if is_one {
            return step == n;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_agree_with_polynomial_arithmetic() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64] {
            let f = FqField::new(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_poly(a, b), "q={q} {a}*{b}");
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn primitive_element_orders() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16, 27, 81, 243, 256, 343, 512] {
            let f = FqField::get(q).unwrap();
            assert_eq!(f.mult_order(f.primitive_element()), Some(q as u64 - 1));
        }
        assert_eq!(FqField::get(8).unwrap().mult_order(FqField::get(8).unwrap().primitive_element()), Some(7));
        assert!(FqField::new(6).is_err());
        assert!(FqField::new(1024).is_err());
    }

    #[test]
    fn frobenius_conjugation() {
        let f = FqField::get(9).unwrap();
        for a in f.elements() {
            let c = f.conj(a).unwrap();
            assert_eq!(f.conj(c).unwrap(), a);
            // the norm a * conj(a) lies in the subfield
            let norm = f.mul(a, c);
            assert_eq!(f.conj(norm).unwrap(), norm);
        }
        assert!(FqField::get(8).unwrap().conj(3).is_none());
    }
}
