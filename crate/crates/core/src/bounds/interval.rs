//! Closed rational intervals with outward rounding.
//!
//! Endpoints are kept on the grid `2^-prec` after every rounding step, so
//! their size stays bounded. Transcendental constants come from series with
//! explicit tail bounds.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn floor_to(x: &BigRational, prec: u32) -> BigRational {
    let scale = BigInt::one() << prec;
    let n = (x * BigRational::from_integer(scale.clone())).floor().to_integer();
    BigRational::new(n, scale)
}

fn ceil_to(x: &BigRational, prec: u32) -> BigRational {
    let scale = BigInt::one() << prec;
    let n = (x * BigRational::from_integer(scale.clone())).ceil().to_integer();
    BigRational::new(n, scale)
}

impl Interval {
    pub fn exact(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: i64) -> Self {
        Interval::exact(rat(n, 1))
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    /// Widens to the `2^-prec` grid.
    pub fn round(&self, prec: u32) -> Self {
        Interval {
            lo: floor_to(&self.lo, prec),
            hi: ceil_to(&self.hi, prec),
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// `Less` or `Greater` when the whole interval lies on one side of zero;
    /// `None` when it contains zero and is not the point zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let (a, b) = (&self.lo * q, &self.hi * q);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.sign()? == Ordering::Equal {
            return None;
        }
        Some(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn midpoint_f64(&self) -> f64 {
        let m = (&self.lo + &self.hi) / rat(2, 1);
        let (n, d) = (m.numer().clone(), m.denom().clone());
        let shift = d.bits().saturating_sub(60) as i32;
        let nf = num_traits::ToPrimitive::to_f64(&(n >> shift.max(0) as usize)).unwrap_or(f64::NAN);
        let df = num_traits::ToPrimitive::to_f64(&(d >> shift.max(0) as usize)).unwrap_or(f64::NAN);
        nf / df
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let ps = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = ps.iter().min().unwrap().clone();
        let hi = ps.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

/// `2 atanh(z) = ln((1+z)/(1-z))` for rational `0 <= z <= 1/3`, to within
/// `2^-prec`.
fn two_atanh(z: &BigRational, prec: u32) -> Interval {
    debug_assert!(!z.is_negative() && z <= &rat(1, 3));
    if z.is_zero() {
        return Interval::from_int(0);
    }
    let tol = BigRational::new(BigInt::one(), BigInt::one() << (prec + 2));
    let z2 = z * z;
    let mut pow = z.clone();
    let mut sum = BigRational::zero();
    let mut k = 1i64;
    loop {
        sum += &pow / BigRational::from_integer(k.into());
        pow = floor_to(&(&pow * &z2), prec + 8);
        k += 2;
        // tail after this term: z^k / (k (1 - z^2)) with z^2 <= 1/9
        let tail = &pow * rat(9, 8 * k);
        if tail < tol {
            // the truncated powers only err downwards; absorb that slack too
            let slack = BigRational::new(BigInt::from(k), BigInt::one() << (prec + 8));
            let lo = &sum * rat(2, 1);
            let hi = (&sum + &tail + slack) * rat(2, 1);
            return Interval::new(lo, hi).round(prec);
        }
    }
}

/// `ln 2`, to within `2^-prec`.
pub fn ln2(prec: u32) -> Interval {
    two_atanh(&rat(1, 3), prec)
}

/// `ln x` for rational `x > 0`.
pub fn ln(x: &BigRational, prec: u32) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    // x = 2^k y with 1 <= y < 2
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = rat(2, 1);
    let pow2 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(BigInt::one() << e as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    let mut y = x / pow2(k);
    while y >= two {
        y /= &two;
        k += 1;
    }
    while y < BigRational::one() {
        y *= &two;
        k -= 1;
    }
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let extra = 64 - (k.unsigned_abs() | 1).leading_zeros() + 2;
    let l2 = ln2(prec + extra).scale(&rat(k, 1));
    (&l2 + &two_atanh(&z, prec + 2)).round(prec)
}

/// `ln n` for a positive integer.
pub fn ln_int(n: &BigUint, prec: u32) -> Interval {
    ln(&BigRational::from_integer(BigInt::from(n.clone())), prec)
}

/// Euler's number, from `sum 1/k!` with tail below `2/(N+1)!`.
pub fn e(prec: u32) -> Interval {
    let tol = BigRational::new(BigInt::one(), BigInt::one() << (prec + 2));
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut k = 0i64;
    loop {
        sum += &term;
        k += 1;
        term /= BigRational::from_integer(k.into());
        let tail = &term * rat(2, 1);
        if tail < tol {
            return Interval::new(sum.clone(), &sum + tail).round(prec);
        }
    }
}

/// Smallest integer `>= x`.
pub fn ceil_rat(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// `ceil` of a positive interval when it is unambiguous.
pub fn ceil_interval(x: &Interval) -> Option<BigInt> {
    let a = ceil_rat(&x.lo);
    let b = ceil_rat(&x.hi);
    (a == b).then_some(a)
}

/// `gcd`-reduced rational from a decimal-free string `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    let g = n.gcd(&d);
    Some(BigRational::new(n / &g, d / g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(i: &Interval, x: f64) -> bool {
        let lo = num_traits::ToPrimitive::to_f64(&i.lo).unwrap();
        let hi = num_traits::ToPrimitive::to_f64(&i.hi).unwrap();
        lo <= x + 1e-15 && x - 1e-15 <= hi
    }

    #[test]
    fn constants_enclose_float_values() {
        for prec in [20, 64, 200] {
            assert!(contains(&ln2(prec), std::f64::consts::LN_2));
            assert!(contains(&e(prec), std::f64::consts::E));
            let w = ln2(prec).width();
            assert!(w <= BigRational::new(BigInt::one(), BigInt::one() << (prec - 2)));
        }
        for n in [1u32, 2, 3, 10, 21, 1000, 1451520] {
            let i = ln_int(&BigUint::from(n), 80);
            assert!(contains(&i, (n as f64).ln()), "ln {n}");
        }
        assert!(contains(&ln(&rat(5, 4), 80), 1.25f64.ln()));
        assert!(contains(&ln(&rat(1, 3), 80), (1.0f64 / 3.0).ln()));
    }

    #[test]
    fn arithmetic_is_outward() {
        let a = Interval::new(rat(-1, 2), rat(3, 1));
        let b = Interval::new(rat(2, 1), rat(5, 1));
        let p = &a * &b;
        assert_eq!(p, Interval::new(rat(-5, 2), rat(15, 1)));
        assert_eq!(a.sign(), None);
        assert_eq!(b.sign(), Some(Ordering::Greater));
        assert_eq!(b.recip().unwrap(), Interval::new(rat(1, 5), rat(1, 2)));
        let r = Interval::exact(rat(1, 3)).round(4);
        assert!(r.lo < rat(1, 3) && r.hi > rat(1, 3));
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("2/4"), Some(rat(1, 2)));
        assert_eq!(parse_rational(" 3 "), Some(rat(3, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert!(parse_rational("0.5").is_none());
    }
}
