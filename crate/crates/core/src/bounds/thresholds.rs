//! The thresholds `M(ε)` and `N(c, δ)`.
//!
//! `M(ε)` is the least integer `M >= 5e` such that `m^{3/2} <= (1+ε)^{m/e-1}`
//! for every `m >= M`. With `L = ln(1+ε)` the margin
//! `f(m) = (m/e - 1) L - (3/2) ln m` is increasing for `m > m* = 3e / (2L)`,
//! so the inequality is checked pointwise below `max(⌈5e⌉, ⌈m*⌉)` and by
//! bisection above it.
//!
//! `N(0, δ) = M(δ)` and `N(c, δ) = max(N(c-1, ε), M(ε), c)` with
//! `ε = (1+δ)^{3/5} - 1`. Every parameter met in the recursion satisfies
//! `ln(1+ε) = (3/5)^k ln(1+δ)`, so it is stored as the pair `(δ, k)` and
//! all comparisons use certified interval arithmetic.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::interval::{ceil_interval, e, ln, ln_int, Interval};
use crate::error::{Error, Result};

const START_PREC: u32 = 64;
const MAX_PREC: u32 = 1 << 13;

/// A parameter `ε` with `1 + ε = (1 + δ)^{(3/5)^k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Param {
    pub delta: BigRational,
    pub k: u32,
}

impl Param {
    pub fn rational(eps: BigRational) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::invalid("ε and δ must be positive"));
        }
        Ok(Param { delta: eps, k: 0 })
    }

    /// `(1+ε)^{3/5} - 1`.
    pub fn shrink(&self) -> Self {
        Param {
            delta: self.delta.clone(),
            k: self.k + 1,
        }
    }

    /// `ln(1 + ε)`.
    pub fn log1p(&self, prec: u32) -> Interval {
        let factor = BigRational::new(BigInt::from(3u32).pow(self.k), BigInt::from(5u32).pow(self.k));
        ln(&(BigRational::one() + &self.delta), prec + 4 + 2 * self.k).scale(&factor).round(prec)
    }

    /// Approximate value of ε, for display only.
    pub fn approx(&self) -> f64 {
        let d = self.delta.to_f64().unwrap_or(f64::NAN);
        (1.0 + d).powf(0.6f64.powi(self.k as i32)) - 1.0
    }
}

/// Evaluates `f` at increasing precision until its sign is certain.
pub(crate) fn certified_sign<F>(mut f: F) -> Result<Ordering>
where
    F: FnMut(u32) -> Interval,
{
    let mut prec = START_PREC;
    while prec <= MAX_PREC {
        if let Some(s) = f(prec).sign() {
            return Ok(s);
        }
        prec *= 2;
    }
    Err(Error::Resource("comparison undecided at maximum precision".into()))
}

/// `(m/e - 1) L - (3/2) ln m`.
fn margin(m: u64, p: &Param, prec: u32) -> Interval {
    let p2 = prec + 16;
    let einv = e(p2).recip().expect("e > 0");
    let mi = Interval::from_int(m as i64);
    let a = &(&(&mi * &einv) - &Interval::from_int(1)) * &p.log1p(p2);
    let b = ln_int(&BigUint::from(m), p2).scale(&BigRational::new(3.into(), 2.into()));
    (&a - &b).round(prec)
}

/// Whether `m^{3/2} <= (1+ε)^{m/e - 1}`.
pub fn inequality_holds(m: u64, p: &Param) -> Result<bool> {
    Ok(certified_sign(|prec| margin(m, p, prec))? != Ordering::Less)
}

fn ceil_certified(f: impl Fn(u32) -> Interval) -> Result<u64> {
    let mut prec = START_PREC;
    while prec <= MAX_PREC {
        if let Some(c) = ceil_interval(&f(prec)) {
            return c.to_u64().ok_or_else(|| Error::Resource("threshold too large".into()));
        }
        prec *= 2;
    }
    Err(Error::Resource("ceiling undecided at maximum precision".into()))
}

/// `⌈5e⌉`.
pub fn five_e_ceiling() -> u64 {
    ceil_certified(|prec| e(prec).scale(&BigRational::from_integer(5.into()))).expect("5e is not an integer")
}

#[derive(Clone, Debug, Serialize)]
pub struct MEpsilon {
    pub m: u64,
    /// `⌈m*⌉`, where the margin starts increasing.
    pub monotone_from: u64,
    pub start: u64,
}

/// `M(ε)` with its post-conditions checked: the inequality holds at `M` and
/// `M + 1000` and fails at `M - 1` unless `M = ⌈5e⌉`.
pub fn m_epsilon_param(p: &Param) -> Result<MEpsilon> {
    let start = five_e_ceiling();
    let mstar = ceil_certified(|prec| {
        let l = p.log1p(prec + 8);
        let num = e(prec + 8).scale(&BigRational::from_integer(3.into()));
        let den = l.scale(&BigRational::from_integer(2.into()));
        (&num * &den.recip().expect("ln(1+ε) > 0")).round(prec)
    })?;
    let hi = start.max(mstar);
    let m = if inequality_holds(hi, p)? {
        let mut m = hi;
        while m > start && inequality_holds(m - 1, p)? {
            m -= 1;
        }
        m
    } else {
        // f is increasing from hi on: find the first m where it is >= 0
        let mut lo = hi;
        let mut up = hi.checked_mul(2).ok_or_else(|| Error::Resource("threshold overflow".into()))?;
        while !inequality_holds(up, p)? {
            lo = up;
            up = up.checked_mul(2).ok_or_else(|| Error::Resource("threshold overflow".into()))?;
        }
        while up - lo > 1 {
            let mid = lo + (up - lo) / 2;
            if inequality_holds(mid, p)? {
                up = mid;
            } else {
                lo = mid;
            }
        }
        up
    };
    let post = inequality_holds(m, p)? && inequality_holds(m + 1000, p)? && (m == start || !inequality_holds(m - 1, p)?);
    if !post {
        return Err(Error::invalid("internal: M(ε) post-condition failed"));
    }
    Ok(MEpsilon {
        m,
        monotone_from: mstar,
        start,
    })
}

pub fn m_epsilon(eps: &BigRational) -> Result<u64> {
    Ok(m_epsilon_param(&Param::rational(eps.clone())?)?.m)
}

/// One level of the `N(c, δ)` recursion.
#[derive(Clone, Debug, Serialize)]
pub struct NStep {
    pub c: u32,
    /// `k` with `1 + param = (1 + δ)^{(3/5)^k}`.
    pub k: u32,
    pub param_approx: f64,
    pub n: u64,
    /// `N(c-1, ε)` and `M(ε)` for `c >= 1`, `M(δ)` for `c = 0`.
    pub n_prev: Option<u64>,
    pub m_eps: u64,
}

/// Memoized `N(c, δ)`.
pub struct NCalculator {
    delta: BigRational,
    m_cache: HashMap<u32, u64>,
    n_cache: HashMap<(u32, u32), u64>,
    pub trace: Vec<NStep>,
}

impl NCalculator {
    pub fn new(delta: BigRational) -> Result<Self> {
        Param::rational(delta.clone())?;
        Ok(NCalculator {
            delta,
            m_cache: HashMap::new(),
            n_cache: HashMap::new(),
            trace: Vec::new(),
        })
    }

    fn param(&self, k: u32) -> Param {
        Param {
            delta: self.delta.clone(),
            k,
        }
    }

    pub fn m(&mut self, k: u32) -> Result<u64> {
        if let Some(&m) = self.m_cache.get(&k) {
            return Ok(m);
        }
        let m = m_epsilon_param(&self.param(k))?.m;
        self.m_cache.insert(k, m);
        Ok(m)
    }

    /// `N(c, param_k)`.
    pub fn n(&mut self, c: u32, k: u32) -> Result<u64> {
        if let Some(&n) = self.n_cache.get(&(c, k)) {
            return Ok(n);
        }
        let (n, prev, m_eps) = if c == 0 {
            let m = self.m(k)?;
            (m, None, m)
        } else {
            let prev = self.n(c - 1, k + 1)?;
            let m = self.m(k + 1)?;
            (prev.max(m).max(c as u64), Some(prev), m)
        };
        self.n_cache.insert((c, k), n);
        self.trace.push(NStep {
            c,
            k,
            param_approx: self.param(k).approx(),
            n,
            n_prev: prev,
            m_eps,
        });
        Ok(n)
    }
}

pub fn n_c_delta(c: u32, delta: &BigRational) -> Result<u64> {
    NCalculator::new(delta.clone())?.n(c, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::interval::parse_rational;

    #[test]
    fn five_e() {
        assert_eq!(five_e_ceiling(), 14);
    }

    #[test]
    fn m_of_one() {
        let one = BigRational::one();
        assert_eq!(m_epsilon(&one).unwrap(), 21);
        let p = Param::rational(one).unwrap();
        assert!(!inequality_holds(20, &p).unwrap());
        assert!(inequality_holds(21, &p).unwrap());
    }

    #[test]
    fn clamp_and_monotonicity_in_eps() {
        let big = parse_rational("1000").unwrap();
        assert_eq!(m_epsilon(&big).unwrap(), 14);
        let mut last = 0;
        for s in ["4", "2", "1", "1/2", "1/4", "1/10"] {
            let m = m_epsilon(&parse_rational(s).unwrap()).unwrap();
            assert!(m >= last, "M should grow as ε shrinks");
            last = m;
        }
        assert!(m_epsilon(&parse_rational("0").unwrap()).is_err());
    }

    #[test]
    fn recursion_shape() {
        let delta = parse_rational("1/2").unwrap();
        let mut calc = NCalculator::new(delta.clone()).unwrap();
        assert_eq!(calc.n(0, 0).unwrap(), m_epsilon(&delta).unwrap());
        for c in 1..=3 {
            let n = calc.n(c, 0).unwrap();
            let expect = calc.n(c - 1, 1).unwrap().max(calc.m(1).unwrap()).max(c as u64);
            assert_eq!(n, expect);
            assert!(n >= c as u64);
        }
    }
}
