//! Integer helpers shared by the structure, search and bounds modules.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Prime factorization by trial division, primes ascending with
/// multiplicity.
pub fn factorize(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1
}

/// Factorization of a big integer that must fit in 64 bits.
pub fn factorize_big(n: &BigUint) -> Result<Vec<u64>> {
    let v = n
        .to_u64()
        .ok_or_else(|| Error::Unsupported(format!("cannot factor {n}")))?;
    Ok(factorize(v))
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `m` with `m!/2 == order`, for `m >= 5`.
pub fn alternating_degree(order: &BigUint) -> Option<usize> {
    let mut f = BigUint::from(60u32);
    let mut m = 5usize;
    while &f < order {
        m += 1;
        f *= m;
    }
    (&f == order).then_some(m)
}

/// `min { t >= 0 : base^t >= x }`, by integer powering.
pub fn ceil_log(base: &BigUint, x: &BigUint) -> Result<u32> {
    if base <= &BigUint::one() {
        return Err(Error::invalid("logarithm base must be at least 2"));
    }
    if x.is_zero() {
        return Err(Error::invalid("logarithm argument must be positive"));
    }
    let mut t = 0u32;
    let mut acc = BigUint::one();
    while &acc < x {
        acc *= base;
        t += 1;
    }
    debug_assert!(t == 0 || base.pow(t - 1) < *x);
    Ok(t)
}

pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(factorize(360), vec![2, 2, 2, 3, 3, 5]);
        assert_eq!(factorize(1), Vec::<u64>::new());
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
        assert_eq!(alternating_degree(&BigUint::from(20160u32)), Some(8));
        assert_eq!(alternating_degree(&BigUint::from(168u32)), None);
        let b = |x: u64| BigUint::from(x);
        assert_eq!(ceil_log(&b(36), &b(1451520)).unwrap(), 4);
        assert_eq!(ceil_log(&b(36), &b(2)).unwrap(), 1);
        assert_eq!(ceil_log(&b(3), &b(1)).unwrap(), 0);
        assert!(ceil_log(&b(1), &b(5)).is_err());
    }

    proptest! {
        #[test]
        fn ceil_log_brackets(base in 2u64..50, x in 1u64..1_000_000) {
            let t = ceil_log(&BigUint::from(base), &BigUint::from(x)).unwrap();
            prop_assert!(BigUint::from(base).pow(t) >= BigUint::from(x));
            if t > 0 {
                prop_assert!(BigUint::from(base).pow(t - 1) < BigUint::from(x));
            }
        }

        #[test]
        fn factorization_multiplies_back(n in 1u64..10_000_000) {
            let f = factorize(n);
            prop_assert_eq!(f.iter().product::<u64>(), n);
            prop_assert!(f.iter().all(|&p| is_prime(p)));
        }
    }
}

/// Serde helpers writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigUint::from(v)),
            Repr::Text(t) => t.parse().map_err(|_| D::Error::custom(format!("{t:?} is not an integer"))),
        }
    }

    pub fn opt<S: Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    /// `(value, count)` pairs.
    pub fn pairs<S: Serializer>(v: &[(BigUint, usize)], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for (x, n) in v {
            seq.serialize_element(&(x.to_string(), n))?;
        }
        seq.end()
    }
}
