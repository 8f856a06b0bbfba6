use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::Budget;
use crate::error::{Error, Result};
use crate::group::GeneratedGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RegularCount {
    Exact {
        #[serde(serialize_with = "crate::arith::decimal::serialize")]
        count: BigUint,
    },
    /// The count is at least the threshold.
    ReachedThreshold {
        #[serde(serialize_with = "crate::arith::decimal::serialize")]
        threshold: BigUint,
    },
}

impl RegularCount {
    pub fn reached(&self, threshold: &BigUint) -> bool {
        match self {
            RegularCount::Exact { count } => count >= threshold,
            RegularCount::ReachedThreshold { threshold: t } => t >= threshold,
        }
    }
}

/// Number of `r`-tuples (repetition allowed) whose pointwise stabilizer in
/// `h` is trivial, capped at `cap`. Orbits of `h` are collapsed: each orbit
/// contributes its length times the count below one representative.
fn count(h: &GeneratedGroup, r: usize, n: &BigUint, cap: &BigUint, budget: &Budget) -> Result<BigUint> {
    if h.is_trivial() {
        return Ok(n.pow(r as u32).min(cap.clone()));
    }
    if r == 0 {
        return Ok(BigUint::zero());
    }
    budget.check()?;
    let mut total = BigUint::zero();
    for orbit in h.orbits() {
        let x = orbit[0];
        let sub = if orbit.len() == 1 { h.clone() } else { h.point_stabilizer(x)? };
        if orbit.len() == 1 && r > 1 {
            // fixing an already fixed point changes nothing
            total += count(&sub, r - 1, n, cap, budget)?;
        } else if orbit.len() > 1 {
            let remaining = (cap - &total + orbit.len() - 1u32) / orbit.len();
            total += count(&sub, r - 1, n, &remaining, budget)? * orbit.len();
        }
        if &total >= cap {
            return Ok(cap.clone());
        }
    }
    Ok(total)
}

/// `|{(δ, λ_1, …, λ_{t-1}) ∈ Δ^t : ⋂ K_{λ_i} = 1}|` for `K = L_δ`, which is
/// the number of `t`-tuples whose pointwise stabilizer in `L` is trivial.
/// Stops once the count reaches `threshold`.
pub fn count_regular_tuples(
    l: &GeneratedGroup,
    t: usize,
    threshold: Option<&BigUint>,
    budget: &Budget,
) -> Result<RegularCount> {
    if t < 2 {
        return Err(Error::invalid("t must be at least 2"));
    }
    let n = BigUint::from(l.degree());
    let cap = match threshold {
        Some(th) => th.clone(),
        // no cap: the count never exceeds n^t
        None => n.pow(t as u32) + 1u32,
    };
    if cap.is_zero() {
        return Ok(RegularCount::ReachedThreshold { threshold: cap });
    }
    let orbits = l.orbits();
    let parts: Vec<Result<(BigUint, usize)>> = orbits
        .par_iter()
        .map(|o| {
            let sub = l.point_stabilizer(o[0])?;
            Ok((count(&sub, t - 1, &n, &cap, budget)?, o.len()))
        })
        .collect();
    let mut total = BigUint::zero();
    for p in parts {
        let (c, len) = p?;
        total += c * len;
    }
    if threshold.is_some() && total >= cap {
        Ok(RegularCount::ReachedThreshold { threshold: cap })
    } else {
        Ok(RegularCount::Exact { count: total })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn naive(l: &GeneratedGroup, t: usize) -> u64 {
        let n = l.degree();
        let elems: Vec<_> = l.chain().elements().filter(|p| !p.is_identity()).collect();
        let mut c = 0;
        for mut code in 0..n.pow(t as u32) {
            let tuple: Vec<usize> = (0..t)
                .map(|_| {
                    let x = code % n;
                    code /= n;
                    x
                })
                .collect();
            if elems.iter().all(|p| tuple.iter().any(|&x| p.apply(x) != x)) {
                c += 1;
            }
        }
        c
    }

    fn exact(l: &GeneratedGroup, t: usize) -> BigUint {
        match count_regular_tuples(l, t, None, &Budget::unlimited()).unwrap() {
            RegularCount::Exact { count } => count,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn s3_pairs() {
        assert_eq!(exact(&GeneratedGroup::symmetric(3), 2), BigUint::from(6u32));
    }

    #[test]
    fn agrees_with_naive() {
        let groups = [
            GeneratedGroup::symmetric(4),
            GeneratedGroup::alternating(5),
            GeneratedGroup::dihedral(6),
            GeneratedGroup::cyclic(5),
            GeneratedGroup::from_cycle_strings(6, &["(1 2)", "(3 4 5)"]).unwrap(),
            GeneratedGroup::trivial(3),
        ];
        for g in &groups {
            for t in 2..=3 {
                assert_eq!(exact(g, t), BigUint::from(naive(g, t)), "{g:?} t={t}");
            }
        }
    }

    #[test]
    fn threshold_semantics() {
        let g = GeneratedGroup::symmetric(4);
        let one = BigUint::one();
        let r = count_regular_tuples(&g, 3, Some(&one), &Budget::unlimited()).unwrap();
        assert_eq!(r, RegularCount::ReachedThreshold { threshold: one.clone() });
        let big = BigUint::from(10_000u32);
        let r = count_regular_tuples(&g, 3, Some(&big), &Budget::unlimited()).unwrap();
        assert_eq!(r, RegularCount::Exact { count: BigUint::from(naive(&g, 3)) });
        assert!(count_regular_tuples(&g, 1, None, &Budget::unlimited()).is_err());
    }
}
