//! Closed-form bounds, thresholds and measured-against-bound checks.
//!
//! Every verdict comes from exact integer comparison or from an interval
//! that excludes equality.

pub mod interval;
pub mod thresholds;

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;

use crate::arith::ceil_log;
use crate::error::{Error, Result};
use crate::group::GeneratedGroup;
use crate::search::{stabilizer_scan, Budget, Predicate, Verdict};
use crate::structure::{in_gamma, Tri};
use interval::{ln, ln_int, Interval};
use thresholds::{certified_sign, NCalculator};

pub use thresholds::{m_epsilon, n_c_delta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVerdict {
    Holds,
    Fails,
    InconclusiveInterval,
    PreconditionFailed,
    PreconditionUnknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundValue {
    Exact {
        #[serde(serialize_with = "crate::arith::decimal::serialize")]
        value: BigUint,
    },
    /// Natural logarithm of the bound, enclosed by decimal endpoints.
    LogInterval { lo: f64, hi: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub parameters: serde_json::Value,
    pub bound_value: BoundValue,
    pub measured_value: Option<String>,
    pub verdict: BoundVerdict,
    /// Outcome of the inequality itself, even when a precondition fails.
    pub comparison: Option<BoundVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn precondition_verdict(t: Tri) -> Option<BoundVerdict> {
    match t {
        Tri::Yes => None,
        Tri::No => Some(BoundVerdict::PreconditionFailed),
        Tri::Unknown => Some(BoundVerdict::PreconditionUnknown),
    }
}

/// Membership of Γ_d for `d >= 2`. `A_2` is trivial, so Γ_2 is empty;
/// `A_3` is cyclic of order 3; for `A_4` only the divisibility test is used.
pub fn gamma_certificate(g: &GeneratedGroup, d: usize) -> Result<Tri> {
    let order = g.order();
    Ok(match d {
        0 | 1 => return Err(Error::invalid("d must be at least 2")),
        2 => Tri::No,
        3 => Tri::from(!(&order % 3u32).is_zero()),
        4 => {
            if !(&order % 12u32).is_zero() {
                Tri::Yes
            } else {
                Tri::Unknown
            }
        }
        _ => in_gamma(g, d)?,
    })
}

/// `|G| < d^{n-1}` for `G` in Γ_d of degree `n`.
pub fn lemma22_check(g: &GeneratedGroup, d: usize) -> Result<BoundReport> {
    let cert = gamma_certificate(g, d)?;
    let n = g.degree();
    let bound = BigUint::from(d).pow((n - 1) as u32);
    let order = g.order();
    let cmp = if order < bound { BoundVerdict::Holds } else { BoundVerdict::Fails };
    Ok(BoundReport {
        bound_name: "lemma22".into(),
        parameters: json!({"d": d, "n": n, "group": g.label()}),
        bound_value: BoundValue::Exact { value: bound },
        measured_value: Some(order.to_string()),
        verdict: precondition_verdict(cert).unwrap_or(cmp),
        comparison: Some(cmp),
        note: (cert != Tri::Yes).then(|| format!("Γ_{d} membership: {cert}")),
    })
}

fn f64_of(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `|G| <= ((1+δ) d / e)^{n-1}`, given `d >= N(c, δ)` and every `c`-point
/// stabilizer in Γ_d (for `c = 0`, `G` itself).
pub fn theorem13_check(
    g: &GeneratedGroup,
    c: usize,
    d: usize,
    delta: &BigRational,
    budget: &Budget,
) -> Result<BoundReport> {
    let n = g.degree();
    if c > n {
        return Err(Error::invalid(format!("c = {c} exceeds the degree {n}")));
    }
    if d < 5 {
        return Err(Error::invalid("d must be at least 5"));
    }
    let mut calc = NCalculator::new(delta.clone())?;
    let threshold = calc.n(c as u32, 0)?;
    let mut notes = vec![format!("N({c}, {delta}) = {threshold}")];
    let mut pre = if (d as u64) < threshold {
        notes.push(format!("d = {d} is below N"));
        Some(BoundVerdict::PreconditionFailed)
    } else {
        None
    };
    if pre.is_none() {
        let t = if c == 0 {
            in_gamma(g, d)?
        } else {
            let scan = stabilizer_scan(g, c, Predicate::Gamma(d), budget)?;
            match scan.verdict {
                Verdict::AllPass => Tri::Yes,
                Verdict::Fail => Tri::No,
                Verdict::Unknown => Tri::Unknown,
            }
        };
        if t != Tri::Yes {
            notes.push(format!("{c}-point stabilizers in Γ_{d}: {t}"));
        }
        pre = precondition_verdict(t);
    }
    let order = g.order();
    let one_plus = BigRational::one() + delta;
    let dq = BigRational::from_integer(BigInt::from(d));
    let exps = BigRational::from_integer(BigInt::from(n as i64 - 1));
    // (n-1)(ln(1+δ) + ln d - 1) - ln|G|
    let rhs = |prec: u32| -> Interval {
        let p = prec + 16;
        let inner = &(&ln(&one_plus, p) + &ln(&dq, p)) - &Interval::from_int(1);
        inner.scale(&exps)
    };
    let diff = |prec: u32| (&rhs(prec) - &ln_int(&order, prec + 16)).round(prec);
    let cmp = match certified_sign(diff) {
        Ok(Ordering::Less) => BoundVerdict::Fails,
        Ok(_) => BoundVerdict::Holds,
        Err(e) if e.is_resource() => BoundVerdict::InconclusiveInterval,
        Err(e) => return Err(e),
    };
    let r = rhs(64);
    Ok(BoundReport {
        bound_name: "theorem13".into(),
        parameters: json!({"c": c, "d": d, "delta": delta.to_string(), "n": n, "group": g.label()}),
        bound_value: BoundValue::LogInterval {
            lo: f64_of(&r.lo),
            hi: f64_of(&r.hi),
        },
        measured_value: Some(order.to_string()),
        verdict: pre.unwrap_or(cmp),
        comparison: Some(cmp),
        note: Some(notes.join("; ")),
    })
}

/// The named closed-form bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    /// `⌈log_{|Δ|} d(Q)⌉ + b(L)`; parameters `|Δ|, d(Q), b(L)`.
    Prod,
    /// `⌈log|G| / log n⌉ + 3`; parameters `|G|, n`.
    Faw,
    /// `max{4, ⌈log k / log|T|⌉ + 2}`; parameters `k, |T|`.
    Diag,
    /// `⌈log_{⌈m/k⌉} m⌉ (⌈m/k⌉ - 1)`; parameters `m, k`.
    Subsets,
    /// `max{6, ⌈log_{m/k} k⌉ + 3}`; parameters `m, k`.
    Partition,
    /// `d^{n-1}`; parameters `d, n`.
    BcpOrder,
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "prod" | "prod_bound" => Formula::Prod,
            "faw" | "faw_bound" => Formula::Faw,
            "diag" | "diag_bound" => Formula::Diag,
            "subsets" | "subsets_bound" => Formula::Subsets,
            "partition" | "partition_bound" => Formula::Partition,
            "bcp_order" | "bcp_order_bound" => Formula::BcpOrder,
            _ => return Err(Error::invalid(format!("unknown formula {s:?}"))),
        })
    }
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::Prod => "prod_bound",
            Formula::Faw => "faw_bound",
            Formula::Diag => "diag_bound",
            Formula::Subsets => "subsets_bound",
            Formula::Partition => "partition_bound",
            Formula::BcpOrder => "bcp_order_bound",
        }
    }

    fn arity(self) -> usize {
        match self {
            Formula::Prod => 3,
            _ => 2,
        }
    }

    pub fn evaluate(self, p: &[BigUint]) -> Result<BigUint> {
        if p.len() != self.arity() {
            return Err(Error::invalid(format!("{} takes {} parameters", self.name(), self.arity())));
        }
        if p.iter().any(Zero::is_zero) && self != Formula::Prod {
            return Err(Error::invalid("parameters must be positive"));
        }
        let u = |x: u32| BigUint::from(x);
        Ok(match self {
            Formula::Prod => {
                if p[1].is_zero() {
                    return Err(Error::invalid("d(Q) must be positive"));
                }
                u(ceil_log(&p[0], &p[1])?) + &p[2]
            }
            Formula::Faw => u(ceil_log(&p[1], &p[0])? + 3),
            Formula::Diag => u((ceil_log(&p[1], &p[0])? + 2).max(4)),
            Formula::Subsets => {
                let r = p[0].div_ceil(&p[1]);
                u(ceil_log(&r, &p[0])?) * (r - 1u32)
            }
            Formula::Partition => {
                if !(&p[0] % &p[1]).is_zero() {
                    return Err(Error::invalid("k must divide m"));
                }
                let r = &p[0] / &p[1];
                u((ceil_log(&r, &p[1])? + 3).max(6))
            }
            Formula::BcpOrder => {
                let e = p[1].to_u32().ok_or_else(|| Error::invalid("n too large"))?;
                p[0].pow(e - 1)
            }
        })
    }
}

/// Evaluates a formula and, when `measured` is given, compares it: a base
/// size must not exceed the bound, an order must be strictly below
/// `bcp_order_bound`.
pub fn formula_suite(f: Formula, params: &[BigUint], measured: Option<&BigUint>) -> Result<BoundReport> {
    let value = f.evaluate(params)?;
    let cmp = measured.map(|m| {
        let ok = if f == Formula::BcpOrder { m < &value } else { m <= &value };
        if ok {
            BoundVerdict::Holds
        } else {
            BoundVerdict::Fails
        }
    });
    Ok(BoundReport {
        bound_name: f.name().into(),
        parameters: json!(params.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
        bound_value: BoundValue::Exact { value },
        measured_value: measured.map(|m| m.to_string()),
        verdict: cmp.unwrap_or(BoundVerdict::Holds),
        comparison: cmp,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use interval::parse_rational;

    fn ev(f: Formula, p: &[u64]) -> u64 {
        let p: Vec<BigUint> = p.iter().map(|&x| BigUint::from(x)).collect();
        f.evaluate(&p).unwrap().to_u64().unwrap()
    }

    #[test]
    fn formulas() {
        assert_eq!(ev(Formula::Prod, &[36, 2, 6]), 7);
        assert_eq!(ev(Formula::Diag, &[2, 60]), 4);
        assert_eq!(ev(Formula::Faw, &[1451520, 36]), 7);
        assert_eq!(ev(Formula::Partition, &[6, 2]), 6);
        assert_eq!(ev(Formula::Subsets, &[10, 3]), 2 * 3);
        assert_eq!(ev(Formula::BcpOrder, &[6, 5]), 1296);
        assert!(Formula::Partition.evaluate(&[BigUint::from(7u32), BigUint::from(2u32)]).is_err());
        assert!(Formula::Faw.evaluate(&[BigUint::from(7u32), BigUint::from(1u32)]).is_err());
    }

    #[test]
    fn lemma22() {
        let r = lemma22_check(&GeneratedGroup::symmetric(5), 6).unwrap();
        assert_eq!(r.verdict, BoundVerdict::Holds);
        assert_eq!(r.bound_value, BoundValue::Exact { value: BigUint::from(1296u32) });
        let r = lemma22_check(&GeneratedGroup::alternating(5), 5).unwrap();
        assert_eq!(r.verdict, BoundVerdict::PreconditionFailed);
        let r = lemma22_check(&GeneratedGroup::cyclic(4), 2).unwrap();
        assert_eq!(r.verdict, BoundVerdict::PreconditionFailed);
        let r = lemma22_check(&GeneratedGroup::cyclic(4), 3).unwrap();
        assert_eq!(r.verdict, BoundVerdict::Holds);
    }

    #[test]
    fn theorem13_small() {
        let one = parse_rational("1").unwrap();
        let t = GeneratedGroup::trivial(5);
        let r = theorem13_check(&t, 0, 21, &one, &Budget::unlimited()).unwrap();
        assert_eq!(r.verdict, BoundVerdict::Holds);
        // S_d at n = d fails the Γ_d hypothesis but the comparison is still reported
        let s = GeneratedGroup::symmetric(21);
        let r = theorem13_check(&s, 0, 21, &one, &Budget::unlimited()).unwrap();
        assert_eq!(r.verdict, BoundVerdict::PreconditionFailed);
        assert_eq!(r.comparison, Some(BoundVerdict::Holds));
        let r = theorem13_check(&t, 0, 20, &one, &Budget::unlimited()).unwrap();
        assert_eq!(r.verdict, BoundVerdict::PreconditionFailed);
    }
}
