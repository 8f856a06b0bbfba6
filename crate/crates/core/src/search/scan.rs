use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use super::Budget;
use crate::error::{Error, Result};
use crate::group::GeneratedGroup;
use crate::structure::{composition_factors, factors_in_gamma, is_solvable, Tri};

/// Cap on orbit representatives visited by a scan.
const MAX_REPS: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    Solvable,
    Gamma(usize),
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "solvable" {
            return Ok(Predicate::Solvable);
        }
        match s.strip_prefix("gamma:").map(str::parse::<usize>) {
            Some(Ok(d)) if d >= 5 => Ok(Predicate::Gamma(d)),
            _ => Err(Error::invalid(format!("predicate {s:?}: expected solvable or gamma:d with d >= 5"))),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Solvable => f.write_str("solvable"),
            Predicate::Gamma(d) => write!(f, "gamma:{d}"),
        }
    }
}

impl Serialize for Predicate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Predicate {
    pub fn eval(&self, g: &GeneratedGroup) -> Result<Tri> {
        Ok(match self {
            Predicate::Solvable => Tri::from(is_solvable(g)),
            Predicate::Gamma(d) => factors_in_gamma(&composition_factors(g)?, *d),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    AllPass,
    Fail,
    /// Some stabilizer has an unidentified factor and none failed.
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanWitness {
    /// 1-based points.
    pub tuple: Vec<usize>,
    #[serde(serialize_with = "crate::arith::decimal::serialize")]
    pub order: BigUint,
    pub factors: Vec<String>,
    pub result: Tri,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub c: usize,
    pub predicate: Predicate,
    pub verdict: Verdict,
    /// False when the budget stopped the scan early.
    pub exhaustive: bool,
    pub representatives: usize,
    /// Largest stabilizer among the representatives, first in scan order.
    pub worst: Option<ScanWitness>,
    /// First failing representative, if any.
    pub failure: Option<ScanWitness>,
    /// Distinct stabilizer orders, ascending, with their number of
    /// representatives.
    #[serde(serialize_with = "crate::arith::decimal::pairs")]
    pub orders: Vec<(BigUint, usize)>,
}

impl ScanReport {
    pub fn max_order(&self) -> Option<&BigUint> {
        self.worst.as_ref().map(|w| &w.order)
    }
}

fn witness(points: &[usize], g: &GeneratedGroup, result: Tri) -> Result<ScanWitness> {
    Ok(ScanWitness {
        tuple: points.iter().map(|p| p + 1).collect(),
        order: g.order(),
        factors: composition_factors(g)?.iter().map(|f| f.to_string()).collect(),
        result,
    })
}

/// Evaluates `predicate` on the pointwise stabilizer of one representative
/// per orbit of ordered `c`-tuples of distinct points. The predicates are
/// conjugation invariant, so this covers every `c`-subset.
pub fn stabilizer_scan(g: &GeneratedGroup, c: usize, predicate: Predicate, budget: &Budget) -> Result<ScanReport> {
    if c == 0 || c > g.degree() {
        return Err(Error::invalid(format!("c = {c} at degree {}", g.degree())));
    }
    let reps = g.orbit_reps_on_tuples(c, MAX_REPS)?;
    let mut orders: std::collections::BTreeMap<BigUint, usize> = Default::default();
    let mut worst: Option<(usize, BigUint, Tri)> = None;
    let mut failure = None;
    let mut unknown = false;
    let mut exhaustive = true;
    let mut scanned = 0;
    for (i, rep) in reps.iter().enumerate() {
        if budget.check().is_err() {
            exhaustive = false;
            break;
        }
        let order = rep.stabilizer.order();
        let res = predicate.eval(&rep.stabilizer)?;
        scanned += 1;
        *orders.entry(order.clone()).or_default() += 1;
        if worst.as_ref().map_or(true, |(_, o, _)| order > *o) {
            worst = Some((i, order, res));
        }
        match res {
            Tri::No if failure.is_none() => failure = Some(witness(&rep.points, &rep.stabilizer, res)?),
            Tri::Unknown => unknown = true,
            _ => {}
        }
    }
    let verdict = if failure.is_some() {
        Verdict::Fail
    } else if unknown || !exhaustive {
        Verdict::Unknown
    } else {
        Verdict::AllPass
    };
    let worst = match worst {
        Some((i, _, res)) => Some(witness(&reps[i].points, &reps[i].stabilizer, res)?),
        None => None,
    };
    Ok(ScanReport {
        c,
        predicate,
        verdict,
        exhaustive,
        representatives: scanned,
        worst,
        failure,
        orders: orders.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_fails_alternating_passes() {
        let s8 = GeneratedGroup::symmetric(8);
        let r = stabilizer_scan(&s8, 2, Predicate::Solvable, &Budget::unlimited()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.representatives, 1);
        assert_eq!(r.failure.unwrap().order, BigUint::from(720u32));
        let s5 = GeneratedGroup::symmetric(5);
        let r = stabilizer_scan(&s5, 2, Predicate::Gamma(5), &Budget::unlimited()).unwrap();
        assert_eq!(r.verdict, Verdict::AllPass);
        assert_eq!(r.worst.unwrap().order, BigUint::from(6u32));
    }

    #[test]
    fn one_rep_for_transitive_c1() {
        let g = GeneratedGroup::dihedral(7);
        let r = stabilizer_scan(&g, 1, Predicate::Solvable, &Budget::unlimited()).unwrap();
        assert_eq!(r.representatives, 1);
        assert_eq!(r.verdict, Verdict::AllPass);
    }

    #[test]
    fn predicate_parsing() {
        assert_eq!("gamma:7".parse::<Predicate>().unwrap(), Predicate::Gamma(7));
        assert!("gamma:4".parse::<Predicate>().is_err());
        assert!("abelian".parse::<Predicate>().is_err());
        assert_eq!(Predicate::Gamma(6).to_string(), "gamma:6");
    }
}
