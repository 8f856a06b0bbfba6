//! Structure summary of a permutation group, recomputed on every call.

use num_bigint::BigUint;
use serde::Serialize;

use crate::constructions::LabeledAction;
use crate::error::Result;
use crate::group::GeneratedGroup;
use crate::structure::{composition_factors, is_solvable, minimal_gamma_d};

#[derive(Clone, Debug, Serialize)]
pub struct Description {
    pub label: Option<String>,
    pub degree: usize,
    #[serde(serialize_with = "crate::arith::decimal::serialize")]
    pub order: BigUint,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "crate::arith::decimal::opt")]
    pub kernel_order: Option<BigUint>,
    pub orbit_lengths: Vec<usize>,
    pub transitive: bool,
    pub primitive: bool,
    pub two_transitive: bool,
    /// Orbit lengths of a point stabilizer, sorted; only for transitive groups.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suborbits: Option<Vec<usize>>,
    pub solvable: bool,
    /// Composition factors with multiplicity, largest first; absent when the
    /// group is too large to decompose.
    pub composition_factors: Option<Vec<String>>,
    /// Least `d >= 5` with the group certified in Γ_d.
    pub minimal_gamma_d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Sorted orbit lengths of the stabilizer of the first point.
pub fn suborbits(g: &GeneratedGroup) -> Result<Vec<usize>> {
    let mut s: Vec<usize> = g.point_stabilizer(0)?.orbits().iter().map(Vec::len).collect();
    s.sort_unstable();
    Ok(s)
}

pub fn describe(a: &LabeledAction) -> Result<Description> {
    let g = &a.group;
    let mut orbit_lengths: Vec<usize> = g.orbits().iter().map(Vec::len).collect();
    orbit_lengths.sort_unstable();
    let transitive = g.is_transitive();
    let subs = if transitive && g.degree() > 0 { Some(suborbits(g)?) } else { None };
    let two_transitive = subs.as_ref().is_some_and(|s| s.len() <= 2);
    let (factors, note) = match composition_factors(g) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(Description {
        label: g.label().map(str::to_string),
        degree: g.degree(),
        order: g.order(),
        kernel_order: a.kernel_order(),
        orbit_lengths,
        transitive,
        primitive: transitive && g.is_primitive(),
        two_transitive,
        suborbits: subs,
        solvable: is_solvable(g),
        minimal_gamma_d: factors.as_deref().and_then(minimal_gamma_d),
        composition_factors: factors.map(|f| f.iter().map(ToString::to_string).collect()),
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recipe::Recipe;

    #[test]
    fn affine_summary() {
        let a = Recipe::from_json(r#"{"kind":"affine","q":2,"m":4,"family":"Sp"}"#)
            .unwrap()
            .build()
            .unwrap();
        let d = describe(&a).unwrap();
        assert_eq!(d.order, BigUint::from(11520u32));
        assert!(d.primitive && d.two_transitive && !d.solvable);
        assert_eq!(d.suborbits, Some(vec![1, 15]));
        let f = d.composition_factors.unwrap();
        assert_eq!(f.iter().filter(|s| *s == "C2").count(), 5);
        assert!(f.contains(&"A6".to_string()));
        assert_eq!(d.minimal_gamma_d, Some(7));
    }
}
