//! Solvability, composition factors and membership of the class Γ_d of
//! groups with no section isomorphic to `A_d`.
//!
//! Γ_d is closed under subgroups, quotients and extensions, so a group lies
//! in Γ_d exactly when each composition factor does. The membership test is
//! built on that reduction; it is a derived algorithm, not a quoted one.

pub mod oracle;
pub mod table;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{alternating_degree, factorize_big, is_prime};
use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::group::GeneratedGroup;
use crate::perm::Permutation;

/// Default ceiling on `|G|` for composition-factor computations.
pub const DEFAULT_ORDER_LIMIT: u64 = 1_000_000_000_000;

/// Groups up to this order are enumerated exhaustively when an element
/// order has to be decided.
const ENUMERATION_LIMIT: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FactorKind {
    Cyclic { p: u64 },
    Alternating { m: usize },
    Identified { name: String },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDescriptor {
    #[serde(flatten)]
    pub kind: FactorKind,
    #[serde(with = "crate::arith::decimal")]
    pub order: BigUint,
    /// Largest `m` with `A_m` a section, 4 when there is none with `m >= 5`;
    /// `None` for unknown factors.
    pub max_alt_section: Option<usize>,
}

impl FactorDescriptor {
    pub fn cyclic(p: u64) -> Self {
        FactorDescriptor {
            kind: FactorKind::Cyclic { p },
            order: BigUint::from(p),
            max_alt_section: Some(4),
        }
    }

    pub fn alternating(m: usize) -> Self {
        FactorDescriptor {
            kind: FactorKind::Alternating { m },
            order: crate::arith::factorial(m as u64) / 2u32,
            max_alt_section: Some(m),
        }
    }

    pub fn unknown(order: BigUint) -> Self {
        FactorDescriptor {
            kind: FactorKind::Unknown,
            order,
            max_alt_section: None,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.kind, FactorKind::Cyclic { .. })
    }

    /// Whether this factor has no section isomorphic to `A_d`.
    pub fn in_gamma(&self, d: usize) -> Tri {
        match self.max_alt_section {
            Some(m) => Tri::from(m < d),
            None => {
                let alt = crate::arith::factorial(d as u64) / 2u32;
                if &self.order % &alt != BigUint::from(0u32) {
                    Tri::Yes
                } else {
                    Tri::Unknown
                }
            }
        }
    }
}

impl fmt::Display for FactorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FactorKind::Cyclic { p } => write!(f, "C{p}"),
            FactorKind::Alternating { m } => write!(f, "A{m}"),
            FactorKind::Identified { name } => write!(f, "{name}"),
            FactorKind::Unknown => write!(f, "?[{}]", self.order),
        }
    }
}

/// Three-valued answer for questions that may depend on unidentified
/// factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}

/// Normal closure of `seeds` in `g`. Stops early once the closure is all
/// of `g`.
pub fn normal_closure(g: &GeneratedGroup, seeds: &[Permutation]) -> GeneratedGroup {
    let full = g.order();
    let mut chain = StabChain::empty(g.degree());
    let mut queue: Vec<Permutation> = Vec::new();
    for s in seeds {
        if chain.add_generator(s) {
            queue.push(s.clone());
        }
    }
    while let Some(x) = queue.pop() {
        if chain.order() == full {
            break;
        }
        for s in g.generators() {
            let y = x.conjugate(s);
            if chain.add_generator(&y) {
                queue.push(y);
            }
        }
    }
    GeneratedGroup::from_parts(g.degree(), chain.irredundant_generators().to_vec())
}

pub fn derived_subgroup(g: &GeneratedGroup) -> GeneratedGroup {
    let gens = g.generators();
    let mut comms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.commutator(b);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    normal_closure(g, &comms)
}

/// `G = G^(0) > G^(1) > ...` down to the perfect residual, inclusive.
pub fn derived_series(g: &GeneratedGroup) -> Vec<GeneratedGroup> {
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let d = derived_subgroup(last);
        if d.order() == last.order() {
            break;
        }
        series.push(d);
    }
    series
}

pub fn is_solvable(g: &GeneratedGroup) -> bool {
    derived_series(g).last().unwrap().order().is_one()
}

pub fn composition_factors(g: &GeneratedGroup) -> Result<Vec<FactorDescriptor>> {
    composition_factors_with_limit(g, &BigUint::from(DEFAULT_ORDER_LIMIT))
}

/// Composition factors by descent: orbit actions and their kernels, block
/// actions and their kernels, derived subgroups of primitive groups, and
/// for perfect primitive groups either a proper normal subgroup or a
/// simplicity verdict followed by identification by order.
pub fn composition_factors_with_limit(
    g: &GeneratedGroup,
    limit: &BigUint,
) -> Result<Vec<FactorDescriptor>> {
    let order = g.order();
    if let Some(mut out) = giant_factors(g) {
        sort_factors(&mut out);
        return Ok(out);
    }
    if &order > limit {
        return Err(Error::OrderLimit {
            order: order.to_string(),
            bound: limit.to_string(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    descend(g, &mut out, &mut rng)?;
    sort_factors(&mut out);
    Ok(out)
}

/// `S_m` or `A_m` (`m >= 5`) acting on its single moved orbit, recognised by
/// order: the only subgroups of `S_m` of order `m!` and `m!/2`.
fn giant_factors(g: &GeneratedGroup) -> Option<Vec<FactorDescriptor>> {
    let orbits = g.orbits();
    let mut moved = orbits.iter().filter(|o| o.len() > 1);
    let m = moved.next()?.len();
    if moved.next().is_some() || m < 5 {
        return None;
    }
    let full = crate::arith::factorial(m as u64);
    let order = g.order();
    let mut out = vec![FactorDescriptor::alternating(m)];
    if order == full {
        out.push(FactorDescriptor::cyclic(2));
    } else if order * 2u32 != full {
        return None;
    }
    Some(out)
}

fn sort_factors(f: &mut [FactorDescriptor]) {
    f.sort_by(|a, b| b.order.cmp(&a.order).then_with(|| a.to_string().cmp(&b.to_string())));
}

fn descend(g: &GeneratedGroup, out: &mut Vec<FactorDescriptor>, rng: &mut ChaCha8Rng) -> Result<()> {
    let order = g.order();
    if order.is_one() {
        return Ok(());
    }
    if let Some(p) = order.to_u64().filter(|&p| is_prime(p)) {
        out.push(FactorDescriptor::cyclic(p));
        return Ok(());
    }
    if let Some(f) = giant_factors(g) {
        out.extend(f);
        return Ok(());
    }
    let orbits = g.orbits();
    let moved: Vec<&Vec<usize>> = orbits.iter().filter(|o| o.len() > 1).collect();
    if moved.len() == 1 && moved[0].len() < g.degree() {
        return descend(&g.restrict(moved[0])?, out, rng);
    }
    if moved.len() > 1 {
        let first = moved[0];
        descend(&g.restrict(first)?, out, rng)?;
        return descend(&g.pointwise_stabilizer(first)?, out, rng);
    }
    if let Some(sys) = g.nontrivial_block_system() {
        let block_of = sys.block_of();
        let (image, kernel) = g.action_image_and_kernel(sys.blocks.len(), |x| {
            let imgs = sys.blocks.iter().map(|b| block_of[x.apply(b[0])]).collect();
            Permutation::from_images(imgs).expect("blocks are permuted")
        })?;
        descend(&image, out, rng)?;
        return descend(&kernel, out, rng);
    }
    let d = derived_subgroup(g);
    let d_order = d.order();
    if d_order < order {
        for p in factorize_big(&(&order / &d_order))? {
            out.push(FactorDescriptor::cyclic(p));
        }
        return descend(&d, out, rng);
    }
    if let Some(n) = proper_normal_subgroup(g, rng) {
        // G/N is isomorphic to G_a/N_a because N is transitive.
        descend(&n, out, rng)?;
        let mut upper = Vec::new();
        descend(&g.point_stabilizer(0)?, &mut upper, rng)?;
        let mut lower = Vec::new();
        descend(&n.point_stabilizer(0)?, &mut lower, rng)?;
        for f in lower {
            let i = upper
                .iter()
                .position(|u| u.kind == f.kind && u.order == f.order)
                .ok_or_else(|| Error::Unsupported("inconsistent factor multisets".into()))?;
            upper.swap_remove(i);
        }
        out.extend(upper);
        return Ok(());
    }
    out.push(identify_simple(&order, |k| has_element_of_order(g, k)));
    Ok(())
}

/// Searches for a proper nontrivial normal subgroup among normal closures
/// of the generators, of random elements and of their prime-order powers.
fn proper_normal_subgroup(g: &GeneratedGroup, rng: &mut ChaCha8Rng) -> Option<GeneratedGroup> {
    let order = g.order();
    let mut probes: Vec<Permutation> = g.generators().to_vec();
    for _ in 0..12 {
        let x = g.chain().random_element(rng);
        if let Some(o) = x.order_u64() {
            for p in crate::arith::factorize(o) {
                probes.push(x.pow(o / p));
            }
        }
        probes.push(x);
    }
    probes.retain(|p| !p.is_identity());
    probes.dedup();
    for x in probes {
        let n = normal_closure(g, std::slice::from_ref(&x));
        if n.order() < order {
            return Some(n);
        }
    }
    None
}

/// Whether `g` has an element of order `k`: exhaustive for small groups,
/// otherwise a sampled search that can only confirm presence.
pub fn has_element_of_order(g: &GeneratedGroup, k: u64) -> Option<bool> {
    let divisible = |p: &Permutation| p.order_u64().is_some_and(|o| o % k == 0);
    let order = g.order();
    if order.to_u64().is_some_and(|o| o <= ENUMERATION_LIMIT) {
        return Some(g.chain().elements().any(|p| divisible(&p)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(k);
    for _ in 0..20_000 {
        if divisible(&g.chain().random_element(&mut rng)) {
            return Some(true);
        }
    }
    None
}

/// Names a simple group of the given order. `probe(k)` reports whether the
/// group has an element of order `k` (`None` when undecided); it is only
/// consulted when the order is ambiguous.
pub fn identify_simple<F>(order: &BigUint, probe: F) -> FactorDescriptor
where
    F: Fn(u64) -> Option<bool>,
{
    if let Some(p) = order.to_u64().filter(|&p| is_prime(p)) {
        return FactorDescriptor::cyclic(p);
    }
    let alt = alternating_degree(order);
    let entries: Vec<&table::SimpleEntry> = table::simple_table()
        .iter()
        .filter(|e| &BigUint::from(e.order) == order)
        .collect();
    if entries.is_empty() {
        return match alt {
            Some(m) => FactorDescriptor::alternating(m),
            None => FactorDescriptor::unknown(order.clone()),
        };
    }
    if entries.len() == 1 && alt.is_none() {
        return entries[0].descriptor();
    }
    let mut undecided = false;
    for e in &entries {
        match &e.disambiguator {
            Some(dis) => match probe(dis.element_order) {
                Some(has) if has == dis.present => return e.descriptor(),
                Some(_) => {}
                None => undecided = true,
            },
            None => undecided = true,
        }
    }
    match alt {
        Some(m) if !undecided => FactorDescriptor::alternating(m),
        _ => FactorDescriptor::unknown(order.clone()),
    }
}

/// Γ_d membership of a factor multiset.
pub fn factors_in_gamma(factors: &[FactorDescriptor], d: usize) -> Tri {
    let mut unknown = false;
    for f in factors {
        match f.in_gamma(d) {
            Tri::No => return Tri::No,
            Tri::Unknown => unknown = true,
            Tri::Yes => {}
        }
    }
    if unknown {
        Tri::Unknown
    } else {
        Tri::Yes
    }
}

/// Whether `g` has no section isomorphic to `A_d`; `d >= 5`.
pub fn in_gamma(g: &GeneratedGroup, d: usize) -> Result<Tri> {
    if d < 5 {
        return Err(Error::invalid(format!("Γ_d needs d >= 5, got {d}")));
    }
    Ok(factors_in_gamma(&composition_factors(g)?, d))
}

/// The least `d >= 5` with the factors in Γ_d, when every factor is
/// resolved.
pub fn minimal_gamma_d(factors: &[FactorDescriptor]) -> Option<usize> {
    let mut d = 5;
    for f in factors {
        d = d.max(f.max_alt_section? + 1);
    }
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(n: usize, gens: &[&str]) -> GeneratedGroup {
        GeneratedGroup::from_cycle_strings(n, gens).unwrap()
    }

    fn names(f: &[FactorDescriptor]) -> Vec<String> {
        f.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn derived_series_of_small_groups() {
        let s4 = GeneratedGroup::symmetric(4);
        let orders: Vec<u32> = derived_series(&s4).iter().map(|g| g.order().to_u32().unwrap()).collect();
        assert_eq!(orders, vec![24, 12, 4, 1]);
        assert!(is_solvable(&s4));
        assert!(!is_solvable(&GeneratedGroup::alternating(5)));
    }

    #[test]
    fn factors_of_symmetric_groups() {
        let s4 = composition_factors(&GeneratedGroup::symmetric(4)).unwrap();
        assert_eq!(names(&s4), vec!["C3", "C2", "C2", "C2"]);
        let s5 = composition_factors(&GeneratedGroup::symmetric(5)).unwrap();
        assert_eq!(names(&s5), vec!["A5", "C2"]);
        let s8 = composition_factors(&GeneratedGroup::symmetric(8)).unwrap();
        assert_eq!(names(&s8), vec!["A8", "C2"]);
    }

    #[test]
    fn factors_of_imprimitive_wreath() {
        let g = grp(
            10,
            &["(1 2 3 4 5)", "(1 2 3)", "(6 7 8 9 10)", "(6 7 8)", "(1 6)(2 7)(3 8)(4 9)(5 10)"],
        );
        assert_eq!(g.order(), BigUint::from(7200u32));
        let f = composition_factors(&g).unwrap();
        assert_eq!(names(&f), vec!["A5", "A5", "C2"]);
        let product: BigUint = f.iter().map(|x| x.order.clone()).product();
        assert_eq!(product, g.order());
    }

    #[test]
    fn perfect_non_simple_primitive() {
        // A5 x A5 acting on A5 by t -> a^-1 t b.
        let a5 = GeneratedGroup::alternating(5);
        let elems: Vec<Permutation> = a5.chain().elements().collect();
        let index: std::collections::HashMap<Permutation, usize> =
            elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut gens = Vec::new();
        for a in a5.generators() {
            let left: Vec<usize> = elems.iter().map(|t| index[&(&a.inverse() * t)]).collect();
            let right: Vec<usize> = elems.iter().map(|t| index[&(t * a)]).collect();
            gens.push(Permutation::from_images(left).unwrap());
            gens.push(Permutation::from_images(right).unwrap());
        }
        let g = GeneratedGroup::new(60, gens).unwrap();
        assert_eq!(g.order(), BigUint::from(3600u32));
        assert!(g.is_primitive());
        assert_eq!(names(&composition_factors(&g).unwrap()), vec!["A5", "A5"]);
    }

    #[test]
    fn gamma_membership() {
        let s4 = GeneratedGroup::symmetric(4);
        assert_eq!(in_gamma(&s4, 5).unwrap(), Tri::Yes);
        let a6 = GeneratedGroup::alternating(6);
        assert_eq!(in_gamma(&a6, 6).unwrap(), Tri::No);
        assert_eq!(in_gamma(&a6, 7).unwrap(), Tri::Yes);
        assert!(in_gamma(&a6, 4).is_err());
        let f = composition_factors(&a6).unwrap();
        assert_eq!(minimal_gamma_d(&f), Some(7));
    }

    #[test]
    fn identification_by_order() {
        let never = |_| Some(false);
        assert_eq!(identify_simple(&BigUint::from(60u32), never).to_string(), "A5");
        assert_eq!(identify_simple(&BigUint::from(7u32), never).to_string(), "C7");
        assert_eq!(identify_simple(&BigUint::from(25920u32), never).to_string(), "U4(2)");
        assert_eq!(identify_simple(&BigUint::from(20160u32), |_| Some(true)).to_string(), "A8");
        assert_eq!(identify_simple(&BigUint::from(20160u32), |_| None).kind, FactorKind::Unknown);
        assert_eq!(identify_simple(&BigUint::from(1_000_000_007u64 * 6), never).kind, FactorKind::Unknown);
    }

    #[test]
    fn element_order_probe_separates_a8() {
        let a8 = GeneratedGroup::alternating(8);
        assert_eq!(has_element_of_order(&a8, 15), Some(true));
        assert_eq!(has_element_of_order(&GeneratedGroup::alternating(7), 15), Some(false));
    }

    #[test]
    fn unknown_factor_is_three_valued() {
        let f = vec![FactorDescriptor::unknown(BigUint::from(2520u32 * 400))];
        assert_eq!(factors_in_gamma(&f, 7), Tri::Unknown);
        // |A_9| = 181440 does not divide 2520 * 400
        assert_eq!(factors_in_gamma(&f, 9), Tri::Yes);
    }
}
