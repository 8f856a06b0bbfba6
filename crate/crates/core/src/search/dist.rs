use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Budget;
use crate::error::{Error, Result};
use crate::group::GeneratedGroup;

pub const DEFAULT_DIST_CAP: usize = 64;

const RANDOM_TRIES: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistOutcome {
    pub r: usize,
    /// Colour of each point, colours numbered from 0 in order of first
    /// appearance.
    pub coloring: Vec<usize>,
    /// Whether every smaller number of colours was excluded by search or by
    /// the counting bound.
    pub minimal: bool,
}

/// Elements of `g` mapping every colour class to itself.
pub fn preserving_subgroup(g: &GeneratedGroup, coloring: &[usize]) -> Result<GeneratedGroup> {
    if coloring.len() != g.degree() {
        return Err(Error::invalid("colouring length differs from the degree"));
    }
    let r = coloring.iter().copied().max().map_or(0, |m| m + 1);
    let mut h = g.clone();
    // the last class is preserved once all others are
    for c in 0..r.saturating_sub(1) {
        if h.is_trivial() {
            break;
        }
        let class: Vec<usize> = (0..coloring.len()).filter(|&i| coloring[i] == c).collect();
        h = h.setwise_stabilizer(&class)?;
    }
    Ok(h)
}

pub fn is_distinguishing(g: &GeneratedGroup, coloring: &[usize]) -> Result<bool> {
    Ok(preserving_subgroup(g, coloring)?.is_trivial())
}

/// Relabels colours by first appearance.
fn canonical(coloring: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    coloring
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}

/// Exhaustive search for a distinguishing `r`-colouring. Colours are
/// assigned to points in order with first appearances increasing. A partial
/// colouring is abandoned when some nontrivial element fixing every
/// uncoloured point preserves the colour classes seen so far, since it then
/// preserves every completion.
fn exhaustive(g: &GeneratedGroup, r: usize, budget: &Budget) -> Result<Option<Vec<usize>>> {
    let n = g.degree();
    let rev: Vec<usize> = (0..n).rev().collect();
    let chain = g.chain_with_base(&rev);
    // fixers[k]: pointwise stabilizer of points k..n
    let fixers: Vec<GeneratedGroup> = (0..=n)
        .map(|k| GeneratedGroup::from_chain_level(&chain, n - k))
        .collect();
    let mut col = vec![0usize; n];
    fn rec(
        k: usize,
        used: usize,
        r: usize,
        col: &mut Vec<usize>,
        fixers: &[GeneratedGroup],
        budget: &Budget,
    ) -> Result<bool> {
        let n = col.len();
        let h = &fixers[k];
        if !h.is_trivial() {
            budget.check()?;
            let mut partial = col[..k].to_vec();
            partial.extend((k..n).map(|_| r));
            if !preserving_subgroup(h, &partial)?.is_trivial() {
                return Ok(false);
            }
            if k == n {
                return Ok(true);
            }
        } else if k == n {
            return Ok(true);
        }
        if n - k < r - used {
            return Ok(false);
        }
        for c in 0..(used + 1).min(r) {
            col[k] = c;
            if rec(k + 1, used.max(c + 1), r, col, fixers, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    // all r colours need not appear, so allow fewer by not forcing `used == r`
    fn rec_any(
        r: usize,
        col: &mut Vec<usize>,
        fixers: &[GeneratedGroup],
        budget: &Budget,
    ) -> Result<bool> {
        for target in 1..=r {
            if rec(0, 0, target, col, fixers, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    if rec_any(r, &mut col, &fixers, budget)? {
        Ok(Some(canonical(&col)))
    } else {
        Ok(None)
    }
}

/// The least `r` with a distinguishing `r`-colouring, with a witness.
///
/// `G` acts semiregularly on distinguishing colourings, so `r^n >= |G|` is
/// necessary; search starts there. Each `r` is tried with random colourings
/// first and then exhaustively, so every smaller `r` is excluded when the
/// answer is returned.
pub fn distinguishing_number(g: &GeneratedGroup, cap: usize, budget: &Budget) -> Result<DistOutcome> {
    let n = g.degree();
    if n > cap {
        return Err(Error::DegreeLimit { degree: n, limit: cap });
    }
    if g.is_trivial() {
        return Ok(DistOutcome {
            r: 1,
            coloring: vec![0; n],
            minimal: true,
        });
    }
    let order = g.order();
    let mut r = 2;
    while BigUint::from(r).pow(n as u32) < order {
        r += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    loop {
        budget.check()?;
        for _ in 0..RANDOM_TRIES {
            let c: Vec<usize> = (0..n).map(|_| rng.gen_range(0..r)).collect();
            if is_distinguishing(g, &c)? {
                let coloring = canonical(&c);
                let r = coloring.iter().max().unwrap() + 1;
                return Ok(DistOutcome { r, coloring, minimal: true });
            }
        }
        if let Some(coloring) = exhaustive(g, r, budget)? {
            let r = coloring.iter().max().unwrap() + 1;
            return Ok(DistOutcome { r, coloring, minimal: true });
        }
        r += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(g: &GeneratedGroup) -> usize {
        let out = distinguishing_number(g, 64, &Budget::unlimited()).unwrap();
        assert!(is_distinguishing(g, &out.coloring).unwrap());
        out.r
    }

    /// Least r by trying every r-colouring.
    fn brute(g: &GeneratedGroup) -> usize {
        let n = g.degree();
        let elems: Vec<_> = g.chain().elements().filter(|p| !p.is_identity()).collect();
        (1..=n)
            .find(|&r| {
                (0..r.pow(n as u32)).any(|mut code| {
                    let c: Vec<usize> = (0..n)
                        .map(|_| {
                            let x = code % r;
                            code /= r;
                            x
                        })
                        .collect();
                    elems.iter().all(|p| (0..n).any(|i| c[p.apply(i)] != c[i]))
                })
            })
            .unwrap()
    }

    #[test]
    fn known_values() {
        for n in 2..=6 {
            assert_eq!(d(&GeneratedGroup::symmetric(n)), n);
        }
        assert_eq!(d(&GeneratedGroup::trivial(4)), 1);
        assert_eq!(d(&GeneratedGroup::dihedral(4)), 3);
        assert_eq!(d(&GeneratedGroup::cyclic(3)), 2);
    }

    #[test]
    fn agrees_with_brute_force() {
        let groups = [
            GeneratedGroup::dihedral(5),
            GeneratedGroup::dihedral(6),
            GeneratedGroup::alternating(5),
            GeneratedGroup::alternating(4),
            GeneratedGroup::cyclic(4),
            GeneratedGroup::from_cycle_strings(6, &["(1 2)", "(3 4)", "(5 6)", "(1 3 5)(2 4 6)"]).unwrap(),
            GeneratedGroup::from_cycle_strings(7, &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"]).unwrap(),
        ];
        for g in &groups {
            assert_eq!(d(g), brute(g), "{g:?}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(distinguishing_number(&GeneratedGroup::cyclic(70), 64, &Budget::unlimited()).is_err());
    }
}
