//! Dense permutations of `{0, .., n-1}`.
//!
//! Points are 0-based internally and 1-based in every textual form.
//! Composition uses the right-action convention: `x^(p*q) = (x^p)^q`,
//! i.e. `p * q` applies `p` first.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::PermError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &x) in images.iter().enumerate() {
            if x >= n {
                return Err(PermError::PointOutOfRange {
                    point: x + 1,
                    degree: n,
                    pos: i,
                });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(PermError::RepeatedPoint { point: x + 1, pos: i });
            }
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Caller guarantees `images` is a bijection of `0..images.len()`.
    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i as u32 == x)
        });
        Permutation { images }
    }

    /// Builds a permutation from a list of disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(PermError::PointOutOfRange {
                        point: x + 1,
                        degree,
                        pos: k,
                    });
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(PermError::RepeatedPoint { point: x + 1, pos: k });
                }
                images[x] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.images[x] as usize == x
    }

    /// Points moved by the permutation, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| !self.fixes(i)).collect()
    }

    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self * other)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// The conjugate `by^-1 * self * by`.
    pub fn conjugate(&self, by: &Permutation) -> Permutation {
        // x^(by^-1 self by): send x^by to (x^self)^by.
        let mut out = vec![0u32; self.degree()];
        for x in 0..self.degree() {
            out[by.apply(x)] = by.images[self.apply(x)];
        }
        Permutation { images: out }
    }

    /// Commutator `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        &(&self.inverse() * &other.inverse()) * &(self * other)
    }

    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.fixes(start) {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles().iter().map(Vec::len).collect()
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycle_lengths()
            .into_iter()
            .fold(BigUint::one(), |acc, l| acc.lcm(&BigUint::from(l)))
    }

    /// Order as a machine integer; `None` when it does not fit in `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for l in self.cycle_lengths() {
            acc = acc.checked_mul(l as u64 / acc.gcd(&(l as u64)))?;
        }
        Some(acc)
    }

    /// Parses 1-based disjoint-cycle notation such as `(1 2)(3,4,5)` or a
    /// bracketed image list such as `[2,1,4,3,5]`.
    pub fn parse(text: &str, degree: usize) -> Result<Permutation, PermError> {
        if degree == 0 {
            return Err(PermError::Syntax {
                pos: 0,
                msg: "degree must be at least 1".into(),
            });
        }
        let trimmed_start = text.len() - text.trim_start().len();
        let body = text.trim();
        if body.starts_with('[') {
            parse_image_list(body, trimmed_start, degree)
        } else {
            parse_cycles(body, trimmed_start, degree)
        }
    }

    /// Image list in 1-based form, as used in reports.
    pub fn to_image_list(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }
}

fn parse_number(bytes: &[u8], mut i: usize) -> (usize, usize) {
    let start = i;
    let mut v: usize = 0;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        v = v.saturating_mul(10).saturating_add((bytes[i] - b'0') as usize);
        i += 1;
    }
    debug_assert!(i > start);
    (v, i)
}

fn parse_cycles(body: &str, offset: usize, degree: usize) -> Result<Permutation, PermError> {
    let bytes = body.as_bytes();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; degree];
    let mut i = 0;
    if bytes.is_empty() {
        return Err(PermError::Syntax {
            pos: offset,
            msg: "empty permutation; use () for the identity".into(),
        });
    }
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' => i += 1,
            b'(' => {
                i += 1;
                let mut cycle = Vec::new();
                loop {
                    while i < bytes.len() && matches!(bytes[i], b' ' | b'\t' | b',') {
                        i += 1;
                    }
                    if i >= bytes.len() {
                        return Err(PermError::Syntax {
                            pos: offset + i,
                            msg: "unterminated cycle".into(),
                        });
                    }
                    if bytes[i] == b')' {
                        i += 1;
                        break;
                    }
                    if !bytes[i].is_ascii_digit() {
                        return Err(PermError::Syntax {
                            pos: offset + i,
                            msg: format!("unexpected character {:?}", bytes[i] as char),
                        });
                    }
                    let pos = offset + i;
                    let (v, next) = parse_number(bytes, i);
                    i = next;
                    if v == 0 || v > degree {
                        return Err(PermError::PointOutOfRange {
                            point: v,
                            degree,
                            pos,
                        });
                    }
                    if std::mem::replace(&mut seen[v - 1], true) {
                        return Err(PermError::RepeatedPoint { point: v, pos });
                    }
                    cycle.push(v - 1);
                }
                if cycle.len() > 1 {
                    cycles.push(cycle);
                }
            }
            c => {
                return Err(PermError::Syntax {
                    pos: offset + i,
                    msg: format!("unexpected character {:?}", c as char),
                })
            }
        }
    }
    Permutation::from_cycles(degree, &cycles)
}

fn parse_image_list(body: &str, offset: usize, degree: usize) -> Result<Permutation, PermError> {
    let bytes = body.as_bytes();
    if !body.ends_with(']') {
        return Err(PermError::Syntax {
            pos: offset + body.len(),
            msg: "image list must end with ']'".into(),
        });
    }
    let mut images = Vec::with_capacity(degree);
    let mut seen = vec![false; degree];
    let mut i = 1;
    let end = bytes.len() - 1;
    while i < end {
        match bytes[i] {
            b' ' | b'\t' | b',' => i += 1,
            c if c.is_ascii_digit() => {
                let pos = offset + i;
                let (v, next) = parse_number(bytes, i);
                i = next;
                if v == 0 || v > degree {
                    return Err(PermError::PointOutOfRange {
                        point: v,
                        degree,
                        pos,
                    });
                }
                if std::mem::replace(&mut seen[v - 1], true) {
                    return Err(PermError::RepeatedPoint { point: v, pos });
                }
                images.push(v as u32 - 1);
            }
            c => {
                return Err(PermError::Syntax {
                    pos: offset + i,
                    msg: format!("unexpected character {:?}", c as char),
                })
            }
        }
    }
    if images.len() != degree {
        return Err(PermError::Syntax {
            pos: offset + end,
            msg: format!("image list has {} entries, expected {degree}", images.len()),
        });
    }
    Ok(Permutation { images })
}

impl<'a> Mul<&'a Permutation> for &'a Permutation {
    type Output = Permutation;

    /// Apply `self`, then `rhs`.
    fn mul(self, rhs: &'a Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        Permutation {
            images: self.images.iter().map(|&x| rhs.images[x as usize]).collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn parse_identity_and_products_of_transpositions() {
        assert!(p("()", 5).is_identity());
        assert_eq!(p("(1 2)(3 4)", 5).to_image_list(), vec![2, 1, 4, 3, 5]);
        assert_eq!(p("[2,1,4,3,5]", 5), p("(1,2)(3,4)", 5));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match Permutation::parse("(1 2)(2 3)", 4) {
            Err(PermError::RepeatedPoint { point: 2, pos: 6 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match Permutation::parse("(1 7)", 5) {
            Err(PermError::PointOutOfRange { point: 7, pos: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Permutation::parse("(1 2", 5),
            Err(PermError::Syntax { .. })
        ));
        assert!(matches!(
            Permutation::parse("(1 x)", 5),
            Err(PermError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            Permutation::parse("[1,2]", 3),
            Err(PermError::Syntax { .. })
        ));
    }

    #[test]
    fn right_action_product() {
        let a = p("(1 2)", 3);
        let b = p("(2 3)", 3);
        assert_eq!(&a * &b, p("(1 3 2)", 3));
        assert!(a.compose(&p("()", 4)).is_err());
    }

    #[test]
    fn orders_and_inverses() {
        assert_eq!(p("(1 2 3)(4 5)", 5).order(), BigUint::from(6u32));
        assert_eq!(p("()", 5).order(), BigUint::one());
        assert_eq!(p("(1 2 3)", 3).inverse(), p("(1 3 2)", 3));
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_cancels(a in arb_perm(9)) {
            prop_assert!((&a.inverse() * &a).is_identity());
            prop_assert!((&a * &a.inverse()).is_identity());
        }

        #[test]
        fn composition_is_associative(a in arb_perm(8), b in arb_perm(8), c in arb_perm(8)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn display_reparses(a in arb_perm(12)) {
            prop_assert_eq!(Permutation::parse(&a.to_string(), 12).unwrap(), a);
        }

        #[test]
        fn order_is_least_power_to_identity(a in arb_perm(10)) {
            let k = a.order_u64().unwrap();
            prop_assert!(a.pow(k).is_identity());
            for j in 1..k {
                prop_assert!(!a.pow(j).is_identity());
            }
        }

        #[test]
        fn conjugate_matches_product(a in arb_perm(7), b in arb_perm(7)) {
            prop_assert_eq!(a.conjugate(&b), &(&b.inverse() * &a) * &b);
        }
    }
}
