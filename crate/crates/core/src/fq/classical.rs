//! Generating matrices for the classical groups over small fields.
//!
//! A recipe is accepted when the permutation image of its generators has
//! the order given by [`classical_order`]; the tests check this for every
//! family at several parameters.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::field::{Fq, FqField};
use super::forms::{FormKind, FormSpec};
use super::matrix::{all_vectors, normalize, FqMatrix};
use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 12;
pub const MAX_Q: u32 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SL,
    GL,
    Sp,
    SU,
    #[serde(rename = "GO+")]
    GOPlus,
    #[serde(rename = "GO-")]
    GOMinus,
    #[serde(rename = "GO", alias = "GO-odd")]
    GOOdd,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "SL" => Family::SL,
            "GL" => Family::GL,
            "Sp" => Family::Sp,
            "SU" => Family::SU,
            "GO+" => Family::GOPlus,
            "GO-" => Family::GOMinus,
            "GO" | "GO-odd" => Family::GOOdd,
            _ => return Err(Error::invalid(format!("unknown classical family {s:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::SL => "SL",
            Family::GL => "GL",
            Family::Sp => "Sp",
            Family::SU => "SU",
            Family::GOPlus => "GO+",
            Family::GOMinus => "GO-",
            Family::GOOdd => "GO",
        })
    }
}

/// Matrix generators of a classical group and the form it preserves.
#[derive(Clone, Debug)]
pub struct ClassicalGroup {
    pub family: Family,
    pub m: usize,
    pub q: u32,
    /// Field of the matrix entries: `q^2` for unitary groups, else `q`.
    pub field_order: u32,
    pub gens: Vec<FqMatrix>,
    pub form: Option<FormSpec>,
}

impl ClassicalGroup {
    pub fn field(&self) -> std::sync::Arc<FqField> {
        FqField::get(self.field_order).expect("validated at construction")
    }
}

pub fn classical_group_generators(family: Family, m: usize, q: u32) -> Result<ClassicalGroup> {
    let unsupported = || Error::Unsupported(format!("{family}({m},{q})"));
    if m == 0 || m > MAX_DIMENSION || q > MAX_Q {
        return Err(unsupported());
    }
    let field_order = if family == Family::SU { q * q } else { q };
    let f = FqField::get(field_order)?;
    if FqField::get(q)?.q() != q {
        return Err(unsupported());
    }
    let (gens, form) = match family {
        Family::SL | Family::GL => {
            if m < 2 && family == Family::SL {
                return Err(unsupported());
            }
            let mut gens = elementary_transvections(m, &f);
            if family == Family::GL && q > 2 {
                let mut d = FqMatrix::identity(m);
                d.set(0, 0, f.primitive_element());
                gens.push(d);
            }
            (gens, None)
        }
        Family::Sp => {
            let form = FormSpec::symplectic(m, &f)?;
            (symplectic_transvections(&form, &f), Some(form))
        }
        Family::GOPlus | Family::GOMinus | Family::GOOdd => {
            let kind = match family {
                Family::GOPlus => FormKind::QuadraticPlus,
                Family::GOMinus => FormKind::QuadraticMinus,
                _ => FormKind::QuadraticOdd,
            };
            if (kind == FormKind::QuadraticOdd) != (m % 2 == 1) || m < 2 {
                return Err(unsupported());
            }
            if family == Family::GOPlus && m == 4 && q == 2 {
                // the one orthogonal group not generated by reflections
                return Err(Error::Unsupported("GO+(4,2) is not generated by reflections".into()));
            }
            let form = FormSpec::quadratic(kind, m, &f)?;
            (reflections(&form, &f), Some(form))
        }
        Family::SU => {
            if m < 2 {
                return Err(unsupported());
            }
            let form = FormSpec::hermitian(m, &f)?;
            let gens = if m == 3 && q == 2 {
                // transvections only give a subgroup of index 4 here
                su32_elements(&form, &f)
            } else {
                unitary_transvections(&form, &f)
            };
            (gens, Some(form))
        }
    };
    if let Some(form) = &form {
        debug_assert!(gens.iter().all(|g| form.preserved_by(g, &f)));
    }
    Ok(ClassicalGroup {
        family,
        m,
        q,
        field_order,
        gens,
        form,
    })
}

/// `I + a E_{i,i+1}` and `I + a E_{i+1,i}` for `a` in a prime-field basis.
fn elementary_transvections(m: usize, f: &FqField) -> Vec<FqMatrix> {
    let mut out = Vec::new();
    for a in f.prime_basis() {
        for i in 0..m - 1 {
            for (r, c) in [(i, i + 1), (i + 1, i)] {
                let mut t = FqMatrix::identity(m);
                t.set(r, c, a);
                out.push(t);
            }
        }
    }
    out
}

/// The map `x -> x + c * B(x, v) * v` as a matrix (rows are basis images).
fn transvection(form: &FormSpec, v: &[Fq], c: Fq, f: &FqField) -> FqMatrix {
    let m = form.m;
    let mut t = FqMatrix::identity(m);
    for i in 0..m {
        let mut e = vec![0; m];
        e[i] = 1;
        let s = f.mul(c, form.bilinear(&e, v, f));
        if s == 0 {
            continue;
        }
        for j in 0..m {
            let val = f.add(t.get(i, j), f.mul(s, v[j]));
            t.set(i, j, val);
        }
    }
    t
}

fn unit(m: usize, i: usize) -> Vec<Fq> {
    let mut v = vec![0; m];
    v[i] = 1;
    v
}

fn plus(a: &[Fq], b: &[Fq], f: &FqField) -> Vec<Fq> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

fn symplectic_transvections(form: &FormSpec, f: &FqField) -> Vec<FqMatrix> {
    let m = form.m;
    let mut vs: Vec<Vec<Fq>> = (0..m).map(|i| unit(m, i)).collect();
    for i in 0..m {
        for j in i + 1..m {
            vs.push(plus(&unit(m, i), &unit(m, j), f));
        }
    }
    let mut out = Vec::new();
    for a in f.prime_basis() {
        for v in &vs {
            out.push(transvection(form, v, a, f));
        }
    }
    out
}

/// Reflections `x -> x - B(x, v) Q(v)^-1 v` in nonsingular vectors of
/// weight at most 3 with leading coefficient 1. When that set is large the
/// weight-3 vectors are limited to 0/1 entries.
fn reflections(form: &FormSpec, f: &FqField) -> Vec<FqMatrix> {
    let m = form.m;
    let mut vs = low_weight_vectors(m, 2, f);
    let full3 = low_weight_vectors(m, 3, f);
    if full3.len() <= 4000 {
        vs = full3;
    } else {
        let f2 = FqField::get(2).unwrap();
        vs.extend(low_weight_vectors(m, 3, &f2).into_iter().filter(|v| v.iter().filter(|&&x| x != 0).count() == 3));
    }
    vs.into_iter()
        .filter_map(|v| {
            let qv = form.quad(&v, f);
            let c = f.neg(f.inv(qv)?);
            let r = transvection(form, &v, c, f);
            (!r.is_identity()).then_some(r)
        })
        .collect()
}

/// `x -> x + a h(x, v) v` for isotropic `v` of weight at most 3 and `a` in a
/// prime-field basis of the trace-zero elements `a + a^q = 0`.
fn unitary_transvections(form: &FormSpec, f: &FqField) -> Vec<FqMatrix> {
    let m = form.m;
    let trace_zero: Vec<Fq> = f
        .elements()
        .filter(|&a| a != 0 && f.add(a, f.conj(a).unwrap()) == 0)
        .collect();
    let scalars = prime_span_basis(&trace_zero, f);
    let candidates: Vec<Vec<Fq>> = if (f.q() as usize).pow(m as u32) <= 1 << 16 {
        all_vectors(m, f)
    } else {
        low_weight_vectors(m, 3, f)
    };
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for v in candidates {
        if v.iter().all(|&x| x == 0) || form.bilinear(&v, &v, f) != 0 {
            continue;
        }
        let v = normalize(&v, f);
        if !seen.insert(v.clone()) {
            continue;
        }
        for &a in &scalars {
            out.push(transvection(form, &v, a, f));
        }
    }
    out
}

/// Every element of SU(3,2), found by enumerating all 3x3 matrices over GF(4).
fn su32_elements(form: &FormSpec, f: &FqField) -> Vec<FqMatrix> {
    (0..4u32.pow(9))
        .filter_map(|mut code| {
            let entries: Vec<Fq> = (0..9)
                .map(|_| {
                    let e = (code % 4) as Fq;
                    code /= 4;
                    e
                })
                .collect();
            let g = FqMatrix::from_flat(3, entries).ok()?;
            (!g.is_identity() && g.det(f) == 1 && form.preserved_by(&g, f)).then_some(g)
        })
        .collect()
}

/// A maximal prime-field-independent subset of `elems`.
fn prime_span_basis(elems: &[Fq], f: &FqField) -> Vec<Fq> {
    let mut basis: Vec<Fq> = Vec::new();
    let mut span: std::collections::HashSet<Fq> = [0].into_iter().collect();
    for &a in elems {
        if span.contains(&a) {
            continue;
        }
        basis.push(a);
        let old: Vec<Fq> = span.iter().copied().collect();
        for s in old {
            let mut t = a;
            for _ in 1..f.p() {
                span.insert(f.add(s, t));
                t = f.add(t, a);
            }
        }
    }
    basis
}

fn low_weight_vectors(m: usize, w: usize, f: &FqField) -> Vec<Vec<Fq>> {
    all_vectors(m, &FqField::get(2).unwrap())
        .into_iter()
        .filter(|pattern| {
            let wt = pattern.iter().filter(|&&x| x != 0).count();
            wt >= 1 && wt <= w
        })
        .flat_map(|pattern| {
            let support: Vec<usize> = (0..m).filter(|&i| pattern[i] != 0).collect();
            let q = f.q() as usize;
            let count = (q - 1).pow(support.len() as u32 - 1);
            (0..count).map(move |mut code| {
                let mut v = vec![0; m];
                v[support[0]] = 1;
                for &i in &support[1..] {
                    v[i] = (code % (q - 1) + 1) as Fq;
                    code /= q - 1;
                }
                v
            })
        })
        .collect()
}

/// The order of the matrix group a family names.
pub fn classical_order(family: Family, m: usize, q: u32) -> BigUint {
    let q = BigUint::from(q);
    let qp = |e: usize| q.pow(e as u32);
    let prod = |from: usize, to: usize, term: &dyn Fn(usize) -> BigUint| {
        (from..=to).fold(BigUint::one(), |acc, i| acc * term(i))
    };
    match family {
        Family::SL | Family::GL => {
            let sl = qp(m * (m - 1) / 2) * prod(2, m, &|i| qp(i) - 1u32);
            if family == Family::GL {
                sl * (&q - 1u32)
            } else {
                sl
            }
        }
        Family::Sp => {
            let n = m / 2;
            qp(n * n) * prod(1, n, &|i| qp(2 * i) - 1u32)
        }
        Family::GOPlus | Family::GOMinus => {
            let n = m / 2;
            let middle = if family == Family::GOPlus { qp(n) - 1u32 } else { qp(n) + 1u32 };
            BigUint::from(2u32) * qp(n * (n - 1)) * middle * prod(1, n - 1, &|i| qp(2 * i) - 1u32)
        }
        Family::GOOdd => {
            let n = m / 2;
            let two = if &q % 2u32 == BigUint::from(0u32) { 1u32 } else { 2u32 };
            BigUint::from(two) * qp(n * n) * prod(1, n, &|i| qp(2 * i) - 1u32)
        }
        Family::SU => {
            let gu = qp(m * (m - 1) / 2)
                * prod(1, m, &|i| if i % 2 == 0 { qp(i) - 1u32 } else { qp(i) + 1u32 });
            gu / (&q + 1u32)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_formulas() {
        assert_eq!(classical_order(Family::SL, 2, 3), BigUint::from(24u32));
        assert_eq!(classical_order(Family::Sp, 6, 2), BigUint::from(1451520u32));
        assert_eq!(classical_order(Family::GOPlus, 6, 2), BigUint::from(40320u32));
        assert_eq!(classical_order(Family::GOMinus, 6, 2), BigUint::from(51840u32));
        assert_eq!(classical_order(Family::GOOdd, 7, 2), BigUint::from(1451520u32));
        assert_eq!(classical_order(Family::SU, 3, 3), BigUint::from(6048u32));
        assert_eq!(classical_order(Family::SU, 4, 2), BigUint::from(25920u32));
        assert_eq!(classical_order(Family::GL, 4, 3), BigUint::from(24261120u32));
    }

    #[test]
    fn generators_preserve_their_forms_exhaustively() {
        let cases = [
            (Family::Sp, 4, 3),
            (Family::Sp, 6, 2),
            (Family::GOPlus, 6, 2),
            (Family::GOMinus, 4, 3),
            (Family::GOOdd, 5, 3),
            (Family::GOOdd, 7, 2),
            (Family::SU, 3, 3),
            (Family::SU, 4, 2),
        ];
        for (fam, m, q) in cases {
            let g = classical_group_generators(fam, m, q).unwrap();
            let f = g.field();
            let form = g.form.as_ref().unwrap();
            let vs = all_vectors(m, &f);
            for mat in &g.gens {
                assert!(form.preserved_by(mat, &f), "{fam}({m},{q})");
                if form.kind.is_quadratic() && vs.len() <= 1 << 16 {
                    for x in &vs {
                        assert_eq!(form.quad(&mat.vec_mul(x, &f), &f), form.quad(x, &f));
                    }
                }
            }
        }
    }

    #[test]
    fn determinants() {
        let g = classical_group_generators(Family::SL, 3, 4).unwrap();
        let f = g.field();
        assert!(g.gens.iter().all(|x| x.det(&f) == 1));
        let su = classical_group_generators(Family::SU, 3, 3).unwrap();
        let f9 = su.field();
        assert!(su.gens.iter().all(|x| x.det(&f9) == 1));
    }

    #[test]
    fn unsupported_parameters() {
        assert!(classical_group_generators(Family::Sp, 5, 2).is_err());
        assert!(classical_group_generators(Family::SL, 3, 11).is_err());
        assert!(classical_group_generators(Family::SL, 13, 2).is_err());
        assert!(classical_group_generators(Family::GOPlus, 4, 2).is_err());
        assert!(classical_group_generators(Family::SL, 2, 6).is_err());
    }
}
