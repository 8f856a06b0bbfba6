//! Dense matrices over small finite fields, and subspaces in reduced
//! row-echelon form.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{Fq, FqField};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl FqMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fq>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Ok(FqMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    /// Row-major entries of a square matrix.
    pub fn from_flat(n: usize, entries: Vec<Fq>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::invalid(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        Ok(FqMatrix {
            rows: n,
            cols: n,
            data: entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Fq] {
        &self.data
    }

    pub fn mul(&self, other: &FqMatrix, f: &FqField) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = FqMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// The row vector `v * self`.
    pub fn vec_mul(&self, v: &[Fq], f: &FqField) -> Vec<Fq> {
        let mut out = vec![0; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = self.row(k);
            for (o, &b) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(a, b));
            }
        }
        out
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Entrywise `a -> a^r` over GF(r^2).
    pub fn conjugate(&self, f: &FqField) -> Result<FqMatrix> {
        let data = self
            .data
            .iter()
            .map(|&a| f.conj(a).ok_or_else(|| Error::invalid("field has no involution")))
            .collect::<Result<Vec<_>>>()?;
        Ok(FqMatrix { data, ..*self })
    }

    pub fn scale(&self, c: Fq, f: &FqField) -> FqMatrix {
        FqMatrix {
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
            ..*self
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as Fq))
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self, f: &FqField) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).unwrap();
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FqField) -> usize {
        self.rref(f).1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn inverse(&self, f: &FqField) -> Option<FqMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FqMatrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FqMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn det(&self, f: &FqField) -> Fq {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det: Fq = 1;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).unwrap();
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(fm, "; ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(|a| a.to_string()).collect();
            write!(fm, "{}", r.join(" "))?;
        }
        write!(fm, "]")
    }
}

/// A subspace of `GF(q)^m` stored by its canonical basis: the nonzero rows
/// of the reduced row-echelon form of any spanning set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubspaceFq {
    ambient: usize,
    basis: Vec<Vec<Fq>>,
}

impl SubspaceFq {
    pub fn span(ambient: usize, rows: &[Vec<Fq>], f: &FqField) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ambient) {
            return Err(Error::invalid("vector length differs from ambient dimension"));
        }
        if rows.is_empty() {
            return Ok(SubspaceFq {
                ambient,
                basis: Vec::new(),
            });
        }
        let (r, pivots) = FqMatrix::from_rows(rows)?.rref(f);
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(SubspaceFq { ambient, basis })
    }

    /// Canonical record of a nonzero subspace.
    pub fn canonical(ambient: usize, rows: &[Vec<Fq>], f: &FqField) -> Result<Self> {
        let s = Self::span(ambient, rows, f)?;
        if s.dim() == 0 {
            return Err(Error::invalid("zero subspace where a subspace is required"));
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Fq>] {
        &self.basis
    }

    /// Image under `x -> x * g`.
    pub fn image(&self, g: &FqMatrix, f: &FqField) -> SubspaceFq {
        let rows: Vec<Vec<Fq>> = self.basis.iter().map(|v| g.vec_mul(v, f)).collect();
        Self::span(self.ambient, &rows, f).expect("shape preserved")
    }

    pub fn contains(&self, v: &[Fq], f: &FqField) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        FqMatrix::from_rows(&rows).map(|m| m.rank(f)).unwrap_or(0) == self.dim()
    }

    /// Every vector of the subspace, including zero. Callers bound
    /// `q^dim` first.
    pub fn vectors(&self, f: &FqField) -> Vec<Vec<Fq>> {
        let q = f.q() as usize;
        let total = q.pow(self.dim() as u32);
        let mut out = Vec::with_capacity(total);
        for code in 0..total {
            let mut c = code;
            let mut v = vec![0; self.ambient];
            for b in &self.basis {
                let a = (c % q) as Fq;
                c /= q;
                if a != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = f.add(*x, f.mul(a, y));
                    }
                }
            }
            out.push(v);
        }
        out
    }
}

impl fmt::Debug for SubspaceFq {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "<")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(fm, ", ")?;
            }
            let s: Vec<String> = b.iter().map(|a| a.to_string()).collect();
            write!(fm, "({})", s.join(" "))?;
        }
        write!(fm, ">")
    }
}

impl fmt::Display for SubspaceFq {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, fm)
    }
}

/// Scales `v` so that its first nonzero coordinate is 1. The zero vector is
/// returned unchanged.
pub fn normalize(v: &[Fq], f: &FqField) -> Vec<Fq> {
    match v.iter().find(|&&a| a != 0) {
        Some(&lead) => {
            let inv = f.inv(lead).unwrap();
            v.iter().map(|&a| f.mul(a, inv)).collect()
        }
        None => v.to_vec(),
    }
}

/// All vectors of `GF(q)^m` in lexicographic order of coordinates.
pub fn all_vectors(m: usize, f: &FqField) -> Vec<Vec<Fq>> {
    let q = f.q() as usize;
    let total = q.pow(m as u32);
    (0..total)
        .map(|code| {
            let mut c = code;
            let mut v = vec![0; m];
            for x in v.iter_mut().rev() {
                *x = (c % q) as Fq;
                c /= q;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(q: u32) -> std::sync::Arc<FqField> {
        FqField::get(q).unwrap()
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let f = field(5);
        let i = FqMatrix::identity(4);
        assert_eq!(i.rref(&f).0, i);
    }

    #[test]
    fn two_bases_give_one_record() {
        let f = field(3);
        let a = SubspaceFq::canonical(3, &[vec![1, 0, 2], vec![0, 1, 1]], &f).unwrap();
        let b = SubspaceFq::canonical(3, &[vec![1, 1, 0], vec![2, 0, 1]], &f).unwrap();
        assert_eq!(a, b);
        assert!(SubspaceFq::canonical(3, &[vec![0, 0, 0]], &f).is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let f = field(7);
        let m = FqMatrix::from_rows(&[vec![1, 2, 0], vec![3, 1, 4], vec![0, 5, 6]]).unwrap();
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&inv, &f).is_identity());
        let singular = FqMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(singular.inverse(&f).is_none());
        assert_eq!(singular.det(&f), 0);
        let d = m.det(&f);
        assert_eq!(f.mul(d, inv.det(&f)), 1);
    }

    fn arb_matrix(q: u32, n: usize) -> impl Strategy<Value = FqMatrix> {
        proptest::collection::vec(0..q as Fq, n * n).prop_map(move |e| FqMatrix::from_flat(n, e).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_matrix(9, 3), b in arb_matrix(9, 3), c in arb_matrix(9, 3)) {
            let f = field(9);
            prop_assert_eq!(a.mul(&b, &f).mul(&c, &f), a.mul(&b.mul(&c, &f), &f));
            prop_assert_eq!(f.mul(a.det(&f), b.det(&f)), a.mul(&b, &f).det(&f));
        }

        #[test]
        fn rref_is_idempotent_and_row_invariant(a in arb_matrix(4, 4), b in arb_matrix(4, 4)) {
            let f = field(4);
            let (r, _) = a.rref(&f);
            prop_assert_eq!(r.rref(&f).0, r.clone());
            prop_assert_eq!(a.inverse(&f).is_some(), a.rank(&f) == 4);
            if let Some(_) = b.inverse(&f) {
                // row operations do not change the row space
                let rows = a.row_vecs();
                let mixed = b.mul(&a, &f).row_vecs();
                prop_assert_eq!(SubspaceFq::span(4, &rows, &f).unwrap(), SubspaceFq::span(4, &mixed, &f).unwrap());
            }
        }
    }
}
