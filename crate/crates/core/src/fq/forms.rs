//! Symplectic, quadratic and hermitian forms on the standard basis, and
//! classification of subspaces with respect to them.
//!
//! Even dimension `2n` uses the basis `e_1..e_n, f_1..f_n`; the odd
//! quadratic form appends one vector `v` with `Q(v) = 1`, which spans the
//! radical of the polar form in characteristic 2.

use serde::{Deserialize, Serialize};

use super::field::{Fq, FqField};
use super::matrix::{FqMatrix, SubspaceFq};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Symplectic,
    QuadraticPlus,
    QuadraticMinus,
    QuadraticOdd,
    Hermitian,
}

impl FormKind {
    pub fn is_quadratic(self) -> bool {
        matches!(self, FormKind::QuadraticPlus | FormKind::QuadraticMinus | FormKind::QuadraticOdd)
    }
}

/// A form on `GF(field)^m`. For hermitian forms the field has order `q^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpec {
    pub kind: FormKind,
    pub m: usize,
    /// Order of the field the matrices live over.
    pub field: u32,
    /// Gram matrix of the bilinear (polar, for quadratic forms) or
    /// sesquilinear form.
    pub gram: FqMatrix,
    /// `Q(b_i)` for each basis vector; quadratic forms only.
    pub q_diag: Option<Vec<Fq>>,
}

impl FormSpec {
    pub fn symplectic(m: usize, f: &FqField) -> Result<Self> {
        if m == 0 || m % 2 != 0 {
            return Err(Error::invalid("symplectic dimension must be even"));
        }
        let n = m / 2;
        let mut g = FqMatrix::zero(m, m);
        for i in 0..n {
            g.set(i, n + i, 1);
            g.set(n + i, i, f.neg(1));
        }
        Ok(FormSpec {
            kind: FormKind::Symplectic,
            m,
            field: f.q(),
            gram: g,
            q_diag: None,
        })
    }

    pub fn quadratic(kind: FormKind, m: usize, f: &FqField) -> Result<Self> {
        let odd = kind == FormKind::QuadraticOdd;
        if !kind.is_quadratic() || m == 0 || (m % 2 == 1) != odd {
            return Err(Error::invalid(format!("dimension {m} does not fit {kind:?}")));
        }
        let n = m / 2;
        let mut g = FqMatrix::zero(m, m);
        let mut qd = vec![0; m];
        for i in 0..n {
            g.set(i, n + i, 1);
            g.set(n + i, i, 1);
        }
        if kind == FormKind::QuadraticMinus {
            // Q(a e_n + b f_n) = a^2 + ab + zeta b^2 with t^2 + t + zeta irreducible
            let zeta = irreducible_constant(f);
            let (e, fv) = (n - 1, 2 * n - 1);
            qd[e] = 1;
            qd[fv] = zeta;
            g.set(e, e, f.add(1, 1));
            g.set(fv, fv, f.add(zeta, zeta));
        }
        if odd {
            qd[m - 1] = 1;
            g.set(m - 1, m - 1, f.add(1, 1));
        }
        Ok(FormSpec {
            kind,
            m,
            field: f.q(),
            gram: g,
            q_diag: Some(qd),
        })
    }

    /// Antidiagonal hermitian form over `f`, which must have square order.
    pub fn hermitian(m: usize, f: &FqField) -> Result<Self> {
        if f.sqrt_order().is_none() {
            return Err(Error::invalid("hermitian forms need a field of square order"));
        }
        let mut g = FqMatrix::zero(m, m);
        for i in 0..m {
            g.set(i, m - 1 - i, 1);
        }
        Ok(FormSpec {
            kind: FormKind::Hermitian,
            m,
            field: f.q(),
            gram: g,
            q_diag: None,
        })
    }

    /// `B(x, y)`; sesquilinear in `y` for hermitian forms.
    pub fn bilinear(&self, x: &[Fq], y: &[Fq], f: &FqField) -> Fq {
        let gy: Vec<Fq> = if self.kind == FormKind::Hermitian {
            let yc: Vec<Fq> = y.iter().map(|&a| f.conj(a).unwrap()).collect();
            self.gram.transpose().vec_mul(&yc, f)
        } else {
            self.gram.transpose().vec_mul(y, f)
        };
        x.iter().zip(&gy).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// `Q(x)`; for non-quadratic forms `B(x, x)`.
    pub fn quad(&self, x: &[Fq], f: &FqField) -> Fq {
        let Some(qd) = &self.q_diag else {
            return self.bilinear(x, x, f);
        };
        let mut acc = 0;
        for i in 0..self.m {
            if x[i] == 0 {
                continue;
            }
            acc = f.add(acc, f.mul(qd[i], f.mul(x[i], x[i])));
            for j in i + 1..self.m {
                let b = self.gram.get(i, j);
                if b != 0 && x[j] != 0 {
                    acc = f.add(acc, f.mul(b, f.mul(x[i], x[j])));
                }
            }
        }
        acc
    }

    /// Whether `x -> x g` preserves the form: `g Gram g^T = Gram` (with the
    /// conjugate on the right factor for hermitian forms), and `Q` on the
    /// basis for quadratic forms.
    pub fn preserved_by(&self, g: &FqMatrix, f: &FqField) -> bool {
        let right = if self.kind == FormKind::Hermitian {
            match g.conjugate(f) {
                Ok(c) => c.transpose(),
                Err(_) => return false,
            }
        } else {
            g.transpose()
        };
        if g.mul(&self.gram, f).mul(&right, f) != self.gram {
            return false;
        }
        if let Some(qd) = &self.q_diag {
            for (i, &qi) in qd.iter().enumerate() {
                if self.quad(g.row(i), f) != qi {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_singular(&self, x: &[Fq], f: &FqField) -> bool {
        self.quad(x, f) == 0
    }
}

/// The smallest `zeta` with `t^2 + t + zeta` irreducible over `f`.
pub fn irreducible_constant(f: &FqField) -> Fq {
    f.elements()
        .find(|&z| f.elements().all(|t| f.add(f.add(f.mul(t, t), t), z) != 0))
        .expect("an irreducible quadratic exists")
}

/// Plus or minus type of a nondegenerate even-dimensional quadratic space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceType {
    pub dim: usize,
    pub degenerate: bool,
    pub totally_isotropic: bool,
    /// Quadratic forms only.
    pub totally_singular: Option<bool>,
    /// Dimension of a maximal totally singular (quadratic) or totally
    /// isotropic subspace.
    pub witt_index: usize,
    pub sign: Option<Sign>,
}

/// Largest `q^dim` for which subspace classification enumerates vectors.
const CLASSIFY_LIMIT: usize = 1 << 20;

/// Classifies `u` with respect to `form`.
pub fn subspace_type(form: &FormSpec, u: &SubspaceFq, f: &FqField) -> Result<SubspaceType> {
    if u.ambient() != form.m {
        return Err(Error::invalid(format!(
            "subspace of dimension-{} space, form on dimension {}",
            u.ambient(),
            form.m
        )));
    }
    let dim = u.dim();
    if (f.q() as usize).checked_pow(dim as u32).map_or(true, |n| n > CLASSIFY_LIMIT) {
        return Err(Error::Unsupported("subspace too large to classify".into()));
    }
    let basis = u.basis();
    let totally_isotropic = basis
        .iter()
        .all(|x| basis.iter().all(|y| form.bilinear(x, y, f) == 0));
    let quadratic = form.kind.is_quadratic();
    let vectors = u.vectors(f);
    let totally_singular = quadratic.then(|| vectors.iter().all(|v| form.is_singular(v, f)));
    // radical of the restricted form
    let radical: Vec<&Vec<Fq>> = vectors
        .iter()
        .filter(|v| v.iter().any(|&a| a != 0))
        .filter(|v| basis.iter().all(|b| form.bilinear(v, b, f) == 0))
        .collect();
    let degenerate = if quadratic {
        radical.iter().any(|v| form.is_singular(v, f))
    } else {
        !radical.is_empty()
    };
    let witt_index = maximal_null_subspace(form, &vectors, f);
    let sign = (quadratic && !degenerate && dim % 2 == 0 && dim > 0).then(|| {
        if witt_index == dim / 2 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    });
    Ok(SubspaceType {
        dim,
        degenerate,
        totally_isotropic,
        totally_singular,
        witt_index,
        sign,
    })
}

/// Greedily extends a totally singular (or isotropic) subspace inside the
/// span of `vectors`. All maximal such subspaces share one dimension, so
/// the greedy result is the Witt index.
fn maximal_null_subspace(form: &FormSpec, vectors: &[Vec<Fq>], f: &FqField) -> usize {
    let m = form.m;
    let mut chosen: Vec<Vec<Fq>> = Vec::new();
    loop {
        let span = SubspaceFq::span(m, &chosen, f).unwrap();
        let next = vectors.iter().find(|v| {
            v.iter().any(|&a| a != 0)
                && form.quad(v, f) == 0
                && chosen.iter().all(|c| form.bilinear(v, c, f) == 0)
                && !span.contains(v, f)
        });
        match next {
            Some(v) => chosen.push(v.clone()),
            None => return chosen.len(),
        }
    }
}
