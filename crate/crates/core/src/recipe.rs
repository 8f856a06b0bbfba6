//! JSON group recipes. Every recipe builds a [`LabeledAction`].

use serde::{Deserialize, Serialize};

use crate::constructions::{
    affine_action, coset_action, diagonal_type_group, find_seed, matrix_orbit_action, matrix_vector_action,
    partitions_action, subsets_action, wreath_imprimitive, wreath_product_action, LabeledAction, SubspaceFilter,
    VectorAction, DEFAULT_DEGREE_CAP,
};
use crate::error::{Error, Result};
use crate::fq::{classical_group_generators, Family, Fq, FqField, FqMatrix, SubspaceFq};
use crate::group::GeneratedGroup;
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Recipe {
    Generators {
        degree: usize,
        gens: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Symmetric {
        n: usize,
    },
    Alternating {
        n: usize,
    },
    Cyclic {
        n: usize,
    },
    Dihedral {
        n: usize,
    },
    /// A classical group acting on vectors or one-spaces of its natural module.
    Classical {
        family: Family,
        m: usize,
        q: u32,
        #[serde(default)]
        action: VectorAction,
    },
    /// Square matrices in row-major order; entries encode field elements as
    /// integers below `q`.
    MatrixGenerators {
        q: u32,
        mats: Vec<Vec<u32>>,
        #[serde(default)]
        action: VectorAction,
    },
    ClassicalSubspaceAction {
        family: Family,
        m: usize,
        q: u32,
        k: usize,
        #[serde(default)]
        filter: SubspaceFilter,
        /// Spanning vectors of the seed subspace; found automatically if absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<Vec<Vec<u32>>>,
    },
    /// Right cosets of `subgroup` in `group`; both recipes must produce
    /// groups on the same point set.
    CosetAction {
        group: Box<Recipe>,
        subgroup: Box<Recipe>,
    },
    Subsets {
        m: usize,
        k: usize,
        #[serde(default)]
        alt: bool,
    },
    Partitions {
        m: usize,
        k: usize,
        #[serde(default)]
        alt: bool,
    },
    /// `GF(q)^m : H` with `H` a classical group or explicit matrices.
    Affine {
        q: u32,
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        family: Option<Family>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mats: Option<Vec<Vec<u32>>>,
    },
    Wreath {
        base: Box<Recipe>,
        top: Box<Recipe>,
        action: WreathAction,
    },
    /// `T^2` on `T`, with the factor swap and optionally conjugation by
    /// `outer` (cycle notation on `T`'s points).
    Diagonal {
        socle: Box<Recipe>,
        #[serde(default)]
        swap: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        outer: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WreathAction {
    Imprimitive,
    Product,
}

fn element(f: &FqField, e: u32) -> Result<Fq> {
    if e < f.q() {
        Ok(e as Fq)
    } else {
        Err(Error::invalid(format!("{e} is not an element of GF({})", f.q())))
    }
}

fn matrices(mats: &[Vec<u32>], f: &FqField) -> Result<(Vec<FqMatrix>, usize)> {
    let mut m = None;
    let mut out = Vec::new();
    for entries in mats {
        let n = (entries.len() as f64).sqrt().round() as usize;
        if n == 0 || n * n != entries.len() {
            return Err(Error::invalid("matrix entry count is not a square"));
        }
        if *m.get_or_insert(n) != n {
            return Err(Error::invalid("matrices of different sizes"));
        }
        let vals = entries
            .iter()
            .map(|&e| element(f, e))
            .collect::<Result<Vec<Fq>>>()?;
        let g = FqMatrix::from_flat(n, vals)?;
        if g.rank(f) != n {
            return Err(Error::invalid("singular matrix"));
        }
        out.push(g);
    }
    let m = m.ok_or_else(|| Error::invalid("no matrices given"))?;
    Ok((out, m))
}

fn plain(group: GeneratedGroup) -> LabeledAction {
    let labels = (1..=group.degree()).map(|i| i.to_string()).collect();
    LabeledAction {
        group,
        labels,
        abstract_order: None,
    }
}

impl Recipe {
    pub fn from_json(text: &str) -> Result<Recipe> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<LabeledAction> {
        self.build_with_cap(DEFAULT_DEGREE_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<LabeledAction> {
        let check = |n: usize| {
            if n > cap {
                Err(Error::DegreeLimit { degree: n, limit: cap })
            } else {
                Ok(())
            }
        };
        let mut out = match self {
            Recipe::Generators { degree, gens, label } => {
                check(*degree)?;
                let strs: Vec<&str> = gens.iter().map(String::as_str).collect();
                let mut g = if strs.is_empty() {
                    GeneratedGroup::trivial(*degree)
                } else {
                    GeneratedGroup::from_cycle_strings(*degree, &strs)?
                };
                if let Some(l) = label {
                    g = g.with_label(l.clone());
                }
                plain(g)
            }
            Recipe::Symmetric { n } => {
                check(*n)?;
                plain(GeneratedGroup::symmetric(*n))
            }
            Recipe::Alternating { n } => {
                check(*n)?;
                plain(GeneratedGroup::alternating(*n))
            }
            Recipe::Cyclic { n } => {
                check(*n)?;
                plain(GeneratedGroup::cyclic(*n))
            }
            Recipe::Dihedral { n } => {
                check(*n)?;
                plain(GeneratedGroup::dihedral(*n))
            }
            Recipe::Classical { family, m, q, action } => {
                let c = classical_group_generators(*family, *m, *q)?;
                matrix_vector_action(&c.gens, &c.field(), *m, *action, cap)?
            }
            Recipe::MatrixGenerators { q, mats, action } => {
                let f = FqField::get(*q)?;
                let (gens, m) = matrices(mats, &f)?;
                matrix_vector_action(&gens, &f, m, *action, cap)?
            }
            Recipe::ClassicalSubspaceAction {
                family,
                m,
                q,
                k,
                filter,
                seed,
            } => {
                let c = classical_group_generators(*family, *m, *q)?;
                let f = c.field();
                let seed = match seed {
                    Some(rows) => {
                        let rows = rows
                            .iter()
                            .map(|r| {
                                r.iter()
                                    .map(|&e| element(&f, e))
                                    .collect::<Result<Vec<Fq>>>()
                            })
                            .collect::<Result<Vec<_>>>()?;
                        let u = SubspaceFq::span(*m, &rows, &f)?;
                        if u.dim() != *k {
                            return Err(Error::invalid(format!("seed spans dimension {}, not {k}", u.dim())));
                        }
                        u
                    }
                    None => find_seed(c.form.as_ref(), *m, *k, *filter, &f)?,
                };
                matrix_orbit_action(&c.gens, &f, c.form.as_ref(), &seed, *filter, cap)?
            }
            Recipe::CosetAction { group, subgroup } => {
                let g = group.build_with_cap(cap)?;
                let h = subgroup.build_with_cap(cap)?;
                coset_action(&g.group, &h.group, cap)?
            }
            Recipe::Subsets { m, k, alt } => subsets_action(*m, *k, *alt, cap)?,
            Recipe::Partitions { m, k, alt } => partitions_action(*m, *k, *alt, cap)?,
            Recipe::Affine { q, m, family, mats } => {
                let f = FqField::get(*q)?;
                let gens = match (family, mats) {
                    (Some(fam), None) => {
                        if *fam == Family::SU {
                            return Err(Error::invalid("affine recipes need a family over GF(q)"));
                        }
                        classical_group_generators(*fam, *m, *q)?.gens
                    }
                    (None, Some(mats)) => {
                        let (gens, dim) = matrices(mats, &f)?;
                        if dim != *m {
                            return Err(Error::invalid("matrix size differs from m"));
                        }
                        gens
                    }
                    _ => return Err(Error::invalid("affine recipe needs exactly one of family and mats")),
                };
                affine_action(&gens, &f, *m, cap)?
            }
            Recipe::Wreath { base, top, action } => {
                let l = base.build_with_cap(cap)?;
                let p = top.build_with_cap(cap)?;
                match action {
                    WreathAction::Imprimitive => wreath_imprimitive(&l.group, &p.group, cap)?,
                    WreathAction::Product => wreath_product_action(&l.group, &p.group, cap)?,
                }
            }
            Recipe::Diagonal { socle, swap, outer } => {
                let t = socle.build_with_cap(cap)?;
                let outer = outer
                    .as_deref()
                    .map(|s| Permutation::parse(s, t.degree()))
                    .transpose()?;
                diagonal_type_group(&t.group, *swap, outer.as_ref(), cap)?
            }
        };
        if out.group.label().is_none() {
            out.group = out.group.with_label(self.short_name());
        }
        Ok(out)
    }

    /// A compact human-readable name.
    pub fn short_name(&self) -> String {
        match self {
            Recipe::Generators { degree, label, .. } => label.clone().unwrap_or_else(|| format!("group of degree {degree}")),
            Recipe::Symmetric { n } => format!("S{n}"),
            Recipe::Alternating { n } => format!("A{n}"),
            Recipe::Cyclic { n } => format!("C{n}"),
            Recipe::Dihedral { n } => format!("D{}", 2 * n),
            Recipe::Classical { family, m, q, action } => {
                let a = match action {
                    VectorAction::Vectors => "vectors",
                    VectorAction::Projective => "1-spaces",
                };
                format!("{family}({m},{q}) on {a}")
            }
            Recipe::MatrixGenerators { q, mats, .. } => format!("matrix group over GF({q}) ({} gens)", mats.len()),
            Recipe::ClassicalSubspaceAction { family, m, q, k, filter, .. } => {
                format!("{family}({m},{q}) on {k}-spaces ({})", serde_json::to_value(filter).unwrap().as_str().unwrap_or(""))
            }
            Recipe::CosetAction { group, subgroup } => format!("[{} : {}]", group.short_name(), subgroup.short_name()),
            Recipe::Subsets { m, k, alt } => format!("{}{m} on {k}-subsets", if *alt { "A" } else { "S" }),
            Recipe::Partitions { m, k, alt } => format!("{}{m} on partitions into {k}-sets", if *alt { "A" } else { "S" }),
            Recipe::Affine { q, m, family, .. } => match family {
                Some(f) => format!("AGL-type {q}^{m}:{f}({m},{q})"),
                None => format!("{q}^{m}:H"),
            },
            Recipe::Wreath { base, top, action } => format!(
                "{} wr {} ({})",
                base.short_name(),
                top.short_name(),
                match action {
                    WreathAction::Imprimitive => "imprimitive",
                    WreathAction::Product => "product",
                }
            ),
            Recipe::Diagonal { socle, swap, outer } => {
                let ext = *swap as u32 + outer.is_some() as u32;
                if ext == 0 {
                    format!("{}^2 diagonal", socle.short_name())
                } else {
                    format!("{}^2.2^{ext} diagonal", socle.short_name())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn order(r: &str) -> BigUint {
        Recipe::from_json(r).unwrap().build().unwrap().group.order()
    }

    #[test]
    fn json_kinds() {
        assert_eq!(order(r#"{"kind":"generators","degree":5,"gens":["(1 2 3 4 5)","(1 2)"]}"#), 120u32.into());
        assert_eq!(order(r#"{"kind":"classical","family":"SL","m":2,"q":3}"#), 24u32.into());
        assert_eq!(order(r#"{"kind":"classical","family":"SL","m":3,"q":2,"action":"projective"}"#), 168u32.into());
        assert_eq!(order(r#"{"kind":"subsets","m":5,"k":2}"#), 120u32.into());
        assert_eq!(order(r#"{"kind":"affine","q":2,"m":4,"family":"Sp"}"#), 11520u32.into());
        assert_eq!(
            order(r#"{"kind":"wreath","base":{"kind":"symmetric","n":3},"top":{"kind":"symmetric","n":2},"action":"product"}"#),
            72u32.into()
        );
        assert_eq!(
            order(r#"{"kind":"diagonal","socle":{"kind":"alternating","n":5},"swap":true,"outer":"(1 2)"}"#),
            14400u32.into()
        );
        assert_eq!(
            order(r#"{"kind":"matrix-generators","q":2,"mats":[[1,1,0,1],[1,0,1,1]]}"#),
            6u32.into()
        );
        let a = Recipe::from_json(
            r#"{"kind":"classical-subspace-action","family":"Sp","m":4,"q":2,"k":2,"filter":"totally-isotropic"}"#,
        )
        .unwrap()
        .build()
        .unwrap();
        assert_eq!(a.degree(), 15);
    }

    #[test]
    fn coset_recipe() {
        let r = r#"{"kind":"coset-action",
            "group":{"kind":"symmetric","n":4},
            "subgroup":{"kind":"generators","degree":4,"gens":["(1 2 3 4)","(1 3)"]}}"#;
        let a = Recipe::from_json(r).unwrap().build().unwrap();
        assert_eq!(a.degree(), 3);
    }

    #[test]
    fn bad_recipes() {
        assert!(Recipe::from_json(r#"{"kind":"nonsense"}"#).is_err());
        let r = Recipe::from_json(r#"{"kind":"affine","q":2,"m":2}"#).unwrap();
        assert!(r.build().is_err());
        let r = Recipe::from_json(r#"{"kind":"symmetric","n":20}"#).unwrap();
        assert!(matches!(r.build_with_cap(10), Err(Error::DegreeLimit { .. })));
    }

    #[test]
    fn roundtrip() {
        let r = Recipe::Wreath {
            base: Box::new(Recipe::Alternating { n: 5 }),
            top: Box::new(Recipe::Cyclic { n: 2 }),
            action: WreathAction::Imprimitive,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(Recipe::from_json(&s).unwrap(), r);
    }
}
