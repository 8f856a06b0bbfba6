//! Permutation actions built from matrix groups, subgroups, and the
//! standard product constructions.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::forms::{subspace_type, FormSpec, Sign};
use crate::fq::matrix::{all_vectors, normalize};
use crate::fq::{Fq, FqField, FqMatrix, SubspaceFq};
use crate::group::GeneratedGroup;
use crate::perm::Permutation;

pub const DEFAULT_DEGREE_CAP: usize = 100_000;

/// A permutation group together with the object each point stands for.
#[derive(Clone, Debug)]
pub struct LabeledAction {
    pub group: GeneratedGroup,
    pub labels: Vec<String>,
    /// Order of the group acting, when known independently of the action;
    /// the kernel has order `abstract_order / |group|`.
    pub abstract_order: Option<BigUint>,
}

impl LabeledAction {
    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    /// Order of the kernel of the action, when the abstract order is known.
    pub fn kernel_order(&self) -> Option<BigUint> {
        self.abstract_order.as_ref().map(|a| a / self.group.order())
    }
}

fn check_cap(degree: usize, cap: usize) -> Result<()> {
    if degree > cap {
        return Err(Error::DegreeLimit { degree, limit: cap });
    }
    Ok(())
}

fn vec_label(v: &[Fq]) -> String {
    let s: Vec<String> = v.iter().map(|a| a.to_string()).collect();
    format!("({})", s.join(" "))
}

/// Points of a linear action on vectors or one-spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorAction {
    /// Nonzero vectors.
    #[default]
    Vectors,
    /// One-spaces, each represented by its vector with leading entry 1.
    Projective,
}

/// Action of matrices on all nonzero vectors or on all one-spaces, points
/// listed in lexicographic order of coordinates.
pub fn matrix_vector_action(
    gens: &[FqMatrix],
    f: &FqField,
    m: usize,
    action: VectorAction,
    cap: usize,
) -> Result<LabeledAction> {
    let total = (f.q() as usize).checked_pow(m as u32).unwrap_or(usize::MAX);
    check_cap(total.saturating_sub(1), cap)?;
    let points: Vec<Vec<Fq>> = all_vectors(m, f)
        .into_iter()
        .filter(|v| v.iter().any(|&a| a != 0))
        .filter(|v| action == VectorAction::Vectors || normalize(v, f) == *v)
        .collect();
    let index: HashMap<&[Fq], usize> = points.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let mut perms = Vec::with_capacity(gens.len());
    for g in gens {
        if g.rows() != m || g.cols() != m {
            return Err(Error::invalid("matrix dimension differs from the space"));
        }
        let imgs: Vec<usize> = points
            .iter()
            .map(|v| {
                let w = g.vec_mul(v, f);
                let w = match action {
                    VectorAction::Vectors => w,
                    VectorAction::Projective => normalize(&w, f),
                };
                index.get(w.as_slice()).copied().ok_or_else(|| Error::invalid("singular matrix"))
            })
            .collect::<Result<_>>()?;
        perms.push(Permutation::from_images(imgs)?);
    }
    let group = GeneratedGroup::new(points.len(), perms)?.reduced();
    Ok(LabeledAction {
        group,
        labels: points.iter().map(|v| vec_label(v)).collect(),
        abstract_order: None,
    })
}

/// Which subspaces an orbit action is allowed to act on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubspaceFilter {
    #[default]
    All,
    TotallyIsotropic,
    TotallySingular,
    Nondegenerate,
    NondegeneratePlus,
    NondegenerateMinus,
    /// One-spaces spanned by a nonsingular vector.
    Nonsingular,
}

impl SubspaceFilter {
    pub fn accepts(self, form: Option<&FormSpec>, u: &SubspaceFq, f: &FqField) -> Result<bool> {
        if self == SubspaceFilter::All {
            return Ok(true);
        }
        let form = form.ok_or_else(|| Error::invalid("filter needs a form"))?;
        if self == SubspaceFilter::Nonsingular {
            return Ok(u.dim() == 1 && form.quad(&u.basis()[0], f) != 0);
        }
        let t = subspace_type(form, u, f)?;
        Ok(match self {
            SubspaceFilter::TotallyIsotropic => t.totally_isotropic,
            SubspaceFilter::TotallySingular => t.totally_singular.unwrap_or(t.totally_isotropic),
            SubspaceFilter::Nondegenerate => !t.degenerate,
            SubspaceFilter::NondegeneratePlus => !t.degenerate && t.sign == Some(Sign::Plus),
            SubspaceFilter::NondegenerateMinus => !t.degenerate && t.sign == Some(Sign::Minus),
            SubspaceFilter::All | SubspaceFilter::Nonsingular => unreachable!(),
        })
    }
}

/// The first `k`-space, in a fixed search order, that the filter accepts.
/// Candidates are spans of basis vectors and of weight-two vectors with
/// entries 1.
pub fn find_seed(
    form: Option<&FormSpec>,
    m: usize,
    k: usize,
    filter: SubspaceFilter,
    f: &FqField,
) -> Result<SubspaceFq> {
    if k == 0 || k > m {
        return Err(Error::invalid(format!("subspace dimension {k} in dimension {m}")));
    }
    let mut cands: Vec<Vec<Fq>> = (0..m)
        .map(|i| (0..m).map(|j| (i == j) as Fq).collect())
        .collect();
    for i in 0..m {
        for j in i + 1..m {
            cands.push((0..m).map(|x| (x == i || x == j) as Fq).collect());
        }
    }
    if k == 1 {
        for v in all_vectors(m, f).into_iter().skip(1) {
            if normalize(&v, f) != v {
                continue;
            }
            let u = SubspaceFq::canonical(m, &[v], f)?;
            if filter.accepts(form, &u, f)? {
                return Ok(u);
            }
        }
        return Err(Error::invalid("no one-space satisfies the filter"));
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut tried = 0usize;
    loop {
        let rows: Vec<Vec<Fq>> = idx.iter().map(|&i| cands[i].clone()).collect();
        let u = SubspaceFq::span(m, &rows, f)?;
        if u.dim() == k && filter.accepts(form, &u, f)? {
            return Ok(u);
        }
        tried += 1;
        if tried > 200_000 || !next_combination(&mut idx, cands.len()) {
            return Err(Error::invalid("no seed found; supply one explicitly"));
        }
    }
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Action on the orbit of `seed`, with points sorted by canonical basis.
pub fn matrix_orbit_action(
    gens: &[FqMatrix],
    f: &FqField,
    form: Option<&FormSpec>,
    seed: &SubspaceFq,
    filter: SubspaceFilter,
    cap: usize,
) -> Result<LabeledAction> {
    if !filter.accepts(form, seed, f)? {
        return Err(Error::invalid("seed does not satisfy the filter"));
    }
    let mut seen: HashMap<SubspaceFq, ()> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.clone(), ());
    queue.push_back(seed.clone());
    while let Some(u) = queue.pop_front() {
        for g in gens {
            let w = u.image(g, f);
            if !seen.contains_key(&w) {
                check_cap(seen.len() + 1, cap)?;
                seen.insert(w.clone(), ());
                queue.push_back(w);
            }
        }
    }
    let mut points: Vec<SubspaceFq> = seen.into_keys().collect();
    points.sort();
    let index: HashMap<&SubspaceFq, usize> = points.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let perms = gens
        .iter()
        .map(|g| {
            let imgs = points.iter().map(|u| index[&u.image(g, f)]).collect();
            Permutation::from_images(imgs).map_err(Error::from)
        })
        .collect::<Result<Vec<_>>>()?;
    let group = GeneratedGroup::new(points.len(), perms)?.reduced();
    Ok(LabeledAction {
        group,
        labels: points.iter().map(|u| u.to_string()).collect(),
        abstract_order: None,
    })
}

/// Canonical label of the right coset `H g`: the least image tuple of the
/// base of `H`'s chain over all elements of the coset, chosen level by
/// level.
fn coset_label(h: &crate::chain::StabChain, g: &Permutation) -> Vec<u32> {
    let mut cur = g.clone();
    let mut label = Vec::with_capacity(h.levels().len());
    for level in h.levels() {
        let best = level
            .orbit()
            .min_by_key(|&x| cur.apply(x))
            .expect("orbit is nonempty");
        if best != level.base_point() {
            cur = level.rep(best).unwrap() * &cur;
        }
        label.push(cur.apply(level.base_point()) as u32);
    }
    label
}

/// Action of `g` on the right cosets of `h`.
pub fn coset_action(g: &GeneratedGroup, h: &GeneratedGroup, cap: usize) -> Result<LabeledAction> {
    if g.degree() != h.degree() {
        return Err(Error::NotSubgroup("degrees differ".into()));
    }
    for x in h.generators() {
        if !g.contains(x)? {
            return Err(Error::NotSubgroup(format!("generator {x} is not in the group")));
        }
    }
    let index = g.order() / h.order();
    let index_usize = usize::try_from(&index).unwrap_or(usize::MAX);
    check_cap(index_usize, cap)?;
    let base = g.chain().base();
    let hc = h.chain_with_base(&base);
    let mut labels: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut reps: Vec<Permutation> = vec![Permutation::identity(g.degree())];
    labels.insert(coset_label(&hc, &reps[0]), 0);
    let gens = g.generators();
    let mut images: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    let mut k = 0;
    while k < reps.len() {
        for (s, gen) in gens.iter().enumerate() {
            let next = &reps[k] * gen;
            let lab = coset_label(&hc, &next);
            let id = match labels.get(&lab) {
                Some(&id) => id,
                None => {
                    let id = reps.len();
                    labels.insert(lab, id);
                    reps.push(next);
                    id
                }
            };
            images[s].push(id);
        }
        k += 1;
    }
    if reps.len() != index_usize {
        return Err(Error::invalid("coset enumeration disagrees with the index"));
    }
    let perms = images
        .into_iter()
        .map(|im| Permutation::from_images(im).map_err(Error::from))
        .collect::<Result<Vec<_>>>()?;
    let group = GeneratedGroup::new(reps.len(), perms)?;
    let labels = reps.iter().map(|r| format!("H*{r}")).collect();
    Ok(LabeledAction {
        group,
        labels,
        abstract_order: Some(g.order()),
    })
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        if k == 0 || !next_combination(&mut idx, m) {
            break;
        }
    }
    out
}

fn set_label(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(|x| (x + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn natural(m: usize, alt: bool) -> GeneratedGroup {
    if alt {
        GeneratedGroup::alternating(m)
    } else {
        GeneratedGroup::symmetric(m)
    }
}

fn induced<T, F>(points: &[T], gens: &[Permutation], image: F) -> Result<Vec<Permutation>>
where
    T: std::hash::Hash + Eq,
    F: Fn(&T, &Permutation) -> T,
{
    let index: HashMap<&T, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    gens.iter()
        .map(|g| {
            let imgs = points.iter().map(|p| index[&image(p, g)]).collect();
            Permutation::from_images(imgs).map_err(Error::from)
        })
        .collect()
}

/// `S_m` or `A_m` on `k`-subsets, `1 <= k < m/2`.
pub fn subsets_action(m: usize, k: usize, alt: bool, cap: usize) -> Result<LabeledAction> {
    if k == 0 || 2 * k >= m {
        return Err(Error::invalid(format!("subsets need 1 <= k < m/2, got m={m} k={k}")));
    }
    let points = combinations(m, k);
    check_cap(points.len(), cap)?;
    let base = natural(m, alt);
    let perms = induced(&points, base.generators(), |s, g| {
        let mut t: Vec<usize> = s.iter().map(|&x| g.apply(x)).collect();
        t.sort_unstable();
        t
    })?;
    Ok(LabeledAction {
        group: GeneratedGroup::new(points.len(), perms)?,
        labels: points.iter().map(|s| set_label(s)).collect(),
        abstract_order: Some(base.order()),
    })
}

fn partitions(m: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(rest: &[usize], k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first = rest[0];
        let others = &rest[1..];
        for comb in combinations(others.len(), k - 1) {
            let mut block = vec![first];
            block.extend(comb.iter().map(|&i| others[i]));
            let remaining: Vec<usize> = others
                .iter()
                .enumerate()
                .filter(|(i, _)| !comb.contains(i))
                .map(|(_, &x)| x)
                .collect();
            cur.push(block);
            rec(&remaining, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&(0..m).collect::<Vec<_>>(), k, &mut Vec::new(), &mut out);
    out
}

/// `S_m` or `A_m` on partitions into `m/k` blocks of size `k`,
/// `1 < k <= m/2`.
pub fn partitions_action(m: usize, k: usize, alt: bool, cap: usize) -> Result<LabeledAction> {
    if k <= 1 || m % k != 0 || 2 * k > m {
        return Err(Error::invalid(format!("partitions need k | m and 1 < k <= m/2, got m={m} k={k}")));
    }
    let points = partitions(m, k);
    check_cap(points.len(), cap)?;
    let base = natural(m, alt);
    let perms = induced(&points, base.generators(), |p, g| {
        let mut blocks: Vec<Vec<usize>> = p
            .iter()
            .map(|b| {
                let mut nb: Vec<usize> = b.iter().map(|&x| g.apply(x)).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        blocks.sort();
        blocks
    })?;
    let labels = points
        .iter()
        .map(|p| p.iter().map(|b| set_label(b)).collect::<Vec<_>>().join("|"))
        .collect();
    Ok(LabeledAction {
        group: GeneratedGroup::new(points.len(), perms)?,
        labels,
        abstract_order: Some(base.order()),
    })
}

/// `V:H` on the vectors of `V = GF(q)^m`: the linear maps `gens` plus
/// translations by a prime-field basis of `V`.
pub fn affine_action(gens: &[FqMatrix], f: &FqField, m: usize, cap: usize) -> Result<LabeledAction> {
    let total = (f.q() as usize).checked_pow(m as u32).unwrap_or(usize::MAX);
    check_cap(total, cap)?;
    let points = all_vectors(m, f);
    let mut perms = Vec::new();
    let index: HashMap<&[Fq], usize> = points.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    for g in gens {
        if g.rows() != m || g.cols() != m {
            return Err(Error::invalid("matrix dimension differs from the space"));
        }
        let imgs: Vec<usize> = points
            .iter()
            .map(|v| index.get(g.vec_mul(v, f).as_slice()).copied().ok_or_else(|| Error::invalid("singular matrix")))
            .collect::<Result<_>>()?;
        perms.push(Permutation::from_images(imgs)?);
    }
    for i in 0..m {
        for b in f.prime_basis() {
            let imgs: Vec<usize> = points
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    w[i] = f.add(w[i], b);
                    index[w.as_slice()]
                })
                .collect();
            perms.push(Permutation::from_images(imgs)?);
        }
    }
    Ok(LabeledAction {
        group: GeneratedGroup::new(points.len(), perms)?.reduced(),
        labels: points.iter().map(|v| vec_label(v)).collect(),
        abstract_order: None,
    })
}

/// One representative coordinate per orbit of the top group.
fn orbit_reps(top: &GeneratedGroup) -> Vec<usize> {
    top.orbits().into_iter().map(|o| o[0]).collect()
}

/// `L wr P` on `k` copies of `L`'s points; point `(i, x)` is `i*|Δ| + x`.
pub fn wreath_imprimitive(l: &GeneratedGroup, p: &GeneratedGroup, cap: usize) -> Result<LabeledAction> {
    let (a, k) = (l.degree(), p.degree());
    let n = a.checked_mul(k).unwrap_or(usize::MAX);
    check_cap(n, cap)?;
    let mut gens = Vec::new();
    for i in orbit_reps(p) {
        for g in l.generators() {
            let imgs: Vec<usize> = (0..n)
                .map(|x| if x / a == i { i * a + g.apply(x % a) } else { x })
                .collect();
            gens.push(Permutation::from_images(imgs)?);
        }
    }
    for pi in p.generators() {
        let imgs: Vec<usize> = (0..n).map(|x| pi.apply(x / a) * a + x % a).collect();
        gens.push(Permutation::from_images(imgs)?);
    }
    let labels = (0..n).map(|x| format!("({},{})", x / a + 1, x % a + 1)).collect();
    Ok(LabeledAction {
        group: GeneratedGroup::new(n, gens)?,
        labels,
        abstract_order: Some(l.order().pow(k as u32) * p.order()),
    })
}

/// `L wr P` in product action on `Δ^k`. Tuples are numbered with the first
/// coordinate most significant; the top group sends coordinate `i` to
/// `i^π`.
pub fn wreath_product_action(l: &GeneratedGroup, p: &GeneratedGroup, cap: usize) -> Result<LabeledAction> {
    let (a, k) = (l.degree(), p.degree());
    let n = (a as u128).pow(k as u32);
    if n > cap as u128 {
        return Err(Error::DegreeLimit {
            degree: usize::try_from(n).unwrap_or(usize::MAX),
            limit: cap,
        });
    }
    let n = n as usize;
    let decode = |mut x: usize| {
        let mut t = vec![0usize; k];
        for c in (0..k).rev() {
            t[c] = x % a;
            x /= a;
        }
        t
    };
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &c| acc * a + c);
    let mut gens = Vec::new();
    for i in orbit_reps(p) {
        for g in l.generators() {
            let imgs: Vec<usize> = (0..n)
                .map(|x| {
                    let mut t = decode(x);
                    t[i] = g.apply(t[i]);
                    encode(&t)
                })
                .collect();
            gens.push(Permutation::from_images(imgs)?);
        }
    }
    for pi in p.generators() {
        let imgs: Vec<usize> = (0..n)
            .map(|x| {
                let t = decode(x);
                let mut u = vec![0usize; k];
                for (c, &v) in t.iter().enumerate() {
                    u[pi.apply(c)] = v;
                }
                encode(&u)
            })
            .collect();
        gens.push(Permutation::from_images(imgs)?);
    }
    let labels = (0..n)
        .map(|x| {
            let t: Vec<String> = decode(x).iter().map(|c| (c + 1).to_string()).collect();
            format!("({})", t.join(","))
        })
        .collect();
    Ok(LabeledAction {
        group: GeneratedGroup::new(n, gens)?,
        labels,
        abstract_order: Some(l.order().pow(k as u32) * p.order()),
    })
}

/// `T^2` acting on `T` by `t -> a^-1 t b`, optionally with the factor swap
/// `t -> t^-1` and an outer automorphism `t -> s^-1 t s` for a permutation
/// `s` normalizing `T`. Points are the elements of `T` sorted by their base
/// images.
pub fn diagonal_type_group(
    t: &GeneratedGroup,
    include_swap: bool,
    outer: Option<&Permutation>,
    cap: usize,
) -> Result<LabeledAction> {
    let order = t.order();
    let n = usize::try_from(&order).unwrap_or(usize::MAX);
    check_cap(n, cap)?;
    let chain = t.chain();
    let base = chain.base();
    let sig = |x: &Permutation| -> Vec<u32> { base.iter().map(|&b| x.apply(b) as u32).collect() };
    let mut elems: Vec<(Vec<u32>, Permutation)> = chain.elements().map(|e| (sig(&e), e)).collect();
    elems.sort_by(|a, b| a.0.cmp(&b.0));
    let index: HashMap<Vec<u32>, usize> = elems.iter().enumerate().map(|(i, (s, _))| (s.clone(), i)).collect();
    let points: Vec<&Permutation> = elems.iter().map(|(_, e)| e).collect();
    let make = |f: &dyn Fn(&Permutation) -> Permutation| -> Result<Permutation> {
        let imgs = points.iter().map(|x| index[&sig(&f(x))]).collect();
        Ok(Permutation::from_images(imgs)?)
    };
    let mut gens = Vec::new();
    for a in t.generators() {
        let ainv = a.inverse();
        gens.push(make(&|x| &ainv * x)?);
        gens.push(make(&|x| x * a)?);
    }
    let mut factor = BigUint::from(1u32);
    if include_swap {
        gens.push(make(&|x| x.inverse())?);
        factor *= 2u32;
    }
    if let Some(s) = outer {
        if s.degree() != t.degree() {
            return Err(Error::invalid("outer automorphism has the wrong degree"));
        }
        let sinv = s.inverse();
        for a in t.generators() {
            if !t.contains(&a.conjugate(s))? {
                return Err(Error::invalid("supplied map is not an automorphism of T"));
            }
        }
        gens.push(make(&|x| &(&sinv * x) * s)?);
        factor *= 2u32;
    }
    let labels = points.iter().map(|x| x.to_string()).collect();
    Ok(LabeledAction {
        group: GeneratedGroup::new(n, gens)?,
        labels,
        abstract_order: outer.is_none().then(|| &order * &order * factor),
    })
}

/// Shared field handle for recipes.
pub fn field(q: u32) -> Result<Arc<FqField>> {
    FqField::get(q)
}
