//! Permutation groups given by generators, and the queries a stabilizer
//! chain makes cheap: order, membership, orbits, blocks, stabilizers.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest degree accepted anywhere in the engine.
pub const MAX_DEGREE: usize = 100_000;

#[derive(Clone)]
pub struct GeneratedGroup {
    degree: usize,
    gens: Vec<Permutation>,
    label: Option<String>,
    chain: OnceLock<Arc<StabChain>>,
}

impl GeneratedGroup {
    /// An empty generator list yields the trivial group.
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("degree must be at least 1"));
        }
        if degree > MAX_DEGREE {
            return Err(Error::DegreeLimit {
                degree,
                limit: MAX_DEGREE,
            });
        }
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::Perm(crate::error::PermError::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                }));
            }
        }
        Ok(Self::from_parts(degree, gens))
    }

    pub(crate) fn from_parts(degree: usize, mut gens: Vec<Permutation>) -> Self {
        gens.retain(|g| !g.is_identity());
        let mut seen = HashSet::new();
        gens.retain(|g| seen.insert(g.clone()));
        if gens.is_empty() {
            gens.push(Permutation::identity(degree));
        }
        GeneratedGroup {
            degree,
            gens,
            label: None,
            chain: OnceLock::new(),
        }
    }

    pub(crate) fn from_chain_level(chain: &StabChain, depth: usize) -> Self {
        Self::from_parts(chain.degree(), chain.stabilizer_generators(depth).to_vec())
    }

    /// Parses 1-based cycle strings.
    pub fn from_cycle_strings(degree: usize, gens: &[&str]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|s| Permutation::parse(s, degree))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_parts(degree, Vec::new())
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let cycle: Vec<usize> = (0..n).collect();
            gens.push(Permutation::from_cycles(n, &[cycle]).unwrap());
            gens.push(Permutation::from_cycles(n, &[vec![0, 1]]).unwrap());
        }
        Self::from_parts(n, gens).with_label(format!("S{n}"))
    }

    pub fn alternating(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 3 {
            gens.push(Permutation::from_cycles(n, &[vec![0, 1, 2]]).unwrap());
            let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
            if long.len() > 2 {
                gens.push(Permutation::from_cycles(n, &[long]).unwrap());
            }
        }
        Self::from_parts(n, gens).with_label(format!("A{n}"))
    }

    pub fn cyclic(n: usize) -> Self {
        let gens = if n >= 2 {
            vec![Permutation::from_cycles(n, &[(0..n).collect()]).unwrap()]
        } else {
            Vec::new()
        };
        Self::from_parts(n, gens).with_label(format!("C{n}"))
    }

    /// Dihedral group of order `2n` on `n` points.
    pub fn dihedral(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[(0..n).collect()]).unwrap());
            let refl: Vec<Vec<usize>> = (1..n).filter(|&i| i < n - i).map(|i| vec![i, n - i]).collect();
            gens.push(Permutation::from_cycles(n, &refl).unwrap());
        }
        Self::from_parts(n, gens).with_label(format!("D{}", 2 * n))
    }

    /// Same group, generated by the generators that were not redundant
    /// while building the chain. The chain is kept.
    pub fn reduced(self) -> Self {
        let chain = Arc::new(self.chain().clone());
        let mut gens = chain.irredundant_generators().to_vec();
        if gens.is_empty() {
            gens.push(Permutation::identity(self.degree));
        }
        let out = GeneratedGroup {
            degree: self.degree,
            gens,
            label: self.label,
            chain: OnceLock::new(),
        };
        let _ = out.chain.set(chain);
        out
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| Arc::new(StabChain::build(self.degree, &self.gens, &[])))
    }

    /// A fresh chain whose base starts with `prefix`.
    pub fn chain_with_base(&self, prefix: &[usize]) -> StabChain {
        let gens = match self.chain.get() {
            Some(c) => c.irredundant_generators(),
            None => &self.gens,
        };
        StabChain::build(self.degree, gens, prefix)
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.iter().all(Permutation::is_identity)
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::Perm(crate::error::PermError::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            }));
        }
        Ok(self.chain().contains(g))
    }

    /// Subgroup of the same degree generated by `gens`.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<GeneratedGroup> {
        GeneratedGroup::new(self.degree, gens)
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.degree {
            return Err(Error::PointOutOfRange {
                point: x + 1,
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// Orbits, each sorted, listed by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.gens)
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut out = orbit_into(x, &self.gens, &mut seen);
        out.sort_unstable();
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 1 || self.orbit(0).len() == self.degree
    }

    pub fn point_stabilizer(&self, x: usize) -> Result<GeneratedGroup> {
        self.pointwise_stabilizer(&[x])
    }

    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<GeneratedGroup> {
        for &p in points {
            self.check_point(p)?;
        }
        let mut distinct = Vec::new();
        for &p in points {
            if !distinct.contains(&p) {
                distinct.push(p);
            }
        }
        if distinct.is_empty() {
            return Ok(self.clone());
        }
        let chain = self.chain_with_base(&distinct);
        Ok(GeneratedGroup::from_chain_level(&chain, distinct.len()))
    }

    /// Stabilizer of `set` as a set, by backtrack over a chain whose base
    /// begins with the points of `set`.
    pub fn setwise_stabilizer(&self, set: &[usize]) -> Result<GeneratedGroup> {
        for &p in set {
            self.check_point(p)?;
        }
        let set: Vec<usize> = set.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if set.is_empty() || set.len() == self.degree {
            return Ok(self.clone());
        }
        let s = set.len();
        let chain = self.chain_with_base(&set);
        let mut in_set = vec![false; self.degree];
        for &p in &set {
            in_set[p] = true;
        }
        let mut found: Vec<Permutation> = chain.stabilizer_generators(s).to_vec();
        for i in (0..s).rev() {
            let level = &chain.levels()[i];
            let b = level.base_point();
            let mut known = vec![false; self.degree];
            orbit_into(b, &found, &mut known);
            let mut candidates: Vec<usize> = level.orbit().filter(|&g| in_set[g]).collect();
            candidates.sort_unstable();
            for gamma in candidates {
                if known[gamma] {
                    continue;
                }
                let start = level.rep(gamma).expect("orbit point").clone();
                if let Some(g) = set_image_search(&chain, i + 1, s, start, &in_set) {
                    found.push(g);
                    known = vec![false; self.degree];
                    orbit_into(b, &found, &mut known);
                }
            }
        }
        Ok(GeneratedGroup::from_parts(self.degree, found))
    }

    /// The finest block system containing `{a, b}`, as sorted blocks sorted by
    /// their first point.
    pub fn finest_block_system(&self, a: usize, b: usize) -> Result<BlockSystem> {
        self.check_point(a)?;
        self.check_point(b)?;
        let mut uf = UnionFind::new(self.degree);
        let mut queue = Vec::new();
        if uf.union(a, b) {
            queue.push((a, b));
        }
        while let Some((x, y)) = queue.pop() {
            for g in &self.gens {
                let (gx, gy) = (uf.find(g.apply(x)), uf.find(g.apply(y)));
                if gx != gy {
                    uf.union(gx, gy);
                    queue.push((gx, gy));
                }
            }
        }
        Ok(BlockSystem::from_union_find(&mut uf))
    }

    /// For every seed pair `{first point, x}` the finest block system
    /// containing it, without duplicates.
    pub fn minimal_block_systems(&self) -> Result<Vec<BlockSystem>> {
        if !self.is_transitive() {
            return Err(Error::NotTransitive);
        }
        let mut out: Vec<BlockSystem> = Vec::new();
        for x in 1..self.degree {
            let sys = self.finest_block_system(0, x)?;
            if !out.contains(&sys) {
                out.push(sys);
            }
        }
        Ok(out)
    }

    /// A nontrivial block system if one exists, with blocks as small as
    /// possible among those found from seeds in distinct suborbits.
    pub fn nontrivial_block_system(&self) -> Option<BlockSystem> {
        if self.degree < 3 || !self.is_transitive() {
            return None;
        }
        let stab = self.point_stabilizer(0).ok()?;
        let mut best: Option<BlockSystem> = None;
        for orbit in stab.orbits() {
            let x = orbit[0];
            if x == 0 {
                continue;
            }
            let sys = self.finest_block_system(0, x).ok()?;
            if sys.blocks.len() > 1 && best.as_ref().map_or(true, |b| sys.block_size() < b.block_size()) {
                best = Some(sys);
            }
        }
        best
    }

    pub fn is_primitive(&self) -> bool {
        self.is_transitive() && self.nontrivial_block_system().is_none()
    }

    /// Action on an invariant set, relabelled by position in `points`.
    pub fn restrict(&self, points: &[usize]) -> Result<GeneratedGroup> {
        let mut index = vec![usize::MAX; self.degree];
        for (i, &p) in points.iter().enumerate() {
            self.check_point(p)?;
            index[p] = i;
        }
        let mut gens = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            let mut images = Vec::with_capacity(points.len());
            for &p in points {
                let q = index[g.apply(p)];
                if q == usize::MAX {
                    return Err(Error::invalid("point set is not invariant"));
                }
                images.push(q);
            }
            gens.push(Permutation::from_images(images)?);
        }
        GeneratedGroup::new(points.len().max(1), gens)
    }

    /// Image and kernel of the action given by `act`, which maps each
    /// generator to a permutation of `m` points. The kernel is computed in
    /// the diagonal action on `degree + m` points.
    pub fn action_image_and_kernel<F>(&self, m: usize, act: F) -> Result<(GeneratedGroup, GeneratedGroup)>
    where
        F: Fn(&Permutation) -> Permutation,
    {
        let n = self.degree;
        let mut image_gens = Vec::new();
        let mut joint_gens = Vec::new();
        for g in &self.gens {
            let h = act(g);
            if h.degree() != m {
                return Err(Error::invalid("action image has wrong degree"));
            }
            let mut joint: Vec<u32> = g.images().to_vec();
            joint.extend(h.images().iter().map(|&x| x + n as u32));
            joint_gens.push(Permutation::from_raw(joint));
            image_gens.push(h);
        }
        let prefix: Vec<usize> = (n..n + m).collect();
        let chain = StabChain::build(n + m, &joint_gens, &prefix);
        let kernel_gens: Vec<Permutation> = chain
            .stabilizer_generators(m)
            .iter()
            .map(|k| Permutation::from_raw(k.images()[..n].to_vec()))
            .collect();
        Ok((
            GeneratedGroup::new(m, image_gens)?,
            GeneratedGroup::new(n, kernel_gens)?,
        ))
    }

    /// Representatives, one per orbit, of the action on ordered `c`-tuples of
    /// distinct points, produced as a nested orbit tree. Fails once more than
    /// `max_reps` representatives would be produced.
    pub fn orbit_reps_on_tuples(&self, c: usize, max_reps: usize) -> Result<Vec<TupleRep>> {
        if c == 0 {
            return Err(Error::invalid("tuple length must be at least 1"));
        }
        let mut out = Vec::new();
        let order = self.order();
        tuple_tree(self, &mut Vec::new(), c, max_reps, &order, &mut out)?;
        Ok(out)
    }
}

impl fmt::Debug for GeneratedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratedGroup")
            .field("label", &self.label)
            .field("degree", &self.degree)
            .field("gens", &self.gens.len())
            .finish()
    }
}

/// One representative of an orbit on ordered tuples, with its pointwise
/// stabilizer and orbit length.
#[derive(Clone, Debug)]
pub struct TupleRep {
    pub points: Vec<usize>,
    pub stabilizer: GeneratedGroup,
    pub orbit_len: BigUint,
}

fn tuple_tree(
    group: &GeneratedGroup,
    prefix: &mut Vec<usize>,
    c: usize,
    max_reps: usize,
    full_order: &BigUint,
    out: &mut Vec<TupleRep>,
) -> Result<()> {
    if prefix.len() == c {
        if out.len() >= max_reps {
            return Err(Error::Resource(format!(
                "more than {max_reps} tuple orbit representatives"
            )));
        }
        let stab_order = group.order();
        out.push(TupleRep {
            points: prefix.clone(),
            orbit_len: full_order / &stab_order,
            stabilizer: group.clone(),
        });
        return Ok(());
    }
    for orbit in group.orbits() {
        let x = orbit[0];
        if prefix.contains(&x) {
            continue;
        }
        let stab = group.point_stabilizer(x)?;
        prefix.push(x);
        tuple_tree(&stab, prefix, c, max_reps, full_order, out)?;
        prefix.pop();
    }
    Ok(())
}

/// Depth-first search below level `depth` for an element whose images of the
/// base points `depth..s` all lie in the set. `prefix` is the product of the
/// representatives already chosen (outermost last).
fn set_image_search(
    chain: &StabChain,
    depth: usize,
    s: usize,
    prefix: Permutation,
    in_set: &[bool],
) -> Option<Permutation> {
    if depth == s {
        return Some(prefix);
    }
    let level = &chain.levels()[depth];
    for beta in level.orbit() {
        let gamma = prefix.apply(beta);
        if !in_set[gamma] {
            continue;
        }
        let next = level.rep(beta).expect("orbit point") * &prefix;
        if let Some(g) = set_image_search(chain, depth + 1, s, next, in_set) {
            return Some(g);
        }
    }
    None
}

pub(crate) fn orbit_into(x: usize, gens: &[Permutation], seen: &mut [bool]) -> Vec<usize> {
    let mut out = vec![x];
    seen[x] = true;
    let mut k = 0;
    while k < out.len() {
        let y = out[k];
        for g in gens {
            let z = g.apply(y);
            if !seen[z] {
                seen[z] = true;
                out.push(z);
            }
        }
        k += 1;
    }
    out
}

pub(crate) fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for x in 0..degree {
        if !seen[x] {
            let mut o = orbit_into(x, gens, &mut seen);
            o.sort_unstable();
            out.push(o);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    fn from_union_find(uf: &mut UnionFind) -> Self {
        let n = uf.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = uf.find(x);
            by_root[r].push(x);
        }
        let mut blocks: Vec<Vec<usize>> = by_root.into_iter().filter(|b| !b.is_empty()).collect();
        blocks.sort_by_key(|b| b[0]);
        BlockSystem { blocks }
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1 || self.block_size() == 1
    }

    /// Block index of every point.
    pub fn block_of(&self) -> Vec<usize> {
        let n: usize = self.blocks.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x] = i;
            }
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// `|G|` as a `u64` when it fits.
pub fn order_u64(g: &GeneratedGroup) -> Option<u64> {
    use num_traits::ToPrimitive;
    g.order().to_u64()
}

/// Whether `order` equals one.
pub fn is_one(order: &BigUint) -> bool {
    order.is_one()
}

/// Reads the generator file format: a `degree N` line, then one permutation
/// per line in cycle notation. Text after `#` is ignored.
pub fn parse_generator_file(text: &str) -> Result<GeneratedGroup> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: no + 1, msg };
        match degree {
            None => {
                let n = line
                    .strip_prefix("degree")
                    .map(str::trim)
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| parse_err("expected \"degree N\"".into()))?;
                if n == 0 || n > MAX_DEGREE {
                    return Err(parse_err(format!("degree {n} out of range")));
                }
                degree = Some(n);
            }
            Some(n) => {
                let p = Permutation::parse(line, n).map_err(|e| parse_err(e.to_string()))?;
                gens.push(p);
            }
        }
    }
    let n = degree.ok_or_else(|| Error::Parse { line: 1, msg: "missing degree line".into() })?;
    if gens.is_empty() {
        gens.push(Permutation::identity(n));
    }
    GeneratedGroup::new(n, gens)
}

pub fn format_generator_file(g: &GeneratedGroup) -> String {
    let mut out = String::new();
    if let Some(l) = g.label() {
        out.push_str(&format!("# {l}\n"));
    }
    out.push_str(&format!("degree {}\n", g.degree()));
    for p in g.generators() {
        out.push_str(&format!("{p}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(n: usize, gens: &[&str]) -> GeneratedGroup {
        GeneratedGroup::from_cycle_strings(n, gens).unwrap()
    }

    #[test]
    fn orders_and_membership() {
        let s5 = GeneratedGroup::symmetric(5);
        let a5 = GeneratedGroup::alternating(5);
        let t = Permutation::parse("(1 2)", 5).unwrap();
        assert_eq!(s5.order(), BigUint::from(120u32));
        assert_eq!(a5.order(), BigUint::from(60u32));
        assert!(s5.contains(&t).unwrap());
        assert!(!a5.contains(&t).unwrap());
        assert!(s5.contains(&Permutation::identity(4)).is_err());
        assert_eq!(GeneratedGroup::trivial(3).order(), BigUint::one());
        for n in 3..9 {
            assert_eq!(GeneratedGroup::alternating(n).order() * 2u32, GeneratedGroup::symmetric(n).order());
            assert_eq!(GeneratedGroup::dihedral(n).order(), BigUint::from(2 * n));
        }
    }

    #[test]
    fn orbits_and_transitivity() {
        let g = grp(4, &["(1 2)"]);
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2], vec![3]]);
        assert!(!g.is_transitive());
        assert!(GeneratedGroup::symmetric(5).is_transitive());
    }

    #[test]
    fn block_systems() {
        let c4 = GeneratedGroup::cyclic(4);
        let systems = c4.minimal_block_systems().unwrap();
        assert!(systems.contains(&BlockSystem {
            blocks: vec![vec![0, 2], vec![1, 3]]
        }));
        assert!(!c4.is_primitive());
        assert!(GeneratedGroup::symmetric(5).is_primitive());
        let wr = grp(6, &["(1 2 3)", "(1 2)", "(1 4)(2 5)(3 6)"]);
        assert_eq!(wr.order(), BigUint::from(72u32));
        let sys = wr.nontrivial_block_system().unwrap();
        assert_eq!(sys.block_size(), 3);
        assert!(matches!(
            grp(4, &["(1 2)"]).minimal_block_systems(),
            Err(Error::NotTransitive)
        ));
    }

    #[test]
    fn stabilizers() {
        let s5 = GeneratedGroup::symmetric(5);
        assert_eq!(s5.point_stabilizer(0).unwrap().order(), BigUint::from(24u32));
        assert_eq!(s5.pointwise_stabilizer(&[0, 1, 2]).unwrap().order(), BigUint::from(2u32));
        let s4 = GeneratedGroup::symmetric(4);
        let set = s4.setwise_stabilizer(&[0, 1]).unwrap();
        assert_eq!(set.order(), BigUint::from(4u32));
        assert_eq!(s4.setwise_stabilizer(&[]).unwrap().order(), BigUint::from(24u32));
        assert!(s4.point_stabilizer(7).is_err());
    }

    #[test]
    fn setwise_contains_pointwise() {
        let g = grp(8, &["(1 2 3 4 5 6 7 8)", "(1 3)(4 8)(5 7)", "(2 4 6)"]);
        for set in [vec![0, 1], vec![0, 2, 4], vec![1, 3, 5, 7], vec![0, 5, 6]] {
            let sw = g.setwise_stabilizer(&set).unwrap();
            let pw = g.pointwise_stabilizer(&set).unwrap();
            for x in pw.generators() {
                assert!(sw.contains(x).unwrap());
            }
            // brute force: elements mapping the set to itself
            let expected = g
                .chain()
                .elements()
                .filter(|e| set.iter().all(|&p| set.contains(&e.apply(p))))
                .count();
            assert_eq!(sw.order(), BigUint::from(expected));
        }
    }

    #[test]
    fn tuple_reps() {
        let s5 = GeneratedGroup::symmetric(5);
        let reps = s5.orbit_reps_on_tuples(2, 100).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].points, vec![0, 1]);
        let g = grp(3, &["(1 2)"]);
        assert_eq!(g.orbit_reps_on_tuples(1, 100).unwrap().len(), 2);
        assert!(GeneratedGroup::trivial(6).orbit_reps_on_tuples(3, 10).is_err());
    }

    #[test]
    fn kernel_of_block_action() {
        let wr = grp(6, &["(1 2 3)", "(1 2)", "(1 4)(2 5)(3 6)"]);
        let sys = wr.nontrivial_block_system().unwrap();
        let block_of = sys.block_of();
        let (image, kernel) = wr
            .action_image_and_kernel(2, |g| {
                let imgs: Vec<usize> = sys.blocks.iter().map(|b| block_of[g.apply(b[0])]).collect();
                Permutation::from_images(imgs).unwrap()
            })
            .unwrap();
        assert_eq!(image.order(), BigUint::from(2u32));
        assert_eq!(kernel.order(), BigUint::from(36u32));
    }

    #[test]
    fn generator_file_roundtrip() {
        let text = "# S4\ndegree 4\n(1 2 3 4)  # a 4-cycle\n\n(1 2)\n";
        let g = parse_generator_file(text).unwrap();
        assert_eq!(g.order(), BigUint::from(24u32));
        let h = parse_generator_file(&format_generator_file(&g)).unwrap();
        assert_eq!(h.generators(), g.generators());
        assert!(matches!(parse_generator_file("degre 4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_generator_file("degree 3\n(1 4)\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_generator_file("degree 3\n").unwrap().is_trivial());
    }
}
