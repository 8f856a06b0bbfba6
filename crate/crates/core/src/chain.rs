//! Stabilizer chains built by deterministic Schreier–Sims.
//!
//! Transversals are stored as explicit permutations together with their
//! inverses, so sifting never unpacks Schreier-vector words.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::perm::Permutation;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct Level {
    point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    pos: Vec<u32>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut pos = vec![NONE; degree];
        pos[point] = 0;
        Level {
            point,
            gens: Vec::new(),
            orbit: vec![point as u32],
            pos,
            reps: vec![Permutation::identity(degree)],
            inv_reps: vec![Permutation::identity(degree)],
        }
    }

    /// Adds a strong generator and extends the orbit; existing
    /// representatives stay valid.
    fn add_gen(&mut self, g: Permutation) {
        self.gens.push(g);
        let new = self.gens.len() - 1;
        let old_len = self.orbit.len();
        let mut k = 0;
        while k < self.orbit.len() {
            let range = if k < old_len { new..new + 1 } else { 0..self.gens.len() };
            for gi in range {
                let x = self.orbit[k] as usize;
                let y = self.gens[gi].apply(x);
                if self.pos[y] == NONE {
                    let rep = &self.reps[k] * &self.gens[gi];
                    self.pos[y] = self.orbit.len() as u32;
                    self.orbit.push(y as u32);
                    self.inv_reps.push(rep.inverse());
                    self.reps.push(rep);
                }
            }
            k += 1;
        }
    }

    pub fn base_point(&self) -> usize {
        self.point
    }

    /// Strong generators of the stabilizer of all earlier base points.
    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn orbit(&self) -> impl Iterator<Item = usize> + '_ {
        self.orbit.iter().map(|&x| x as usize)
    }

    pub fn orbit_len(&self) -> usize {
        self.orbit.len()
    }

    pub fn in_orbit(&self, x: usize) -> bool {
        self.pos[x] != NONE
    }

    /// Coset representative mapping the base point to `x`.
    pub fn rep(&self, x: usize) -> Option<&Permutation> {
        match self.pos[x] {
            NONE => None,
            k => Some(&self.reps[k as usize]),
        }
    }

    pub fn inv_rep(&self, x: usize) -> Option<&Permutation> {
        match self.pos[x] {
            NONE => None,
            k => Some(&self.inv_reps[k as usize]),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
    used_gens: Vec<Permutation>,
}

impl StabChain {
    pub fn empty(degree: usize) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
            used_gens: Vec::new(),
        }
    }

    /// Chain of `<gens>` whose base starts with `base_prefix`. Without a
    /// prefix the first base point is the smallest point of a largest orbit.
    pub fn build(degree: usize, gens: &[Permutation], base_prefix: &[usize]) -> Self {
        let mut chain = StabChain::empty(degree);
        if base_prefix.is_empty() {
            if let Some(p) = first_base_point(degree, gens) {
                chain.push_level(p);
            }
        } else {
            for &p in base_prefix {
                if !chain.levels.iter().any(|l| l.point == p) {
                    chain.push_level(p);
                }
            }
        }
        for g in gens {
            chain.add_generator(g);
        }
        chain
    }

    fn push_level(&mut self, point: usize) {
        self.levels.push(Level::new(point, self.degree));
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// The generators that actually enlarged the group while building.
    pub fn irredundant_generators(&self) -> &[Permutation] {
        &self.used_gens
    }

    /// Strong generators of the pointwise stabilizer of the first `depth`
    /// base points (empty when that stabilizer is trivial).
    pub fn stabilizer_generators(&self, depth: usize) -> &[Permutation] {
        if depth < self.levels.len() {
            &self.levels[depth].gens
        } else {
            &[]
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Order of the stabilizer of the first `depth` base points.
    pub fn stabilizer_order(&self, depth: usize) -> BigUint {
        self.levels
            .iter()
            .skip(depth)
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    /// Sifts `g` from level `from`; returns the residue and the level at
    /// which sifting stopped (`levels.len()` when it passed every level).
    pub fn strip(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let x = h.apply(level.point);
            let k = level.pos[x];
            if k == NONE {
                return (h, l);
            }
            if k != 0 {
                h = &h * &level.inv_reps[k as usize];
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(g, 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Adds `g` to the group; returns `false` if it was already a member.
    pub fn add_generator(&mut self, g: &Permutation) -> bool {
        assert_eq!(g.degree(), self.degree, "generator degree mismatch");
        let (h, j) = self.strip(g, 0);
        if j == self.levels.len() && h.is_identity() {
            return false;
        }
        self.used_gens.push(g.clone());
        if j == self.levels.len() {
            let p = new_base_point(&h);
            self.push_level(p);
        }
        for l in 0..=j {
            self.levels[l].add_gen(h.clone());
        }
        self.close_from(j);
        true
    }

    fn close_from(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            match self.missing_schreier_generator(i as usize) {
                None => i -= 1,
                Some((y, j)) => {
                    if j == self.levels.len() {
                        let p = new_base_point(&y);
                        self.push_level(p);
                    }
                    for l in (i as usize + 1)..=j {
                        self.levels[l].add_gen(y.clone());
                    }
                    i = j as isize;
                }
            }
        }
    }

    fn missing_schreier_generator(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        let mut buf = vec![0u32; self.degree];
        for k in 0..level.orbit.len() {
            let x = level.orbit[k] as usize;
            let rep = &level.reps[k];
            for s in &level.gens {
                let y = s.apply(x);
                let inv = &level.inv_reps[level.pos[y] as usize];
                let mut trivial = true;
                for (z, slot) in buf.iter_mut().enumerate() {
                    let w = inv.apply(s.apply(rep.apply(z)));
                    trivial &= w == z;
                    *slot = w as u32;
                }
                if trivial {
                    continue;
                }
                let h = Permutation::from_raw(buf.clone());
                let (r, j) = self.strip(&h, i + 1);
                if j < self.levels.len() || !r.is_identity() {
                    return Some((r, j));
                }
            }
        }
        None
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let k = rng.gen_range(0..level.orbit.len());
            g = &g * &level.reps[k];
        }
        g
    }

    /// Every element, in transversal order. Intended for small groups.
    pub fn elements(&self) -> ElementIter<'_> {
        ElementIter {
            chain: self,
            idx: vec![0; self.levels.len()],
            done: false,
        }
    }

    /// The element whose base images are `images` (one per level), if any.
    pub fn element_from_base_images(&self, images: &[usize]) -> Option<Permutation> {
        if images.len() != self.levels.len() {
            return None;
        }
        // g = r_{k-1} ... r_0 where b_i^g = beta_i^{r_{i-1} .. r_0}; peel
        // the outermost representative first.
        let mut g = Permutation::identity(self.degree);
        let mut target: Vec<usize> = images.to_vec();
        for (i, level) in self.levels.iter().enumerate() {
            let inv_prefix = g.inverse();
            let beta = inv_prefix.apply(target[i]);
            let rep = level.rep(beta)?;
            g = rep * &g;
            target[i] = beta;
        }
        let check = self.levels.iter().zip(images).all(|(l, &x)| g.apply(l.point) == x);
        check.then_some(g)
    }
}

pub struct ElementIter<'a> {
    chain: &'a StabChain,
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for ElementIter<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let levels = &self.chain.levels;
        let mut g = Permutation::identity(self.chain.degree);
        for (l, &k) in levels.iter().zip(&self.idx).rev() {
            g = &g * &l.reps[k];
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == levels.len() {
                self.done = true;
                break;
            }
            self.idx[i] += 1;
            if self.idx[i] < levels[i].orbit.len() {
                break;
            }
            self.idx[i] = 0;
            i += 1;
        }
        Some(g)
    }
}

fn first_base_point(degree: usize, gens: &[Permutation]) -> Option<usize> {
    let orbits = crate::group::orbits_of(degree, gens);
    orbits
        .iter()
        .filter(|o| o.len() > 1)
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .map(|o| o[0])
}

/// Smallest point on a longest cycle of `g`.
fn new_base_point(g: &Permutation) -> usize {
    g.cycles()
        .into_iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .map(|c| c[0])
        .expect("non-identity residue")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn perms(strs: &[&str], n: usize) -> Vec<Permutation> {
        strs.iter().map(|s| Permutation::parse(s, n).unwrap()).collect()
    }

    /// Closure by breadth-first multiplication; the brute-force oracle.
    fn enumerate(n: usize, gens: &[Permutation]) -> HashSet<Permutation> {
        let mut seen = HashSet::new();
        let id = Permutation::identity(n);
        let mut frontier = vec![id.clone()];
        seen.insert(id);
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = &x * g;
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    #[test]
    fn small_orders() {
        let s5 = StabChain::build(5, &perms(&["(1 2 3 4 5)", "(1 2)"], 5), &[]);
        assert_eq!(s5.order(), BigUint::from(120u32));
        let a4 = StabChain::build(4, &perms(&["(1 2 3)", "(2 3 4)"], 4), &[]);
        assert_eq!(a4.order(), BigUint::from(12u32));
        let triv = StabChain::build(4, &perms(&["()"], 4), &[]);
        assert_eq!(triv.order(), BigUint::one());
        assert!(triv.levels().is_empty());
    }

    #[test]
    fn base_prefix_is_respected() {
        let s5 = StabChain::build(5, &perms(&["(1 2 3 4 5)", "(1 2)"], 5), &[3, 1]);
        assert_eq!(&s5.base()[..2], &[3, 1]);
        assert_eq!(s5.stabilizer_order(2), BigUint::from(6u32));
    }

    #[test]
    fn chain_invariants_against_enumeration() {
        let cases: Vec<(usize, Vec<&str>)> = vec![
            (6, vec!["(1 2 3 4 5 6)", "(1 6)(2 5)(3 4)"]),
            (7, vec!["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"]),
            (8, vec!["(1 2)(3 4)(5 6)(7 8)", "(1 3)(2 4)", "(1 5)(2 6)(3 7)(4 8)", "(1 2 3)"]),
            (8, vec!["(1 2 3 4 5 6 7 8)", "(1 2)"]),
        ];
        for (n, gs) in cases {
            let gens = perms(&gs, n);
            let chain = StabChain::build(n, &gens, &[]);
            let all = enumerate(n, &gens);
            assert_eq!(chain.order(), BigUint::from(all.len()));
            for (i, level) in chain.levels().iter().enumerate() {
                for s in level.generators() {
                    for earlier in &chain.levels()[..i] {
                        assert!(s.fixes(earlier.base_point()));
                    }
                }
            }
            for g in &gens {
                assert!(chain.contains(g));
            }
            let listed: HashSet<Permutation> = chain.elements().collect();
            assert_eq!(listed, all);
        }
    }

    #[test]
    fn element_from_base_images_roundtrips() {
        let gens = perms(&["(1 2 3 4 5 6)", "(1 2)"], 6);
        let chain = StabChain::build(6, &gens, &[]);
        for g in chain.elements().take(200) {
            let imgs: Vec<usize> = chain.base().iter().map(|&b| g.apply(b)).collect();
            assert_eq!(chain.element_from_base_images(&imgs), Some(g));
        }
    }
}
