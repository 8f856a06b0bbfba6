//! Brute-force oracles working on raw image vectors, independent of
//! stabilizer chains.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use permres::{GeneratedGroup, Permutation};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Images = Vec<usize>;

pub fn images(p: &Permutation) -> Images {
    (0..p.degree()).map(|x| p.apply(x)).collect()
}

/// Every element, by breadth-first closure under right multiplication.
pub fn closure(n: usize, gens: &[Images]) -> HashSet<Images> {
    let id: Images = (0..n).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Images = x.iter().map(|&i| g[i]).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn elements(g: &GeneratedGroup) -> HashSet<Images> {
    let gens: Vec<Images> = g.generators().iter().map(images).collect();
    closure(g.degree(), &gens)
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for x in start..n {
            cur.push(x);
            if rec(x + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::new(), f)
}

/// Least size of a point set fixed pointwise only by the identity.
pub fn brute_base_size(n: usize, elems: &HashSet<Images>) -> usize {
    let moving: Vec<&Images> = elems.iter().filter(|e| e.iter().enumerate().any(|(i, &x)| i != x)).collect();
    (0..=n)
        .find(|&k| combinations(n, k, &mut |s| moving.iter().all(|e| s.iter().any(|&x| e[x] != x))))
        .unwrap()
}

/// Smallest block containing `a` and `b`, by checking every subset against
/// every element.
pub fn brute_smallest_block(n: usize, elems: &HashSet<Images>, a: usize, b: usize) -> Vec<usize> {
    let others: Vec<usize> = (0..n).filter(|&x| x != a && x != b).collect();
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u32..(1 << others.len()) {
        let mut set = vec![a, b];
        set.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
        if best.as_ref().is_some_and(|bst| bst.len() <= set.len()) {
            continue;
        }
        let mut member = vec![false; n];
        for &x in &set {
            member[x] = true;
        }
        let is_block = elems.iter().all(|e| {
            let hits = set.iter().filter(|&&x| member[e[x]]).count();
            hits == 0 || hits == set.len()
        });
        if is_block {
            set.sort_unstable();
            best = Some(set);
        }
    }
    best.unwrap()
}

/// Number of `t`-tuples fixed pointwise only by the identity.
pub fn naive_regular_tuples(n: usize, elems: &HashSet<Images>, t: usize) -> u64 {
    let moving: Vec<&Images> = elems.iter().filter(|e| e.iter().enumerate().any(|(i, &x)| i != x)).collect();
    let mut count = 0;
    for mut code in 0..n.pow(t as u32) {
        let tuple: Vec<usize> = (0..t)
            .map(|_| {
                let x = code % n;
                code /= n;
                x
            })
            .collect();
        if moving.iter().all(|e| tuple.iter().any(|&x| e[x] != x)) {
            count += 1;
        }
    }
    count
}

fn random_small_support<R: Rng>(rng: &mut R, n: usize) -> Images {
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let k = rng.gen_range(2..=n.min(5));
    let mut img: Images = (0..n).collect();
    let moved = &pts[..k];
    let mut shuffled = moved.to_vec();
    shuffled.shuffle(rng);
    for (a, b) in moved.iter().zip(shuffled) {
        img[*a] = b;
    }
    img
}

/// A random subgroup of `S_n` of order at most `max_order`, from generators
/// with small support.
pub fn random_group<R: Rng>(rng: &mut R, n: usize, max_order: u64) -> GeneratedGroup {
    loop {
        let k = rng.gen_range(1..=3);
        let gens: Vec<Permutation> = (0..k)
            .map(|_| Permutation::from_images(random_small_support(rng, n)).unwrap())
            .collect();
        let g = GeneratedGroup::new(n, gens).unwrap();
        if g.order() <= max_order.into() {
            return g;
        }
    }
}

/// A random transitive group of degree `n`: the `n`-cycle together with an
/// affine map of `Z_n` or a map preserving the residue classes mod a divisor
/// of `n`.
pub fn random_transitive<R: Rng>(rng: &mut R, n: usize, max_order: u64) -> GeneratedGroup {
    let cycle: Images = (0..n).map(|i| (i + 1) % n).collect();
    loop {
        let extra: Images = if rng.gen_bool(0.5) {
            let units: Vec<usize> = (1..n).filter(|&u| gcd(u, n) == 1).collect();
            let u = *units.choose(rng).unwrap();
            let c = rng.gen_range(0..n);
            (0..n).map(|i| (u * i + c) % n).collect()
        } else {
            let divisors: Vec<usize> = (2..n).filter(|m| n % m == 0).collect();
            let Some(&m) = divisors.choose(rng) else { continue };
            // residue classes mod m are blocks of the cycle; permute them and
            // pick random bijections between classes
            let mut classes: Vec<usize> = (0..m).collect();
            classes.shuffle(rng);
            let mut img: Images = vec![0; n];
            for r in 0..m {
                let src: Vec<usize> = (r..n).step_by(m).collect();
                let mut dst: Vec<usize> = (classes[r]..n).step_by(m).collect();
                dst.shuffle(rng);
                for (a, b) in src.into_iter().zip(dst) {
                    img[a] = b;
                }
            }
            img
        };
        let gens = vec![
            Permutation::from_images(cycle.clone()).unwrap(),
            Permutation::from_images(extra).unwrap(),
        ];
        let g = GeneratedGroup::new(n, gens).unwrap();
        if g.order() <= max_order.into() {
            return g;
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
