mod common;

use common::*;
use num_bigint::BigUint;
use permres::search::{base_size_exact, count_regular_tuples, is_distinguishing, Budget, RegularCount};
use permres::{GeneratedGroup, Permutation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_group(max_n: usize, max_order: u64) -> impl Strategy<Value = GeneratedGroup> {
    (2..=max_n, any::<u64>()).prop_map(move |(n, seed)| random_group(&mut ChaCha8Rng::seed_from_u64(seed), n, max_order))
}

fn arb_transitive(min_n: usize, max_n: usize, max_order: u64) -> impl Strategy<Value = GeneratedGroup> {
    (min_n..=max_n, any::<u64>())
        .prop_map(move |(n, seed)| random_transitive(&mut ChaCha8Rng::seed_from_u64(seed), n, max_order))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn order_and_membership_match_enumeration(g in arb_group(8, 40320), seed: u64) {
        let elems = elements(&g);
        prop_assert_eq!(g.order(), BigUint::from(elems.len()));
        for e in &elems {
            prop_assert!(g.contains(&Permutation::from_images(e.clone()).unwrap()).unwrap());
        }
        // a random permutation is a member exactly when enumeration finds it
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut img: Vec<usize> = (0..g.degree()).collect();
        rand::seq::SliceRandom::shuffle(img.as_mut_slice(), &mut rng);
        let p = Permutation::from_images(img.clone()).unwrap();
        prop_assert_eq!(g.contains(&p).unwrap(), elems.contains(&img));
    }

    #[test]
    fn chain_elements_are_the_group(g in arb_group(7, 5040)) {
        let elems = elements(&g);
        let listed: std::collections::HashSet<Images> = g.chain().elements().map(|p| images(&p)).collect();
        prop_assert_eq!(listed, elems);
    }

    #[test]
    fn base_size_matches_brute_force(g in arb_group(10, 20000)) {
        let elems = elements(&g);
        let expected = brute_base_size(g.degree(), &elems);
        let got = base_size_exact(&g, g.degree(), &Budget::unlimited()).unwrap();
        prop_assert_eq!(got.exact(), Some(expected));
    }

    #[test]
    fn smallest_block_matches_brute_force(g in arb_transitive(4, 12, 5000), b in 1usize..12) {
        let n = g.degree();
        let b = b % n;
        prop_assume!(b != 0);
        let elems = elements(&g);
        let expected = brute_smallest_block(n, &elems, 0, b);
        let system = g.finest_block_system(0, b).unwrap();
        let block = system.blocks.iter().find(|blk| blk.contains(&0)).unwrap().clone();
        prop_assert_eq!(block, expected);
    }

    #[test]
    fn regular_tuples_match_naive(g in arb_group(6, 720), t in 2usize..=3) {
        let elems = elements(&g);
        let expected = naive_regular_tuples(g.degree(), &elems, t);
        let got = count_regular_tuples(&g, t, None, &Budget::unlimited()).unwrap();
        prop_assert_eq!(got, RegularCount::Exact { count: expected.into() });
    }

    #[test]
    fn distinguishing_test_matches_enumeration(g in arb_group(7, 5040), colours in proptest::collection::vec(0usize..3, 7)) {
        let coloring = &colours[..g.degree()];
        let elems = elements(&g);
        let preserved = elems
            .iter()
            .filter(|e| e.iter().enumerate().all(|(i, &x)| coloring[i] == coloring[x]))
            .count();
        prop_assert_eq!(is_distinguishing(&g, coloring).unwrap(), preserved == 1);
    }
}
