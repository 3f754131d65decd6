mod common;

use std::sync::OnceLock;

use p2flis::cyclo::{Cyclo, Isometry};
use p2flis::dualgraph::{factorize, graft, DualGraph, Subtree};
use p2flis::leaf_formula::{leaf_closed, leaf_recursive, upper_bound_k};
use p2flis::structure::canonical_key;
use p2flis::tiling::{Tile, TilePatch};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn patch() -> &'static (TilePatch<i64>, DualGraph, Vec<usize>) {
    static P: OnceLock<(TilePatch<i64>, DualGraph, Vec<usize>)> = OnceLock::new();
    P.get_or_init(|| {
        let (tp, g) = common::sun(6);
        let pool = g.interior_region(1);
        (tp, g, pool)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn induced_subtrees_have_degree_at_most_three(seed in any::<u64>(), n in 2usize..80) {
        let (_, g, pool) = patch();
        let s = common::random_subtree(g, pool, n, &mut ChaCha8Rng::seed_from_u64(seed));
        let p = g.profile(&s);
        prop_assert!(p.is_tree);
        prop_assert!(p.max_degree <= 3);
        prop_assert_eq!(p.n1, p.n3 + 2);
        prop_assert_eq!(p.n, p.n1 + p.n2 + p.n3);
    }

    #[test]
    fn factorize_then_graft_is_identity(seed in any::<u64>(), n in 2usize..60, pick in any::<prop::sample::Index>(), flip in any::<bool>()) {
        let (_, g, pool) = patch();
        let s = Subtree::new(g, common::random_subtree(g, pool, n, &mut ChaCha8Rng::seed_from_u64(seed)));
        let edges: Vec<(usize, usize)> = s
            .vertices
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u < v && s.contains(v))
            .collect();
        let (mut t1, mut t2) = *pick.get(&edges);
        if flip {
            std::mem::swap(&mut t1, &mut t2);
        }
        let (a, b) = factorize(g, &s, t1, t2).unwrap();
        prop_assert_eq!(a.degree_in(g, t2), 1);
        prop_assert_eq!(b.degree_in(g, t1), 1);
        let back = graft(g, &a, &b, t1, t2).unwrap();
        prop_assert_eq!(&back.vertices, &s.vertices);
        let (p, pa, pb) = (s.profile, a.profile, b.profile);
        prop_assert_eq!(p.n + 2, pa.n + pb.n);
        prop_assert_eq!(p.n1 + 2, pa.n1 + pb.n1);
        prop_assert_eq!(p.n2, pa.n2 + pb.n2);
        prop_assert_eq!(p.n3, pa.n3 + pb.n3);
    }

    #[test]
    fn graft_rejects_overlapping_operands(seed in any::<u64>(), n in 4usize..30) {
        let (_, g, pool) = patch();
        let s = Subtree::new(g, common::random_subtree(g, pool, n, &mut ChaCha8Rng::seed_from_u64(seed)));
        let (u, v) = s
            .vertices
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().map(move |&v| (u, v)))
            .find(|&(_, v)| s.contains(v))
            .unwrap();
        prop_assert!(graft(g, &s, &s, u, v).is_err());
    }

    #[test]
    fn canonical_key_ignores_isometries(seed in any::<u64>(), n in 1usize..12, rot in 0usize..20, shift in prop::array::uniform4(-30i64..30)) {
        let (tp, g, pool) = patch();
        let s = common::random_subtree(g, pool, n, &mut ChaCha8Rng::seed_from_u64(seed));
        let tiles: Vec<Tile<i64>> = s.iter().map(|&i| tp.tiles[i].clone()).collect();
        let iso = Isometry::<i64>::point_group().nth(rot).unwrap();
        let mv = Isometry::translation(Cyclo::from_i64s(shift));
        let moved: Vec<Tile<i64>> = tiles.iter().map(|t| t.transform(&iso).transform(&mv)).collect();
        prop_assert_eq!(canonical_key(&moved), canonical_key(&tiles));
    }
}

proptest! {
    #[test]
    fn leaf_function_period(n in 2u64..1_000_000_000_000) {
        prop_assert_eq!(leaf_recursive(n + 17), leaf_recursive(n) + 8);
        prop_assert_eq!(leaf_closed(n), leaf_recursive(n));
    }

    #[test]
    fn leaf_function_steps(n in 4u64..1_000_000_000) {
        let l = leaf_recursive(n);
        prop_assert!(l >= leaf_recursive(n - 1) && l <= leaf_recursive(n - 1) + 1);
        prop_assert!(l <= leaf_recursive(n - 2) + 1);
    }

    #[test]
    fn loose_upper_bound(n in 2u64..1_000_000, k in 1u64..1_000_000) {
        prop_assume!(k < n);
        prop_assert!(leaf_recursive(n) <= upper_bound_k(n, k).unwrap());
    }
}
