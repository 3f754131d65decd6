mod common;

use p2flis::leaf_formula::leaf_recursive;
use p2flis::solver::{leaf_table, max_leaves_exact, BoundKind, Mode, SearchConfig, SolverError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn small_orders_on_depth_six_patch() {
    let (_, g) = common::sun(6);
    let region = g.interior_region(1);
    for (n, want) in [(2, 2), (12, 7), (14, 8)] {
        let out = max_leaves_exact(&g, &SearchConfig::new(n, region.clone())).unwrap();
        assert_eq!(out.leaves, want, "n = {n}");
        let p = g.profile(&out.witness);
        assert!(p.is_tree);
        assert_eq!((p.n, p.n1, p.n1), (n, want, p.n3 + 2));
        assert!(p.max_degree <= 3);
    }
}

#[test]
fn agrees_with_brute_force_on_random_regions() {
    let (_, g) = common::sun(5);
    let pool = g.interior_region(1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..6 {
        let region = common::random_region(&g, &pool, 14, &mut rng);
        let oracle = common::brute_force_leaves(&g, &region);
        for (n, expected) in oracle.iter().enumerate().skip(2) {
            for bound in [BoundKind::Potential, BoundKind::Degree] {
                let cfg = SearchConfig {
                    bound,
                    ..SearchConfig::new(n, region.clone())
                };
                let got = max_leaves_exact(&g, &cfg).unwrap();
                assert_eq!(Some(got.leaves).filter(|&l| l > 0), *expected, "n = {n} {bound:?}");
            }
        }
    }
}

#[test]
fn witness_mode_matches_verify_mode() {
    let (_, g) = common::sun(5);
    let region = g.interior_region(1);
    for n in [9, 20, 22] {
        let v = max_leaves_exact(&g, &SearchConfig::new(n, region.clone())).unwrap();
        let w = max_leaves_exact(
            &g,
            &SearchConfig {
                mode: Mode::Witness,
                ..SearchConfig::new(n, region.clone())
            },
        )
        .unwrap();
        assert_eq!(v.leaves, w.leaves);
        assert_eq!(v.leaves as u64, leaf_recursive(n as u64));
    }
}

#[test]
fn deterministic_witness_is_independent_of_thread_count() {
    let (_, g) = common::sun(5);
    let region = g.interior_region(1);
    let run = |threads: usize, n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| max_leaves_exact(&g, &SearchConfig::new(n, region.clone())).unwrap())
    };
    for n in [11, 16, 20] {
        let a = run(1, n);
        let b = run(4, n);
        assert_eq!((a.leaves, &a.witness), (b.leaves, &b.witness));
    }
}

#[test]
fn error_paths() {
    let (_, g) = common::sun(5);
    let region = g.interior_region(1);
    let tiny = SearchConfig {
        node_budget: 100,
        ..SearchConfig::new(24, region.clone())
    };
    match max_leaves_exact(&g, &tiny) {
        Err(SolverError::BudgetExceeded { best }) => assert!(best.leaves <= 13),
        other => panic!("{other:?}"),
    }
    let small = SearchConfig::new(5, region[..3].to_vec());
    assert!(matches!(
        max_leaves_exact(&g, &small),
        Err(SolverError::RegionTooSmall { need: 5, have: 3 })
    ));
    let all: Vec<usize> = (0..g.len()).collect();
    assert!(matches!(
        max_leaves_exact(&g, &SearchConfig::new(4, all)),
        Err(SolverError::MarginTooSmall { .. })
    ));
}

#[test]
fn table_rows_step_by_zero_or_one() {
    let (_, g) = common::sun(5);
    let table = leaf_table(&g, &SearchConfig::new(0, g.interior_region(1)), 20);
    assert!(table.step_violations().is_empty());
    for row in &table.rows {
        assert_eq!(row.leaves, Some(leaf_recursive(row.n as u64) as usize));
    }
    let csv = table.to_csv();
    assert!(csv.starts_with("n,L,nodes,seconds,witness_id,status\n"));
    assert!(csv.lines().any(|l| l.starts_with("12,7,")));
}

#[test]
fn insufficient_margin_becomes_error_row() {
    let (_, g) = common::sun(4);
    let cfg = SearchConfig::new(0, (0..g.len()).collect());
    let table = leaf_table(&g, &cfg, 3);
    assert!(table.rows.iter().all(|r| r.status.starts_with("margin_too_small")));
}
