#![allow(dead_code)]

use std::collections::BTreeSet;

use p2flis::dualgraph::{build_dual, DualGraph};
use p2flis::tiling::{generate, TilePatch, VertexConfig};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn sun(depth: u32) -> (TilePatch<i64>, DualGraph) {
    let tp = generate::<i64>(VertexConfig::Sun, depth).unwrap();
    let g = build_dual(&tp);
    (tp, g)
}

/// Best leaf count per order over every induced subtree of `region`, by
/// exhaustive subset enumeration. `None` where no induced tree of that order
/// exists.
pub fn brute_force_leaves(g: &DualGraph, region: &[usize]) -> Vec<Option<usize>> {
    let m = region.len();
    assert!(m <= 20, "brute force limited to 20 vertices");
    let local: Vec<u32> = region
        .iter()
        .map(|&u| {
            region
                .iter()
                .enumerate()
                .filter(|&(_, &v)| g.are_adjacent(u, v))
                .fold(0u32, |acc, (j, _)| acc | (1 << j))
        })
        .collect();
    let mut best = vec![None; m + 1];
    for mask in 1u32..(1u32 << m) {
        let k = mask.count_ones() as usize;
        let mut edges = 0;
        let mut leaves = 0;
        for i in 0..m {
            if mask >> i & 1 == 1 {
                let d = (local[i] & mask).count_ones();
                edges += d;
                leaves += usize::from(d == 1);
            }
        }
        if edges as usize / 2 + 1 != k {
            continue;
        }
        // connectivity by bit flooding
        let mut seen = mask & mask.wrapping_neg();
        loop {
            let mut grow = seen;
            for i in 0..m {
                if seen >> i & 1 == 1 {
                    grow |= local[i] & mask;
                }
            }
            if grow == seen {
                break;
            }
            seen = grow;
        }
        if seen != mask {
            continue;
        }
        let slot = &mut best[k];
        *slot = Some(slot.map_or(leaves, |b: usize| b.max(leaves)));
    }
    best
}

/// Random connected vertex set of the given size grown inside `pool`.
pub fn random_region(g: &DualGraph, pool: &[usize], size: usize, rng: &mut impl Rng) -> Vec<usize> {
    let allowed: BTreeSet<usize> = pool.iter().copied().collect();
    let mut chosen = BTreeSet::from([*pool.choose(rng).unwrap()]);
    while chosen.len() < size {
        let frontier: Vec<usize> = chosen
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().copied())
            .filter(|v| allowed.contains(v) && !chosen.contains(v))
            .collect();
        chosen.insert(*frontier.choose(rng).unwrap());
    }
    chosen.into_iter().collect()
}

/// Random induced subtree of order up to `n` grown inside `pool`: each step
/// adds a vertex touching exactly one chosen vertex.
pub fn random_subtree(g: &DualGraph, pool: &[usize], n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let allowed: BTreeSet<usize> = pool.iter().copied().collect();
    let mut chosen = BTreeSet::from([*pool.choose(rng).unwrap()]);
    while chosen.len() < n {
        let frontier: Vec<usize> = chosen
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().copied())
            .filter(|v| allowed.contains(v) && !chosen.contains(v))
            .filter(|&v| g.neighbors(v).iter().filter(|w| chosen.contains(w)).count() == 1)
            .collect();
        match frontier.choose(rng) {
            Some(&v) => {
                chosen.insert(v);
            }
            None => break,
        }
    }
    chosen.into_iter().collect()
}
