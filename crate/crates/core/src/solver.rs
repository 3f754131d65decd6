//! Exact maximum-leaf induced subtree search on a region of the dual graph.
//!
//! Each induced subtree is generated exactly once: it is rooted at its
//! smallest vertex, and the search branches on one frontier vertex at a time
//! (take it or ban it for the rest of the branch). A frontier vertex must
//! touch exactly one chosen vertex, otherwise it would close a cycle.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dualgraph::DualGraph;
use crate::leaf_formula::leaf_recursive;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Prove the optimum from scratch; no knowledge of the leaf function.
    Verify,
    /// Look only for trees reaching the leaf function value; fall back to
    /// `Verify` if none exists in the region.
    Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// Current leaves plus one per remaining vertex.
    Potential,
    /// Degree accounting: every degree-3 vertex needs children from the
    /// remaining budget, and `n1 = n3 + 2`.
    Degree,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n_target: usize,
    pub region: Vec<usize>,
    pub mode: Mode,
    pub bound: BoundKind,
    pub deterministic: bool,
    pub node_budget: u64,
    /// Every region vertex must lie in `interior_region(min_margin)`.
    pub min_margin: usize,
}

impl SearchConfig {
    pub fn new(n_target: usize, region: Vec<usize>) -> Self {
        SearchConfig {
            n_target,
            region,
            mode: Mode::Verify,
            bound: BoundKind::Degree,
            deterministic: true,
            node_budget: 1_000_000_000,
            min_margin: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub n: usize,
    pub leaves: usize,
    pub witness: Vec<usize>,
    pub nodes: u64,
    pub seconds: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("node budget exhausted at n = {}; best so far {} leaves (not proven optimal)", .best.n, .best.leaves)]
    BudgetExceeded { best: SearchOutcome },
    #[error("region has {have} vertices, fewer than n = {need}")]
    RegionTooSmall { need: usize, have: usize },
    #[error("vertex {vertex} lies outside the margin-{margin} interior")]
    MarginTooSmall { vertex: usize, margin: usize },
}

/// Largest `n1` for a tree of order `n` with maximum degree 3.
fn degree_cap(n: usize) -> usize {
    match n {
        0 | 1 => 0,
        _ => n / 2 + 1,
    }
}

struct Shared<'a> {
    g: &'a DualGraph,
    allowed: Vec<bool>,
    n: usize,
    bound: BoundKind,
    best: AtomicUsize,
    best_witness: Mutex<Option<(usize, Vec<usize>)>>,
    nodes: AtomicU64,
    budget: u64,
    /// Nodes counted locally before touching the shared counter.
    batch: u64,
    stop: AtomicBool,
    out_of_budget: AtomicBool,
}

struct Worker<'a, 'b> {
    sh: &'b Shared<'a>,
    in_s: Vec<bool>,
    banned: Vec<bool>,
    deg: Vec<u8>,
    touch: Vec<u8>,
    chosen: Vec<usize>,
    n1: usize,
    n2: usize,
    n3: usize,
    local_nodes: u64,
    /// In target mode: stop at the first tree reaching this many leaves.
    target: Option<usize>,
    found: Option<Vec<usize>>,
}

impl<'a, 'b> Worker<'a, 'b> {
    fn new(sh: &'b Shared<'a>) -> Self {
        let n = sh.g.len();
        Worker {
            sh,
            in_s: vec![false; n],
            banned: vec![false; n],
            deg: vec![0; n],
            touch: vec![0; n],
            chosen: Vec::with_capacity(sh.n),
            n1: 0,
            n2: 0,
            n3: 0,
            local_nodes: 0,
            target: None,
            found: None,
        }
    }

    fn live(&self, v: usize) -> bool {
        self.sh.allowed[v] && !self.in_s[v] && !self.banned[v] && self.touch[v] == 1
    }

    fn bump_degree(&mut self, v: usize, delta: i8) {
        let old = self.deg[v];
        let new = (old as i8 + delta) as u8;
        self.count(old, -1);
        self.count(new, 1);
        self.deg[v] = new;
    }

    fn count(&mut self, d: u8, delta: isize) {
        let slot = match d {
            1 => &mut self.n1,
            2 => &mut self.n2,
            3 => &mut self.n3,
            _ => return,
        };
        *slot = (*slot as isize + delta) as usize;
    }

    fn add(&mut self, v: usize) {
        let g = self.sh.g;
        self.in_s[v] = true;
        self.chosen.push(v);
        for &w in g.neighbors(v) {
            if self.in_s[w] {
                self.bump_degree(w, 1);
                self.bump_degree(v, 1);
            } else {
                self.touch[w] += 1;
            }
        }
    }

    fn remove(&mut self, v: usize) {
        let g = self.sh.g;
        for &w in g.neighbors(v) {
            if self.in_s[w] {
                self.bump_degree(w, -1);
                self.bump_degree(v, -1);
            } else {
                self.touch[w] -= 1;
            }
        }
        self.in_s[v] = false;
        self.chosen.pop();
    }

    /// Frontier vertices, best-first: those attached to a degree-2 vertex
    /// (making it degree 3), then to a degree-1 vertex, then the rest.
    /// Degree-3 vertices take no more children.
    fn frontier(&self) -> Vec<usize> {
        let g = self.sh.g;
        let mut out: Vec<(u8, usize)> = Vec::new();
        for &u in &self.chosen {
            let rank = match self.deg[u] {
                2 => 0,
                1 => 1,
                0 => 2,
                _ => continue,
            };
            for &w in g.neighbors(u) {
                if self.live(w) {
                    out.push((rank, w));
                }
            }
        }
        out.sort_unstable();
        out.dedup_by_key(|x| x.1);
        out.into_iter().map(|x| x.1).collect()
    }

    fn upper_bound(&self) -> usize {
        let n = self.sh.n;
        let s = self.chosen.len();
        let k = n - s;
        match self.sh.bound {
            BoundKind::Potential => {
                if s <= 1 {
                    k + 1
                } else {
                    self.n1 + k
                }
            }
            BoundKind::Degree => {
                let g = self.sh.g;
                let upgradable = self
                    .chosen
                    .iter()
                    .filter(|&&u| self.deg[u] == 2 && g.neighbors(u).iter().any(|&w| self.live(w)))
                    .count();
                let mut best = 0;
                for a in 0..=upgradable.min(k) {
                    // `a` degree-2 vertices gain a child, the remaining budget
                    // makes at most one new degree-3 vertex per two vertices
                    let by_budget = self.n3 + a + (k - a) / 2;
                    let stuck_deg2 = self.n2 - a;
                    if n < 2 + stuck_deg2 {
                        continue;
                    }
                    let by_count = (n - 2 - stuck_deg2) / 2;
                    best = best.max(by_budget.min(by_count) + 2);
                }
                best
            }
        }
    }

    fn threshold(&self) -> usize {
        // prune when the bound cannot beat this value
        match self.target {
            Some(t) => t - 1,
            None => self.sh.best.load(Ordering::Relaxed),
        }
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes.is_multiple_of(self.sh.batch) {
            let total = self.sh.nodes.fetch_add(self.sh.batch, Ordering::Relaxed) + self.sh.batch;
            if total > self.sh.budget {
                self.sh.out_of_budget.store(true, Ordering::Relaxed);
                self.sh.stop.store(true, Ordering::Relaxed);
            }
        }
        // target runs ignore `stop`, which only ends the exploration pass
        let halted = match self.target {
            Some(_) => self.sh.out_of_budget.load(Ordering::Relaxed),
            None => self.sh.stop.load(Ordering::Relaxed),
        };
        !halted && self.found.is_none()
    }

    fn flush(&mut self) {
        self.sh.nodes.fetch_add(self.local_nodes % self.sh.batch, Ordering::Relaxed);
        self.local_nodes = 0;
    }

    fn search(&mut self) {
        if !self.tick() {
            return;
        }
        if self.chosen.len() == self.sh.n {
            self.record();
            return;
        }
        if self.upper_bound() <= self.threshold() {
            return;
        }
        let frontier = self.frontier();
        let Some(&c) = frontier.first() else {
            return;
        };
        self.add(c);
        self.search();
        self.remove(c);
        self.banned[c] = true;
        self.search();
        self.banned[c] = false;
    }

    fn record(&mut self) {
        let leaves = self.n1;
        debug_assert_eq!(self.n1, self.n3 + 2);
        if let Some(t) = self.target {
            if leaves >= t {
                let mut w = self.chosen.clone();
                w.sort_unstable();
                self.found = Some(w);
            }
            return;
        }
        if leaves > self.sh.best.fetch_max(leaves, Ordering::Relaxed) {
            let mut w = self.chosen.clone();
            w.sort_unstable();
            let mut slot = self.sh.best_witness.lock().expect("witness lock");
            if slot.as_ref().is_none_or(|(l, _)| *l < leaves) {
                *slot = Some((leaves, w));
            }
            if leaves >= degree_cap(self.sh.n) {
                self.sh.stop.store(true, Ordering::Relaxed);
            }
        }
    }

    fn run_root(&mut self, root: usize) {
        // vertices below the root belong to other roots
        for v in 0..root {
            self.banned[v] = true;
        }
        self.add(root);
        self.search();
        self.remove(root);
        for v in 0..root {
            self.banned[v] = false;
        }
        self.flush();
    }
}

/// Exact maximum number of leaves over induced subtrees of order
/// `cfg.n_target` inside `cfg.region`.
pub fn max_leaves_exact(g: &DualGraph, cfg: &SearchConfig) -> Result<SearchOutcome, SolverError> {
    let start = Instant::now();
    let n = cfg.n_target;
    let mut region = cfg.region.clone();
    region.sort_unstable();
    region.dedup();
    if region.len() < n.max(1) {
        return Err(SolverError::RegionTooSmall {
            need: n,
            have: region.len(),
        });
    }
    if cfg.min_margin > 0 {
        let deep = g.interior_region(cfg.min_margin);
        if let Some(&v) = region.iter().find(|v| deep.binary_search(v).is_err()) {
            return Err(SolverError::MarginTooSmall {
                vertex: v,
                margin: cfg.min_margin,
            });
        }
    }
    if n <= 1 {
        return Ok(SearchOutcome {
            n,
            leaves: 0,
            witness: region[..n].to_vec(),
            nodes: 0,
            seconds: start.elapsed().as_secs_f64(),
        });
    }

    let mut allowed = vec![false; g.len()];
    for &v in &region {
        allowed[v] = true;
    }
    let sh = Shared {
        g,
        allowed,
        n,
        bound: cfg.bound,
        best: AtomicUsize::new(0),
        best_witness: Mutex::new(None),
        nodes: AtomicU64::new(0),
        budget: cfg.node_budget,
        batch: (cfg.node_budget / 1024).clamp(1, 4096),
        stop: AtomicBool::new(false),
        out_of_budget: AtomicBool::new(false),
    };

    let mut leaves = 0;
    let mut witness = None;
    if cfg.mode == Mode::Witness {
        let target = leaf_recursive(n as u64) as usize;
        if let Some(w) = find_first(&sh, &region, target) {
            leaves = target;
            witness = Some(w);
        }
    }
    if witness.is_none() && !sh.out_of_budget.load(Ordering::Relaxed) {
        region.par_iter().for_each_init(
            || Worker::new(&sh),
            |w, &root| {
                if !sh.stop.load(Ordering::Relaxed) {
                    w.run_root(root);
                }
            },
        );
        if let Some((l, w)) = sh.best_witness.lock().expect("witness lock").take() {
            leaves = l;
            witness = Some(w);
        }
        if cfg.deterministic && leaves > 0 && !sh.out_of_budget.load(Ordering::Relaxed) {
            witness = find_first(&sh, &region, leaves).or(witness);
        }
    }

    let outcome = SearchOutcome {
        n,
        leaves,
        witness: witness.unwrap_or_default(),
        nodes: sh.nodes.load(Ordering::Relaxed),
        seconds: start.elapsed().as_secs_f64(),
    };
    assert!(
        outcome.leaves as u64 <= leaf_recursive(n as u64),
        "{} leaves at n = {n} exceeds the leaf function: adjacency is broken",
        outcome.leaves
    );
    if sh.out_of_budget.load(Ordering::Relaxed) {
        return Err(SolverError::BudgetExceeded { best: outcome });
    }
    Ok(outcome)
}

/// The witness reaching `target` found first in canonical order: smallest
/// root, then depth-first order within the root.
fn find_first(sh: &Shared, region: &[usize], target: usize) -> Option<Vec<usize>> {
    region.par_iter().find_map_first(|&root| {
        if sh.out_of_budget.load(Ordering::Relaxed) {
            return None;
        }
        let mut w = Worker::new(sh);
        w.target = Some(target);
        w.run_root(root);
        w.found
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeafRow {
    pub n: usize,
    pub leaves: Option<usize>,
    pub witness: Vec<usize>,
    pub nodes: u64,
    pub seconds: f64,
    pub status: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LeafTable {
    pub rows: Vec<LeafRow>,
}

impl LeafTable {
    /// Rows breaking `L(n) - L(n-1) ∈ {0, 1}` or `L(n) ≤ L(n-2) + 1`.
    pub fn step_violations(&self) -> Vec<usize> {
        let value = |n: usize| self.rows.iter().find(|r| r.n == n).and_then(|r| r.leaves);
        self.rows
            .iter()
            .filter_map(|r| {
                let l = r.leaves?;
                let bad1 = r.n >= 3 && value(r.n - 1).is_some_and(|p| l < p || l > p + 1);
                let bad2 = r.n >= 4 && value(r.n - 2).is_some_and(|p| l > p + 1);
                (bad1 || bad2).then_some(r.n)
            })
            .collect()
    }

    /// `n,L,nodes,seconds,witness_id,status`; the witness id indexes the
    /// witness JSON written alongside.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,L,nodes,seconds,witness_id,status\n");
        for r in &self.rows {
            let l = r.leaves.map(|l| l.to_string()).unwrap_or_default();
            let wid = if r.witness.is_empty() {
                String::new()
            } else {
                format!("n{}", r.n)
            };
            out.push_str(&format!(
                "{},{},{},{:.3},{},{}\n",
                r.n, l, r.nodes, r.seconds, wid, r.status
            ));
        }
        out
    }

    /// `{"n2": [ids], ...}`
    pub fn witnesses_json(&self) -> String {
        let map: serde_json::Map<String, serde_json::Value> = self
            .rows
            .iter()
            .filter(|r| !r.witness.is_empty())
            .map(|r| (format!("n{}", r.n), serde_json::json!(r.witness)))
            .collect();
        serde_json::to_string_pretty(&map).expect("witnesses serialize")
    }
}

/// Solves every `n` in `2..=n_max`; solver failures become status strings.
pub fn leaf_table(g: &DualGraph, base: &SearchConfig, n_max: usize) -> LeafTable {
    let mut table = LeafTable::default();
    for n in 2..=n_max {
        let cfg = SearchConfig {
            n_target: n,
            ..base.clone()
        };
        let row = match max_leaves_exact(g, &cfg) {
            Ok(o) => LeafRow {
                n,
                leaves: Some(o.leaves),
                witness: o.witness,
                nodes: o.nodes,
                seconds: o.seconds,
                status: "ok".into(),
            },
            Err(SolverError::BudgetExceeded { best }) => LeafRow {
                n,
                leaves: Some(best.leaves),
                witness: best.witness,
                nodes: best.nodes,
                seconds: best.seconds,
                status: "budget_exceeded".into(),
            },
            Err(e @ SolverError::RegionTooSmall { .. }) => error_row(n, "region_too_small", e),
            Err(e @ SolverError::MarginTooSmall { .. }) => error_row(n, "margin_too_small", e),
        };
        table.rows.push(row);
    }
    let bad = table.step_violations();
    for r in &mut table.rows {
        if bad.contains(&r.n) {
            r.status.push_str("+step_violation");
        }
    }
    table
}

fn error_row(n: usize, status: &str, e: SolverError) -> LeafRow {
    LeafRow {
        n,
        leaves: None,
        witness: vec![],
        nodes: 0,
        seconds: 0.0,
        status: format!("{status}: {e}"),
    }
}

