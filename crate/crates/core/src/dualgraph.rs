//! Tile adjacency graph, interior regions, subtree profiles and grafting.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::cyclo::Coeff;
use crate::tiling::{TileKind, TilePatch};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error("graft precondition violated: {0}")]
    GraftPreconditionViolated(&'static str),
    #[error("{0} and {1} are not adjacent in the subtree")]
    NotAnEdge(usize, usize),
    #[error("vertex set does not induce a tree")]
    NotATree,
}

/// Vertices are tile ids of the source patch; edges join tiles sharing a
/// full edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    adj: Vec<Vec<usize>>,
    kinds: Vec<TileKind>,
    /// Tile has four neighbours and none of its corners is on the boundary.
    complete: Vec<bool>,
}

pub fn build_dual<T: Coeff>(tp: &TilePatch<T>) -> DualGraph {
    let n = tp.len();
    let mut adj = vec![Vec::new(); n];
    for (_, owners) in tp.edges() {
        if let [a, b] = owners[..] {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let complete = (0..n)
        .map(|t| adj[t].len() == 4 && tp.tiles[t].vertices.iter().all(|v| tp.angle_sum(v) == 10))
        .collect();
    DualGraph {
        adj,
        kinds: tp.tiles.iter().map(|t| t.kind).collect(),
        complete,
    }
}

impl DualGraph {
    /// Builds a graph from explicit adjacency; every vertex counts as complete.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>, kinds: Vec<TileKind>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let complete = vec![true; adj.len()];
        DualGraph { adj, kinds, complete }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn kind(&self, v: usize) -> TileKind {
        self.kinds[v]
    }

    pub fn is_complete(&self, v: usize) -> bool {
        self.complete[v]
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// BFS distances from a set of sources; `usize::MAX` when unreachable.
    pub fn distances_from(&self, sources: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Tiles whose whole radius-`r` ball consists of complete tiles.
    pub fn interior_region(&self, r: usize) -> Vec<usize> {
        let dist = self.distances_from((0..self.len()).filter(|&t| !self.complete[t]));
        (0..self.len()).filter(|&t| dist[t] > r).collect()
    }

    /// Largest `r` with `v` in `interior_region(r)`; `None` if `v` is incomplete.
    pub fn margin_of(&self, v: usize) -> Option<usize> {
        let dist = self.distances_from((0..self.len()).filter(|&t| !self.complete[t]));
        dist[v].checked_sub(1)
    }

    /// Complete tiles none of whose neighbour pairs are adjacent. Every
    /// kite/dart tiling yields an empty list.
    pub fn tiles_without_adjacent_neighbors(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&t| self.complete[t])
            .filter(|&t| {
                let nb = &self.adj[t];
                !nb.iter()
                    .enumerate()
                    .any(|(i, &a)| nb[i + 1..].iter().any(|&b| self.are_adjacent(a, b)))
            })
            .collect()
    }

    /// `u v` per line, `u < v`, sorted.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn profile(&self, s: &[usize]) -> Profile {
        Profile::of(self, s)
    }
}

/// JSON array mapping vertex id (array index) to its tile.
pub fn tile_sidecar<T: Coeff>(tp: &TilePatch<T>) -> String {
    #[derive(Serialize)]
    #[serde(bound = "")]
    struct Entry<'a, T: Coeff> {
        id: usize,
        kind: TileKind,
        vertices: &'a [crate::cyclo::Point<T>; 4],
    }
    let entries: Vec<Entry<T>> = tp
        .tiles
        .iter()
        .enumerate()
        .map(|(id, t)| Entry {
            id,
            kind: t.kind,
            vertices: &t.vertices,
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("sidecar serializes")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Profile {
    pub is_tree: bool,
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub max_degree: usize,
    pub is_caterpillar: bool,
}

impl Profile {
    fn of(g: &DualGraph, s: &[usize]) -> Profile {
        let members: BTreeSet<usize> = s.iter().copied().collect();
        let deg: Vec<usize> = members
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|w| members.contains(w)).count())
            .collect();
        let n = members.len();
        let edges = deg.iter().sum::<usize>() / 2;
        let count = |d: usize| deg.iter().filter(|&&x| x == d).count();
        let is_tree = n > 0 && edges + 1 == n && is_connected(g, &members);
        let is_caterpillar = is_tree && {
            // derived tree is a path iff no internal vertex has 3+ internal neighbours
            let internal: BTreeSet<usize> = members
                .iter()
                .zip(&deg)
                .filter(|&(_, &d)| d >= 2)
                .map(|(&v, _)| v)
                .collect();
            internal.iter().all(|&v| {
                g.neighbors(v).iter().filter(|w| internal.contains(w)).count() <= 2
            })
        };
        Profile {
            is_tree,
            n,
            n1: count(1),
            n2: count(2),
            n3: count(3),
            max_degree: deg.iter().copied().max().unwrap_or(0),
            is_caterpillar,
        }
    }
}

fn is_connected(g: &DualGraph, members: &BTreeSet<usize>) -> bool {
    let Some(&start) = members.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if members.contains(&v) && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    seen.len() == members.len()
}

/// A vertex set with its cached profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subtree {
    pub vertices: Vec<usize>,
    pub profile: Profile,
}

impl Subtree {
    pub fn new(g: &DualGraph, mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        let profile = g.profile(&vertices);
        Subtree { vertices, profile }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn degree_in(&self, g: &DualGraph, v: usize) -> usize {
        g.neighbors(v).iter().filter(|&&w| self.contains(w)).count()
    }

    pub fn is_3_internal_regular(&self, g: &DualGraph) -> bool {
        self.profile.is_tree
            && self
                .vertices
                .iter()
                .all(|&v| matches!(self.degree_in(g, v), 0 | 1 | 3))
    }

    /// Internal vertices (degree ≥ 2).
    pub fn derived(&self, g: &DualGraph) -> Vec<usize> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| self.degree_in(g, v) >= 2)
            .collect()
    }

    pub fn leaves(&self, g: &DualGraph) -> Vec<usize> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| self.degree_in(g, v) == 1)
            .collect()
    }
}

/// Glues `i1` and `i2` along the edge `t1–t2`, where `t2` is a leaf of `i1`
/// and `t1` a leaf of `i2`.
pub fn graft(
    g: &DualGraph,
    i1: &Subtree,
    i2: &Subtree,
    t1: usize,
    t2: usize,
) -> Result<Subtree, DualError> {
    use DualError::GraftPreconditionViolated as Bad;
    if !g.are_adjacent(t1, t2) {
        return Err(Bad("t1 and t2 are not adjacent"));
    }
    if !i1.profile.is_tree || !i2.profile.is_tree {
        return Err(Bad("operands are not induced trees"));
    }
    let common: Vec<usize> = i1
        .vertices
        .iter()
        .copied()
        .filter(|&v| i2.contains(v))
        .collect();
    let mut pair = [t1, t2];
    pair.sort_unstable();
    if common != pair {
        return Err(Bad("I1 and I2 must intersect in exactly {t1, t2}"));
    }
    if i1.degree_in(g, t2) != 1 {
        return Err(Bad("t2 is not a leaf of I1"));
    }
    if i2.degree_in(g, t1) != 1 {
        return Err(Bad("t1 is not a leaf of I2"));
    }
    let union: Vec<usize> = i1.vertices.iter().chain(&i2.vertices).copied().collect();
    let out = Subtree::new(g, union);
    if !out.profile.is_tree {
        return Err(Bad("union is not an induced tree"));
    }
    Ok(out)
}

/// Splits `i` at the edge `t1–t2`: each side keeps its component plus the
/// far endpoint, so that `graft` reverses the split.
pub fn factorize(
    g: &DualGraph,
    i: &Subtree,
    t1: usize,
    t2: usize,
) -> Result<(Subtree, Subtree), DualError> {
    if !i.profile.is_tree {
        return Err(DualError::NotATree);
    }
    if !(i.contains(t1) && i.contains(t2) && g.are_adjacent(t1, t2)) {
        return Err(DualError::NotAnEdge(t1, t2));
    }
    let side = |start: usize, blocked: usize| {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if v != blocked && i.contains(v) && seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen.insert(blocked);
        seen.into_iter().collect::<Vec<_>>()
    };
    Ok((Subtree::new(g, side(t1, t2)), Subtree::new(g, side(t2, t1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{generate, merge_half_tiles, seed_patch, VertexConfig};

    fn seed_graph(cfg: VertexConfig) -> DualGraph {
        build_dual(&merge_half_tiles(&seed_patch::<i64>(cfg).unwrap()).unwrap())
    }

    #[test]
    fn sun_seed_is_a_five_cycle() {
        let g = seed_graph(VertexConfig::Sun);
        assert_eq!(g.len(), 5);
        assert_eq!(g.edge_count(), 5);
        assert!((0..5).all(|v| g.degree(v) == 2));
        assert!(!g.profile(&[0, 1, 2, 3, 4]).is_tree);
        assert!(g.interior_region(0).is_empty());
    }

    #[test]
    fn seed_graphs_follow_shared_edges() {
        // the dart's two short edges meet the kites' short edges, and the two
        // kites share a long edge: a triangle
        let ace = seed_graph(VertexConfig::Ace);
        assert_eq!((ace.len(), ace.edge_count()), (3, 3));
        let star = seed_graph(VertexConfig::Star);
        assert_eq!((star.len(), star.edge_count()), (5, 5));
    }

    #[test]
    fn single_tile_graph() {
        let g = DualGraph::from_adjacency(vec![vec![]], vec![TileKind::Kite]);
        assert_eq!((g.len(), g.edge_count()), (1, 0));
        let p = g.profile(&[0]);
        assert!(p.is_tree);
        assert_eq!((p.n, p.n1), (1, 0));
    }

    fn path(n: usize) -> DualGraph {
        let adj = (0..n)
            .map(|i| {
                let mut v = vec![];
                if i > 0 {
                    v.push(i - 1);
                }
                if i + 1 < n {
                    v.push(i + 1);
                }
                v
            })
            .collect();
        DualGraph::from_adjacency(adj, vec![TileKind::Kite; n])
    }

    #[test]
    fn profiles_of_small_paths() {
        let g = path(4);
        let p = g.profile(&[0, 1]);
        assert_eq!((p.is_tree, p.n, p.n1, p.n2, p.n3, p.is_caterpillar), (true, 2, 2, 0, 0, true));
        let p = g.profile(&[0, 1, 2, 3]);
        assert_eq!((p.is_tree, p.n, p.n1, p.n2, p.n3, p.is_caterpillar), (true, 4, 2, 2, 0, true));
        assert!(!g.profile(&[0, 2]).is_tree);
    }

    #[test]
    fn factorize_path_at_leaf_edge() {
        let g = path(3);
        let t = Subtree::new(&g, vec![0, 1, 2]);
        let (a, b) = factorize(&g, &t, 1, 2).unwrap();
        assert_eq!(a.vertices, vec![0, 1, 2]);
        assert_eq!(b.vertices, vec![1, 2]);
        assert_eq!(graft(&g, &a, &b, 1, 2).unwrap(), t);
        assert_eq!(factorize(&g, &t, 0, 2), Err(DualError::NotAnEdge(0, 2)));
    }

    #[test]
    fn graft_reports_failed_clause() {
        let g = path(5);
        let a = Subtree::new(&g, vec![0, 1, 2]);
        let b = Subtree::new(&g, vec![2, 3, 4]);
        match graft(&g, &a, &b, 1, 2) {
            Err(DualError::GraftPreconditionViolated(msg)) => assert!(msg.contains("intersect")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn deep_patch_has_interior_and_lemma_geometry() {
        let tp = generate::<i64>(VertexConfig::Sun, 6).unwrap();
        let g = build_dual(&tp);
        assert!((0..g.len()).all(|v| g.degree(v) <= 4));
        let r0 = g.interior_region(0);
        let r1 = g.interior_region(1);
        let r2 = g.interior_region(2);
        assert!(!r2.is_empty());
        assert!(r1.iter().all(|v| r0.contains(v)));
        assert!(r2.iter().all(|v| r1.contains(v)));
        assert!(g.tiles_without_adjacent_neighbors().is_empty());
    }

    #[test]
    fn edge_list_format() {
        let g = path(3);
        assert_eq!(g.edge_list(), "0 1\n1 2\n");
    }
}
