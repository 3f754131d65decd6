//! Structure of fully leafed subtrees: the graded poset of derived trees of
//! 3-internal-regular subtrees, flowers around Star vertices and their
//! skeleton, and the caterpillar family built by guided search.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{Coeff, Cyclo, Isometry, Point};
use crate::dualgraph::{DualGraph, Subtree};
use crate::tiling::{Tile, TileKind, TilePatch, VertexConfig};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("vertex {vertex} lies outside the margin-{margin} interior")]
    MarginTooSmall { vertex: usize, margin: usize },
    #[error("no caterpillar of the requested shape found in the patch; increase the substitution depth")]
    NotFoundWithinPatch,
}

/// Isometry-invariant key of a tile set: the smallest tile listing over
/// the 20 point-group images, each translated so its least vertex is 0.
pub fn canonical_key<T: Coeff>(tiles: &[Tile<T>]) -> String {
    let mut best: Option<Vec<(TileKind, Vec<Point<T>>)>> = None;
    for iso in Isometry::<T>::point_group() {
        let moved: Vec<Tile<T>> = tiles.iter().map(|t| t.transform(&iso)).collect();
        let Some(anchor) = moved.iter().flat_map(|t| t.vertices.iter()).min().cloned() else {
            return String::new();
        };
        let shift = Isometry::translation(-anchor);
        let mut listing: Vec<(TileKind, Vec<Point<T>>)> = moved
            .iter()
            .map(|t| (t.kind, t.transform(&shift).key()))
            .collect();
        listing.sort();
        if best.as_ref().is_none_or(|b| listing < *b) {
            best = Some(listing);
        }
    }
    let mut out = String::new();
    for (kind, verts) in best.unwrap_or_default() {
        out.push(match kind {
            TileKind::Kite => 'K',
            TileKind::Dart => 'D',
        });
        for v in verts {
            out.push_str(&v.to_string());
        }
    }
    out
}

/// Leaves turning `set` into a 3-internal-regular induced tree with derived
/// tree `set`: every member gets `3 - deg` private, pairwise non-adjacent
/// neighbours. Returns the smallest such leaf set (by sorted ids).
pub fn leaf_completion(g: &DualGraph, set: &[usize]) -> Option<Vec<usize>> {
    let members: BTreeSet<usize> = set.iter().copied().collect();
    let mut needs = Vec::new();
    for &v in &members {
        let d = g.neighbors(v).iter().filter(|w| members.contains(w)).count();
        if d > 3 {
            return None;
        }
        let private: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|w| !members.contains(w))
            .filter(|&w| g.neighbors(w).iter().filter(|x| members.contains(x)).count() == 1)
            .collect();
        let want = 3 - d;
        if private.len() < want {
            return None;
        }
        needs.push((want, private));
    }
    let mut chosen = Vec::new();
    if assign_leaves(g, &needs, 0, &mut chosen) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

fn assign_leaves(g: &DualGraph, needs: &[(usize, Vec<usize>)], i: usize, chosen: &mut Vec<usize>) -> bool {
    let Some((want, cands)) = needs.get(i) else {
        return true;
    };
    // subsets of size `want` in lexicographic order
    let k = *want;
    let m = cands.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let pick: Vec<usize> = idx.iter().map(|&j| cands[j]).collect();
        let ok = pick.iter().enumerate().all(|(a, &x)| {
            pick[a + 1..].iter().all(|&y| !g.are_adjacent(x, y))
                && chosen.iter().all(|&y| !g.are_adjacent(x, y))
        });
        if ok {
            let before = chosen.len();
            chosen.extend(&pick);
            if assign_leaves(g, needs, i + 1, chosen) {
                return true;
            }
            chosen.truncate(before);
        }
        // next combination
        let mut p = k;
        loop {
            if p == 0 {
                return false;
            }
            p -= 1;
            if idx[p] < m - k + p {
                break;
            }
        }
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct DerivedClass<T: Coeff> {
    pub key: String,
    pub size: usize,
    /// A representative derived tree, with its tree edges as local indices.
    pub tiles: Vec<Tile<T>>,
    pub edges: Vec<(usize, usize)>,
    /// Leaves completing the representative.
    pub leaves: Vec<Tile<T>>,
    /// Number of occurrences in the searched region.
    pub occurrences: usize,
}

impl<T: Coeff> DerivedClass<T> {
    /// Whether the representative's derived tree is a path.
    pub fn is_path(&self) -> bool {
        let n = self.tiles.len();
        let mut deg = vec![0usize; n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        n == 0 || (self.edges.len() + 1 == n && deg.iter().all(|&d| d <= 2))
    }
}

#[derive(Clone, Debug)]
pub struct Poset<T: Coeff> {
    pub rows: BTreeMap<usize, Vec<DerivedClass<T>>>,
    /// `(smaller, larger)` pairs of class keys, one size apart.
    pub covers: Vec<(String, String)>,
}

impl<T: Coeff> Poset<T> {
    pub fn row_sizes(&self) -> BTreeMap<usize, usize> {
        self.rows.iter().map(|(&k, v)| (k, v.len())).collect()
    }

    /// `{"rows": {"1": [keys]}, "covers": [[key, key]]}`
    pub fn to_json(&self) -> String {
        let rows: BTreeMap<String, Vec<&str>> = self
            .rows
            .iter()
            .map(|(k, v)| (k.to_string(), v.iter().map(|c| c.key.as_str()).collect()))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "rows": rows,
            "covers": self.covers,
        }))
        .expect("poset serializes")
    }
}

/// Largest derived-tree size explored; one more than the largest possible.
pub const POSET_SEARCH_LIMIT: usize = 9;

/// All derived trees (up to isometry) of 3-internal-regular induced subtrees
/// lying in `region`, graded by size, up to `max_size` tiles.
pub fn enumerate_3regular<T: Coeff>(
    tp: &TilePatch<T>,
    g: &DualGraph,
    region: &[usize],
    max_size: usize,
) -> Result<Poset<T>, StructureError> {
    let deep = g.interior_region(2);
    if let Some(&v) = region.iter().find(|v| deep.binary_search(v).is_err()) {
        return Err(StructureError::MarginTooSmall { vertex: v, margin: 2 });
    }
    let mut allowed = vec![false; g.len()];
    for &v in region {
        allowed[v] = true;
    }
    let found: Vec<Vec<usize>> = region
        .par_iter()
        .flat_map_iter(|&root| {
            let mut out = Vec::new();
            let mut grow = Grow {
                g,
                allowed: &allowed,
                max: max_size,
                chosen: vec![root],
                banned: BTreeSet::new(),
                out: &mut out,
            };
            if leaf_completion(g, &[root]).is_some() {
                grow.run(root);
            }
            out
        })
        .collect();

    let keyed: Vec<(String, Vec<usize>)> = found
        .into_par_iter()
        .map(|set| {
            let tiles: Vec<Tile<T>> = set.iter().map(|&v| tp.tiles[v].clone()).collect();
            (canonical_key(&tiles), set)
        })
        .collect();
    let mut groups: BTreeMap<String, (usize, Vec<usize>)> = BTreeMap::new();
    for (key, set) in keyed {
        let e = groups.entry(key).or_insert((0, set.clone()));
        e.0 += 1;
        if set < e.1 {
            e.1 = set;
        }
    }

    let mut rows: BTreeMap<usize, Vec<DerivedClass<T>>> = (1..=max_size).map(|k| (k, Vec::new())).collect();
    let mut covers = BTreeSet::new();
    for (key, (occurrences, set)) in groups {
        let local: HashMap<usize, usize> = set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &u) in set.iter().enumerate() {
            for &w in g.neighbors(u) {
                if let Some(&j) = local.get(&w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let leaves = leaf_completion(g, &set).expect("class representative is realizable");
        // covers: drop one leaf of the derived tree
        if set.len() > 1 {
            for &u in &set {
                let deg = g.neighbors(u).iter().filter(|w| local.contains_key(w)).count();
                if deg <= 1 {
                    let sub: Vec<Tile<T>> = set
                        .iter()
                        .filter(|&&v| v != u)
                        .map(|&v| tp.tiles[v].clone())
                        .collect();
                    covers.insert((canonical_key(&sub), key.clone()));
                }
            }
        }
        let class = DerivedClass {
            size: set.len(),
            tiles: set.iter().map(|&v| tp.tiles[v].clone()).collect(),
            edges,
            leaves: leaves.iter().map(|&v| tp.tiles[v].clone()).collect(),
            occurrences,
            key,
        };
        rows.entry(class.size).or_default().push(class);
    }
    Ok(Poset {
        rows,
        covers: covers.into_iter().collect(),
    })
}

struct Grow<'a> {
    g: &'a DualGraph,
    allowed: &'a [bool],
    max: usize,
    chosen: Vec<usize>,
    banned: BTreeSet<usize>,
    out: &'a mut Vec<Vec<usize>>,
}

impl Grow<'_> {
    /// Include/exclude enumeration of induced subtrees rooted at their
    /// smallest vertex; a set with no leaf completion is never extended,
    /// since every subtree of a realizable derived tree is realizable.
    fn run(&mut self, root: usize) {
        let mut set = self.chosen.clone();
        set.sort_unstable();
        self.out.push(set);
        self.branch(root);
    }

    fn branch(&mut self, root: usize) {
        if self.chosen.len() >= self.max {
            return;
        }
        let frontier: BTreeSet<usize> = self
            .chosen
            .iter()
            .flat_map(|&u| self.g.neighbors(u).iter().copied())
            .filter(|&w| w > root && self.allowed[w] && !self.banned.contains(&w) && !self.chosen.contains(&w))
            .filter(|&w| self.g.neighbors(w).iter().filter(|x| self.chosen.contains(x)).count() == 1)
            .collect();
        let Some(&c) = frontier.iter().next() else {
            return;
        };
        self.chosen.push(c);
        if leaf_completion(self.g, &self.chosen).is_some() {
            let mut set = self.chosen.clone();
            set.sort_unstable();
            self.out.push(set);
            self.branch(root);
        }
        self.chosen.pop();
        self.banned.insert(c);
        self.branch(root);
        self.banned.remove(&c);
    }
}

/// True iff every class in the poset has a path as derived tree.
pub fn caterpillar_check<T: Coeff>(poset: &Poset<T>) -> bool {
    poset.rows.values().flatten().all(DerivedClass::is_path)
}


/// A Star vertex with its big sun (the five darts and the ten kites on
/// their short edges) and the tiles adjacent to the big sun.
#[derive(Clone, Debug)]
pub struct Flower<T: Coeff> {
    pub center: Point<T>,
    pub big_sun: Vec<usize>,
    pub adjacent: Vec<usize>,
    pub star_type: usize,
    /// Big sun and adjacent tiles all complete; `star_type` is only
    /// meaningful for complete flowers.
    pub complete: bool,
}

impl<T: Coeff> Flower<T> {
    pub fn tiles(&self) -> impl Iterator<Item = usize> + '_ {
        self.big_sun.iter().chain(&self.adjacent).copied()
    }
}

/// Flowers around every Star vertex whose big sun lies in the patch.
pub fn detect_flowers<T: Coeff>(tp: &TilePatch<T>, g: &DualGraph) -> Vec<Flower<T>> {
    let mut stars: Vec<&Point<T>> = tp
        .vertices()
        .filter(|v| matches!(tp.classify_vertex(v), Ok(VertexConfig::Star)))
        .collect();
    stars.sort();
    stars
        .into_iter()
        .filter_map(|c| flower_at(tp, g, c))
        .collect()
}

fn flower_at<T: Coeff>(tp: &TilePatch<T>, g: &DualGraph, center: &Point<T>) -> Option<Flower<T>> {
    let darts: Vec<usize> = tp.corners_at(center).iter().map(|&(t, _)| t).collect();
    let mut big_sun: BTreeSet<usize> = darts.iter().copied().collect();
    for &d in &darts {
        let v = &tp.tiles[d].vertices;
        for (a, b) in [(&v[1], &v[2]), (&v[2], &v[3])] {
            let kites: Vec<usize> = tp.tiles_on_edge(a, b).iter().copied().filter(|&t| t != d).collect();
            big_sun.extend(kites);
        }
    }
    if big_sun.len() != 15 {
        return None;
    }
    let adjacent: BTreeSet<usize> = big_sun
        .iter()
        .flat_map(|&t| g.neighbors(t).iter().copied())
        .filter(|t| !big_sun.contains(t))
        .collect();
    let complete = big_sun.iter().chain(&adjacent).all(|&t| g.is_complete(t));
    let star_type = adjacent_suns(tp, &big_sun);
    Some(Flower {
        center: center.clone(),
        big_sun: big_sun.into_iter().collect(),
        adjacent: adjacent.into_iter().collect(),
        star_type,
        complete,
    })
}

/// Sun vertices on the big sun.
fn adjacent_suns<T: Coeff>(tp: &TilePatch<T>, big_sun: &BTreeSet<usize>) -> usize {
    let verts: BTreeSet<&Point<T>> = big_sun.iter().flat_map(|&t| tp.tiles[t].vertices.iter()).collect();
    verts
        .into_iter()
        .filter(|v| matches!(tp.classify_vertex(v), Ok(VertexConfig::Sun)))
        .count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceShape {
    Hexagon,
    Boat,
    Star,
    Other,
}

#[derive(Clone, Debug)]
pub struct SkeletonFace {
    pub vertices: Vec<usize>,
    /// Interior angles in units of 36°.
    pub angles: Vec<u8>,
    pub shape: FaceShape,
}

/// Flower centres joined when they are φ³ long edges (φ⁴ short edges) apart.
#[derive(Clone, Debug)]
pub struct StarSkeleton<T: Coeff> {
    pub centers: Vec<Point<T>>,
    pub star_types: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Direction index of each edge `(a, b)`, from `a` to `b`.
    directions: HashMap<(usize, usize), u8>,
}

/// `(φ⁴)² = 21φ + 13`.
fn skeleton_length_sq<T: Coeff>() -> Cyclo<T> {
    Cyclo::from_zphi(T::from_i64(13).expect("small"), T::from_i64(21).expect("small"))
}

pub fn star_skeleton<T: Coeff>(flowers: &[Flower<T>]) -> StarSkeleton<T> {
    let target = skeleton_length_sq::<T>();
    let inv = Cyclo::<T>::golden_inv();
    let inv2 = &inv * &inv;
    let inv4 = &inv2 * &inv2;
    let mut edges = Vec::new();
    let mut directions = HashMap::new();
    for i in 0..flowers.len() {
        for j in i + 1..flowers.len() {
            let d = &flowers[j].center - &flowers[i].center;
            if d.norm_sqr() == target {
                let unit = &d * &inv4;
                let (dir, _) = crate::tiling::edge_vector(&unit).expect("skeleton edges follow tile directions");
                edges.push((i, j));
                directions.insert((i, j), dir);
                directions.insert((j, i), (dir + 5) % 10);
            }
        }
    }
    StarSkeleton {
        centers: flowers.iter().map(|f| f.center.clone()).collect(),
        star_types: flowers.iter().map(|f| f.star_type).collect(),
        edges,
        directions,
    }
}

fn face_shape(angles: &[u8]) -> FaceShape {
    let mut sorted = angles.to_vec();
    sorted.sort_unstable();
    match sorted.as_slice() {
        [2, 2, 4, 4, 4, 4] => FaceShape::Hexagon,
        [2, 2, 2, 4, 4, 4, 6, 6] => FaceShape::Boat,
        [2, 2, 2, 2, 2, 6, 6, 6, 6, 6] => FaceShape::Star,
        _ => FaceShape::Other,
    }
}

impl<T: Coeff> StarSkeleton<T> {
    fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        out.sort_by_key(|&w| self.directions[&(v, w)]);
        out
    }

    /// Bounded faces of the planar skeleton, each traced counter-clockwise.
    /// Faces touching a vertex rejected by `keep` are skipped, so a caller can
    /// discard faces near the patch boundary where flowers are missing.
    pub fn faces(&self, keep: impl Fn(&Point<T>) -> bool) -> Vec<SkeletonFace> {
        let nbrs: Vec<Vec<usize>> = (0..self.centers.len()).map(|v| self.neighbors(v)).collect();
        let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut faces = Vec::new();
        for &(a, b) in &self.edges {
            for (u0, v0) in [(a, b), (b, a)] {
                if used.contains(&(u0, v0)) {
                    continue;
                }
                let (mut u, mut v) = (u0, v0);
                let mut verts = Vec::new();
                let mut angles = Vec::new();
                loop {
                    used.insert((u, v));
                    // next edge: first neighbour of v clockwise from u
                    let back = self.directions[&(v, u)] as i32;
                    let w = *nbrs[v]
                        .iter()
                        .min_by_key(|&&w| {
                            let d = (back - self.directions[&(v, w)] as i32).rem_euclid(10);
                            if d == 0 { 10 } else { d }
                        })
                        .expect("v has a neighbour");
                    let turn = (back - self.directions[&(v, w)] as i32).rem_euclid(10);
                    verts.push(v);
                    angles.push(if turn == 0 { 10 } else { turn as u8 });
                    u = v;
                    v = w;
                    if (u, v) == (u0, v0) {
                        break;
                    }
                }
                let k = angles.len() as u32;
                let sum: u32 = angles.iter().map(|&a| a as u32).sum();
                // counter-clockwise bounded faces have angle sum (k - 2) * 180°
                if k >= 3 && sum == (k - 2) * 5 && verts.iter().all(|&x| keep(&self.centers[x])) {
                    faces.push(SkeletonFace {
                        shape: face_shape(&angles),
                        vertices: verts,
                        angles,
                    });
                }
            }
        }
        faces
    }
}

/// Leaves attached to each derived-path vertex of a caterpillar whose degree
/// word is the given blocks of 3's separated by single 2's. End vertices carry
/// two leaves.
pub fn caterpillar_template(blocks: &[usize]) -> Vec<u8> {
    let mut t = Vec::new();
    for (bi, &b) in blocks.iter().enumerate() {
        if bi > 0 {
            t.push(0);
        }
        t.extend(std::iter::repeat_n(1, b));
    }
    if let Some(first) = t.first_mut() {
        *first = 2;
    }
    if let Some(last) = t.last_mut() {
        *last = 2;
    }
    t
}

/// Blocks of the fully leafed caterpillar on `14 + 17 j` tiles: one block of
/// six for `j = 0`, otherwise end blocks of seven around `j - 1` blocks of eight.
pub fn host_blocks(j: usize) -> Vec<usize> {
    if j == 0 {
        return vec![6];
    }
    let mut b = vec![7];
    b.extend(std::iter::repeat_n(8, j - 1));
    b.push(7);
    b
}

#[derive(Clone, Debug, Serialize)]
pub struct CaterpillarPlan {
    pub path: Vec<usize>,
    pub leaves: Vec<Vec<usize>>,
    /// Degree of each path vertex in the caterpillar.
    pub word: Vec<u8>,
}

impl CaterpillarPlan {
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.path.iter().chain(self.leaves.iter().flatten()).copied().collect();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.path.len() + self.leaves.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|d| char::from(b'0' + d)).collect()
    }
}

/// Tiles allowed on the derived path: within graph distance 3 of some big sun
/// and inside `interior_region(1)`.
pub fn flower_corridor<T: Coeff>(g: &DualGraph, flowers: &[Flower<T>]) -> Vec<bool> {
    let dist = g.distances_from(flowers.iter().flat_map(|f| f.big_sun.iter().copied()));
    let mut ok = vec![false; g.len()];
    for t in g.interior_region(1) {
        ok[t] = dist[t] <= 3;
    }
    ok
}

struct Embed<'a> {
    g: &'a DualGraph,
    path_ok: &'a [bool],
    leaf_ok: &'a [bool],
    template: &'a [u8],
    touch: Vec<u8>,
    used: Vec<bool>,
    path: Vec<usize>,
    leaves: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl Embed<'_> {
    fn place(&mut self, t: usize) {
        self.used[t] = true;
        for &u in self.g.neighbors(t) {
            self.touch[u] += 1;
        }
    }

    fn unplace(&mut self, t: usize) {
        self.used[t] = false;
        for &u in self.g.neighbors(t) {
            self.touch[u] -= 1;
        }
    }

    fn free(&self, t: usize) -> bool {
        !self.used[t] && self.touch[t] == 1
    }

    /// Path vertex `i` is placed; attach its leaves and the next path vertex.
    fn step(&mut self, i: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let p = self.path[i];
        let last = i + 1 == self.template.len();
        let cand: Vec<usize> = self.g.neighbors(p).iter().copied().filter(|&u| self.free(u)).collect();
        if last {
            return self.attach_leaves(&cand, self.template[i] as usize, i, &mut Vec::new());
        }
        for &next in &cand {
            if !self.path_ok[next] {
                continue;
            }
            self.place(next);
            self.path.push(next);
            let rest: Vec<usize> = cand.iter().copied().filter(|&u| u != next).collect();
            if self.attach_leaves(&rest, self.template[i] as usize, i, &mut Vec::new()) {
                return true;
            }
            self.path.pop();
            self.unplace(next);
            if self.nodes > self.budget {
                return false;
            }
        }
        false
    }

    fn attach_leaves(&mut self, cand: &[usize], need: usize, i: usize, got: &mut Vec<usize>) -> bool {
        if need == 0 {
            self.leaves[i] = got.clone();
            if i + 1 == self.template.len() || self.step(i + 1) {
                return true;
            }
            self.leaves[i].clear();
            return false;
        }
        for (k, &l) in cand.iter().enumerate() {
            if !self.leaf_ok[l] || !self.free(l) {
                continue;
            }
            self.place(l);
            got.push(l);
            if self.attach_leaves(&cand[k + 1..], need - 1, i, got) {
                return true;
            }
            got.pop();
            self.unplace(l);
        }
        false
    }
}

/// Embeds the caterpillar `template` (leaves per derived-path vertex) as an
/// induced subtree, trying path starts in increasing id order and returning
/// the first embedding found. `node_budget` bounds the search from each start.
pub fn embed_caterpillar(
    g: &DualGraph,
    path_ok: &[bool],
    template: &[u8],
    node_budget: u64,
) -> Option<CaterpillarPlan> {
    if template.is_empty() {
        return Some(CaterpillarPlan { path: vec![], leaves: vec![], word: vec![] });
    }
    let leaf_ok: Vec<bool> = {
        let mut ok = vec![false; g.len()];
        for t in g.interior_region(0) {
            ok[t] = true;
        }
        ok
    };
    let starts: Vec<usize> = (0..g.len()).filter(|&t| path_ok[t]).collect();
    starts.par_iter().find_map_first(|&s| {
        let mut e = Embed {
            g,
            path_ok,
            leaf_ok: &leaf_ok,
            template,
            touch: vec![0; g.len()],
            used: vec![false; g.len()],
            path: vec![s],
            leaves: vec![Vec::new(); template.len()],
            nodes: 0,
            budget: node_budget,
        };
        e.place(s);
        if e.step(0) {
            let word = template
                .iter()
                .enumerate()
                .map(|(i, &l)| l + u8::from(i > 0) + u8::from(i + 1 < template.len()))
                .collect();
            Some(CaterpillarPlan { path: e.path, leaves: e.leaves, word })
        } else {
            None
        }
    })
}

/// Smallest `j` with a host of `14 + 17 j` tiles larger than `n + 15`.
pub fn host_index_for(n: usize) -> usize {
    (n + 16).saturating_sub(14).div_ceil(17).max(1)
}

/// First `n` vertices of the walk along `host` that starts at its first
/// degree-2 path vertex and adds each further path vertex followed by one of
/// its leaves. Returns `None` when the host is too short.
pub fn walk_prefix(host: &CaterpillarPlan, n: usize) -> Option<Vec<usize>> {
    if n == 0 {
        return Some(Vec::new());
    }
    let start = host.word.iter().position(|&d| d == 2)?;
    let mut out = Vec::with_capacity(n);
    for i in start..host.path.len() {
        out.push(host.path[i]);
        if i > start {
            if let Some(&l) = host.leaves[i].first() {
                out.push(l);
            }
        }
        if out.len() >= n {
            out.truncate(n);
            return Some(out);
        }
    }
    None
}

/// The plan of a sub-caterpillar of `host` spanned by `vertices`.
pub fn plan_from_walk(g: &DualGraph, vertices: &[usize], host: &CaterpillarPlan) -> CaterpillarPlan {
    let set: BTreeSet<usize> = vertices.iter().copied().collect();
    let path: Vec<usize> = host.path.iter().copied().filter(|p| set.contains(p)).collect();
    let leaves = path
        .iter()
        .map(|&p| g.neighbors(p).iter().copied().filter(|u| set.contains(u) && !path.contains(u)).collect())
        .collect();
    let word = path
        .iter()
        .map(|&p| g.neighbors(p).iter().filter(|u| set.contains(u)).count() as u8)
        .collect();
    CaterpillarPlan { path, leaves, word }
}

/// Default node budget per start tile for [`corridor_caterpillar_search`].
pub const EMBED_BUDGET: u64 = 2_000_000;

/// A fully leafed caterpillar on `n_target` tiles whose derived path runs
/// through the flower corridor. For `n_target = 14 + 17 j` this is the full
/// caterpillar with blocks [`host_blocks`]`(j)`; otherwise it is the walk
/// prefix of a larger host.
pub fn corridor_caterpillar_search<T: Coeff>(
    tp: &TilePatch<T>,
    g: &DualGraph,
    n_target: usize,
) -> Result<CaterpillarPlan, StructureError> {
    let flowers = detect_flowers(tp, g);
    let corridor = flower_corridor(g, &flowers);
    if n_target == 14 {
        // six kites of one big sun
        let mut ok = vec![false; g.len()];
        for t in flowers.iter().flat_map(|f| f.big_sun.iter()) {
            ok[*t] = corridor[*t];
        }
        return embed_caterpillar(g, &ok, &caterpillar_template(&[6]), EMBED_BUDGET)
            .ok_or(StructureError::NotFoundWithinPatch);
    }
    if n_target >= 14 && (n_target - 14).is_multiple_of(17) {
        let tpl = caterpillar_template(&host_blocks((n_target - 14) / 17));
        return embed_caterpillar(g, &corridor, &tpl, EMBED_BUDGET).ok_or(StructureError::NotFoundWithinPatch);
    }
    let host = embed_caterpillar(g, &corridor, &caterpillar_template(&host_blocks(host_index_for(n_target))), EMBED_BUDGET)
        .ok_or(StructureError::NotFoundWithinPatch)?;
    let vs = walk_prefix(&host, n_target).ok_or(StructureError::NotFoundWithinPatch)?;
    Ok(plan_from_walk(g, &vs, &host))
}

/// Builds members of the extremal family from one host caterpillar.
#[derive(Clone, Debug)]
pub struct FamilyBuilder {
    pub graph: DualGraph,
    pub host: CaterpillarPlan,
}

impl FamilyBuilder {
    /// Host for every `n ≤ n_max`, on a Sun patch of the given depth.
    pub fn new<T: Coeff>(tp: &TilePatch<T>, g: DualGraph, n_max: usize) -> Result<Self, StructureError> {
        let flowers = detect_flowers(tp, &g);
        let corridor = flower_corridor(&g, &flowers);
        let tpl = caterpillar_template(&host_blocks(host_index_for(n_max)));
        let host = embed_caterpillar(&g, &corridor, &tpl, EMBED_BUDGET).ok_or(StructureError::NotFoundWithinPatch)?;
        Ok(FamilyBuilder { graph: g, host })
    }

    pub fn member(&self, n: usize) -> Result<Subtree, StructureError> {
        let vs = walk_prefix(&self.host, n).ok_or(StructureError::NotFoundWithinPatch)?;
        Ok(Subtree::new(&self.graph, vs))
    }
}

/// Smallest Sun-patch depth tried by [`construct_family`], and the largest.
pub const FAMILY_DEPTHS: std::ops::RangeInclusive<u32> = 5..=10;

/// The `n`-tile member of the extremal caterpillar family, found on Sun
/// patches of increasing depth.
pub fn construct_family(n: usize) -> Result<(TilePatch<i64>, Subtree), StructureError> {
    for depth in FAMILY_DEPTHS {
        let tp = crate::tiling::generate::<i64>(VertexConfig::Sun, depth).expect("Sun seed is legal");
        let g = crate::dualgraph::build_dual(&tp);
        if let Ok(b) = FamilyBuilder::new(&tp, g, n) {
            if let Ok(s) = b.member(n) {
                return Ok((tp, s));
            }
        }
    }
    Err(StructureError::NotFoundWithinPatch)
}
