//! Words to decorated maps and back.
//!
//! Step `i` of a balanced word of length `2n` is half-edge `i` of the map;
//! matched steps are the two halves of one edge. Corners of the map are the
//! edges of the quadrangulation, and corner `x` sits between half-edges `x`
//! and `sigma(x)` around their vertex. Walking the word visits corners
//! `x_{-1}, x_0, ..., x_{2n-1} = x_{-1}` with `sigma(x_{i-1}) = i`, where
//! `x_i = i` after a cheese step and `x_i = alpha(i)` after a ham step.

use std::collections::VecDeque;

use super::{cycle_ids, EdgeSubset, RootedMap, UnionFind};
use crate::error::{Error, Result};
use crate::matching::{compute_matching, resolve_y};
use crate::semigroup::{is_balanced, reduce, Burger, Symbol, Word};

/// Spanning tree of the map, the complementary dual spanning tree, and the
/// edges where the tree differs from the original subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePair {
    pub tree: EdgeSubset,
    pub fictional: EdgeSubset,
}

impl TreePair {
    pub fn dual_tree(&self) -> EdgeSubset {
        self.tree.complement()
    }

    pub fn is_valid(&self, m: &RootedMap) -> bool {
        self.tree.is_spanning_tree(m) && self.dual_tree().is_spanning_tree(&m.dual())
    }
}

/// Interface loops as cyclic sequences of corners (quadrangulation edges).
/// The loop through the root corner comes first and starts there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopSet {
    pub loops: Vec<Vec<usize>>,
}

impl LoopSet {
    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    pub fn root_loop(&self) -> &[usize] {
        &self.loops[0]
    }

    /// Every corner appears in exactly one loop, exactly once.
    pub fn covers_each_corner_once(&self, corners: usize) -> bool {
        let mut seen = vec![false; corners];
        self.loops
            .iter()
            .flatten()
            .all(|&c| c < corners && !std::mem::replace(&mut seen[c], true))
            && seen.iter().all(|&s| s)
    }
}

/// The quadrangulation on vertices and faces of a map. Half-edge `2x` is
/// the vertex end of corner `x` and `2x + 1` its face end.
#[derive(Clone, Debug)]
pub struct Quadrangulation {
    pub map: RootedMap,
    /// Per vertex of `map`: true for vertices that come from faces.
    pub is_face_vertex: Vec<bool>,
}

impl Quadrangulation {
    pub fn is_bipartite(&self) -> bool {
        let (vid, _) = self.map.vertex_ids();
        (0..self.map.half_edge_count()).all(|h| {
            self.is_face_vertex[vid[h]] != self.is_face_vertex[vid[self.map.alpha(h)]]
        })
    }

    pub fn all_faces_quadrilateral(&self) -> bool {
        let (fid, nf) = self.map.face_ids();
        let mut deg = vec![0usize; nf];
        for f in fid {
            deg[f] += 1;
        }
        deg.iter().all(|&d| d == 4)
    }
}

fn root_corner(m: &RootedMap) -> usize {
    m.sigma_inverse()[m.root()]
}

pub fn quadrangulation(m: &RootedMap) -> Quadrangulation {
    let n = m.half_edge_count();
    let sinv = m.sigma_inverse();
    let mut sigma = vec![0; 2 * n];
    let mut alpha = vec![0; 2 * n];
    for x in 0..n {
        sigma[2 * x] = 2 * m.sigma(x);
        sigma[2 * x + 1] = 2 * sinv[m.alpha(x)] + 1;
        alpha[2 * x] = 2 * x + 1;
        alpha[2 * x + 1] = 2 * x;
    }
    let root = 2 * root_corner(m);
    let (vid, nv) = cycle_ids(|h| sigma[h], 2 * n);
    let mut is_face_vertex = vec![false; nv];
    for x in 0..n {
        is_face_vertex[vid[2 * x + 1]] = true;
    }
    let map = RootedMap::new(sigma, alpha, root).expect("quadrangulation of a planar map is planar");
    Quadrangulation { map, is_face_vertex }
}

/// Next corner along an interface loop: cross the triangle on `sigma(x)`,
/// jumping across its quadrilateral when the edge belongs to `t`.
#[inline]
fn loop_next(m: &RootedMap, t: &EdgeSubset, x: usize) -> usize {
    let y = m.sigma(x);
    if t.contains(y) {
        m.alpha(y)
    } else {
        y
    }
}

pub fn extract_loops(m: &RootedMap, t: &EdgeSubset) -> LoopSet {
    let n = m.half_edge_count();
    let x0 = root_corner(m);
    let mut seen = vec![false; n];
    let mut loops = Vec::new();
    for start in std::iter::once(x0).chain(0..n) {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = loop_next(m, t, x);
        }
        loops.push(cycle);
    }
    LoopSet { loops }
}

/// Builds the map, the subset and the tree pair encoded by a balanced word.
pub fn word_to_tree_pair(w: &Word) -> Result<(RootedMap, EdgeSubset, TreePair)> {
    if !is_balanced(w) {
        return Err(Error::Unbalanced(reduce(w).to_string()));
    }
    let n = w.len();
    if n == 0 {
        return Err(Error::InvalidMap("the empty word has no root edge".into()));
    }
    let matching = compute_matching(w);
    let y = resolve_y(w, &matching)?;
    let alpha: Vec<usize> = (1..=n)
        .map(|i| matching.partner(i).index().expect("balanced words match fully") - 1)
        .collect();
    let is_ham = |i: usize| matches!(y.symbols()[i], Symbol::HamBurger | Symbol::HamOrder);
    let corner: Vec<usize> = (0..n).map(|i| if is_ham(i) { alpha[i] } else { i }).collect();
    let mut sigma = vec![0; n];
    for i in 0..n {
        sigma[corner[(i + n - 1) % n]] = i;
    }
    let map = RootedMap::new(sigma, alpha, 0)?;
    let mut tree = EdgeSubset::empty(&map);
    let mut fictional = EdgeSubset::empty(&map);
    for (i, &s) in w.symbols().iter().enumerate() {
        if s.is_burger() {
            tree.set(&map, i, is_ham(i));
        } else if s == Symbol::FlexOrder {
            fictional.set(&map, i, true);
        }
    }
    let mut t = tree.clone();
    for h in 0..n {
        if fictional.contains(h) && h < map.alpha(h) {
            t.toggle(&map, h);
        }
    }
    Ok((map, t, TreePair { tree, fictional }))
}

/// Rooted map and edge subset encoded by a balanced word. An edge is in the
/// subset when its steps are a hamburger with `[H]` or a cheeseburger with
/// `[F]`.
pub fn word_to_map(w: &Word) -> Result<(RootedMap, EdgeSubset)> {
    word_to_tree_pair(w).map(|(m, t, _)| (m, t))
}

/// Joins loops to the root loop by flipping diagonals until one loop is
/// left, returning the resulting tree pair.
pub fn map_to_tree_pair(m: &RootedMap, t: &EdgeSubset) -> Result<TreePair> {
    let n = m.half_edge_count();
    let mut tree = t.clone();
    let mut fictional = EdgeSubset::empty(m);
    loop {
        let loops = extract_loops(m, &tree);
        if loops.len() == 1 {
            break;
        }
        // Triangle y = sigma(x) is crossed by the loop through corner x.
        let mut loop_of = vec![0usize; n];
        for (k, l) in loops.loops.iter().enumerate() {
            for &x in l {
                loop_of[m.sigma(x)] = k;
            }
        }
        let mut uf = UnionFind::new(n);
        for l in &loops.loops[1..] {
            for w in l.windows(2) {
                uf.union(m.sigma(w[0]), m.sigma(w[1]));
            }
        }
        for y in 0..n {
            if loop_of[y] != 0 && loop_of[m.alpha(y)] != 0 {
                uf.union(y, m.alpha(y));
            }
        }
        // The last root-loop triangle adjacent to each component wins.
        let mut chosen: Vec<Option<usize>> = vec![None; n];
        for &x in loops.root_loop() {
            let y = m.sigma(x);
            let other = m.alpha(y);
            if loop_of[other] != 0 {
                let c = uf.find(other);
                chosen[c] = Some(y);
            }
        }
        let flips: Vec<usize> = chosen.into_iter().flatten().collect();
        if flips.is_empty() {
            return Err(Error::InvalidMap("loops cannot be joined".into()));
        }
        for y in flips {
            tree.toggle(m, y);
            fictional.toggle(m, y);
        }
    }
    Ok(TreePair { tree, fictional })
}

/// Inverse of [`word_to_map`].
pub fn map_to_word(m: &RootedMap, t: &EdgeSubset) -> Result<Word> {
    let pair = map_to_tree_pair(m, t)?;
    let n = m.half_edge_count();
    let mut visited = vec![false; n];
    let mut out = Vec::with_capacity(n);
    let mut x = root_corner(m);
    for _ in 0..n {
        let y = m.sigma(x);
        let ham = pair.tree.contains(y);
        let kind = if ham { Burger::Ham } else { Burger::Cheese };
        out.push(if !visited[m.alpha(y)] {
            kind.symbol()
        } else if pair.fictional.contains(y) {
            Symbol::FlexOrder
        } else {
            kind.order()
        });
        visited[y] = true;
        x = loop_next(m, &pair.tree, x);
    }
    Ok(Word::new(out))
}

fn bfs_depths(m: &RootedMap, t: &EdgeSubset, ids: &[usize], count: usize, root: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); count];
    for h in 0..m.half_edge_count() {
        if t.contains(h) {
            adj[ids[h]].push(ids[m.alpha(h)]);
        }
    }
    let mut depth = vec![usize::MAX; count];
    depth[root] = 0;
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        for &u in &adj[v] {
            if depth[u] == usize::MAX {
                depth[u] = depth[v] + 1;
                q.push_back(u);
            }
        }
    }
    depth
}

/// Tree distance from the root vertex and dual-tree distance from the root
/// face, at each corner along the single loop of a tree pair, starting and
/// ending at the root corner.
pub fn d_walk(m: &RootedMap, pair: &TreePair) -> Vec<(usize, usize)> {
    let (vid, nv) = m.vertex_ids();
    let (fid, nf) = m.face_ids();
    let x0 = root_corner(m);
    let vd = bfs_depths(m, &pair.tree, &vid, nv, vid[x0]);
    let fd = bfs_depths(&m.dual(), &pair.dual_tree(), &fid, nf, fid[x0]);
    let mut out = Vec::with_capacity(m.half_edge_count() + 1);
    let mut x = x0;
    out.push((vd[vid[x]], fd[fid[x]]));
    for _ in 0..m.half_edge_count() {
        x = loop_next(m, &pair.tree, x);
        out.push((vd[vid[x]], fd[fid[x]]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn single_edge_words() {
        let (m, t) = word_to_map(&w("hH")).unwrap();
        assert_eq!((m.vertex_count(), m.face_count()), (2, 1));
        assert_eq!(t.edge_count(), 1);
        let (m, t) = word_to_map(&w("cC")).unwrap();
        assert_eq!((m.vertex_count(), m.face_count()), (1, 2));
        assert_eq!(t.edge_count(), 0);
        let (m, t) = word_to_map(&w("hF")).unwrap();
        assert_eq!(extract_loops(&m, &t).len(), 2);
        assert_eq!(t.edge_count(), 0);
        let (m, t) = word_to_map(&w("cF")).unwrap();
        assert_eq!(extract_loops(&m, &t).len(), 2);
        assert_eq!(t.edge_count(), 1);
    }

    #[test]
    fn rejects_unbalanced_and_empty() {
        assert!(matches!(word_to_map(&w("cH")), Err(Error::Unbalanced(_))));
        assert!(word_to_map(&Word::empty()).is_err());
    }

    #[test]
    fn round_trip_small() {
        for s in ["hH", "cC", "hF", "cF", "chHC", "hcFF", "chCFhH", "hhcFFcFF"] {
            let word = w(s);
            let (m, t) = word_to_map(&word).unwrap();
            assert_eq!(map_to_word(&m, &t).unwrap(), word, "{s}");
        }
    }

    #[test]
    fn quadrangulation_shape() {
        let (m, _) = word_to_map(&w("chhCFHhcFF")).unwrap();
        let q = quadrangulation(&m);
        assert_eq!(q.map.edge_count(), 2 * m.edge_count());
        assert!(q.is_bipartite());
        assert!(q.all_faces_quadrilateral());
    }
}
