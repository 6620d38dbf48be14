//! Rooted planar maps with a distinguished edge subset, and their encoding
//! by balanced words.
//!
//! Maps use the half-edge (rotation system) form: `sigma` turns around a
//! vertex, `alpha` swaps the two halves of an edge, and faces are the cycles
//! of `alpha . sigma`. The root is a half-edge.

mod bijection;
mod canonical;
mod io;

pub use bijection::{
    d_walk, extract_loops, map_to_tree_pair, map_to_word, quadrangulation, word_to_map,
    word_to_tree_pair, LoopSet, Quadrangulation, TreePair,
};
pub use canonical::{canonical_form, CANONICAL_VERSION};
pub use io::{MapJson, MAP_FORMAT_VERSION};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedMap {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    root: usize,
}

/// Labels each element of `0..perm.len()` with the index of its cycle.
pub(crate) fn cycle_ids(perm: impl Fn(usize) -> usize, n: usize) -> (Vec<usize>, usize) {
    let mut id = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if id[start] != usize::MAX {
            continue;
        }
        let mut h = start;
        while id[h] == usize::MAX {
            id[h] = count;
            h = perm(h);
        }
        count += 1;
    }
    (id, count)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.sets -= 1;
        true
    }

    pub(crate) fn sets(&self) -> usize {
        self.sets
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

impl RootedMap {
    /// Validates a rotation system: `sigma` a permutation, `alpha` a
    /// fixed-point-free involution, the whole thing connected and of genus 0.
    pub fn new(sigma: Vec<usize>, alpha: Vec<usize>, root: usize) -> Result<Self> {
        let n = sigma.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidMap(format!("{n} half-edges; need a positive even count")));
        }
        if alpha.len() != n {
            return Err(Error::InvalidMap("sigma and alpha lengths differ".into()));
        }
        if root >= n {
            return Err(Error::InvalidMap(format!("root {root} out of range")));
        }
        if !is_permutation(&sigma) {
            return Err(Error::InvalidMap("rotation is not a permutation".into()));
        }
        if (0..n).any(|h| alpha[h] >= n || alpha[h] == h || alpha[alpha[h]] != h) {
            return Err(Error::InvalidMap("opposite is not a fixed-point-free involution".into()));
        }
        let m = RootedMap { sigma, alpha, root };
        let mut uf = UnionFind::new(n);
        for h in 0..n {
            uf.union(h, m.sigma[h]);
            uf.union(h, m.alpha[h]);
        }
        if uf.sets() != 1 {
            return Err(Error::InvalidMap("map is not connected".into()));
        }
        let chi = m.vertex_count() as i64 - m.edge_count() as i64 + m.face_count() as i64;
        if chi != 2 {
            return Err(Error::InvalidMap(format!("Euler characteristic {chi}, not 2")));
        }
        Ok(m)
    }

    pub fn half_edge_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn edge_count(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn sigma(&self, h: usize) -> usize {
        self.sigma[h]
    }

    pub fn alpha(&self, h: usize) -> usize {
        self.alpha[h]
    }

    /// Next half-edge around the face to the left of `h`'s corner.
    pub fn phi(&self, h: usize) -> usize {
        self.alpha[self.sigma[h]]
    }

    pub fn sigma_slice(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha_slice(&self) -> &[usize] {
        &self.alpha
    }

    pub fn sigma_inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.sigma.len()];
        for (h, &s) in self.sigma.iter().enumerate() {
            inv[s] = h;
        }
        inv
    }

    /// Vertex index of each half-edge.
    pub fn vertex_ids(&self) -> (Vec<usize>, usize) {
        cycle_ids(|h| self.sigma[h], self.sigma.len())
    }

    /// Face index of each half-edge (cycles of `alpha . sigma`).
    pub fn face_ids(&self) -> (Vec<usize>, usize) {
        cycle_ids(|h| self.phi(h), self.sigma.len())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids().1
    }

    pub fn face_count(&self) -> usize {
        self.face_ids().1
    }

    /// Same map seen from the dual side: faces become vertices.
    pub fn dual(&self) -> RootedMap {
        let n = self.sigma.len();
        RootedMap {
            sigma: (0..n).map(|h| self.phi(h)).collect(),
            alpha: self.alpha.clone(),
            root: self.root,
        }
    }

    /// The map with half-edge `h` renamed to `perm[h]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<RootedMap> {
        let n = self.sigma.len();
        if perm.len() != n || !is_permutation(perm) {
            return Err(Error::InvalidMap("relabelling is not a permutation".into()));
        }
        let mut sigma = vec![0; n];
        let mut alpha = vec![0; n];
        for h in 0..n {
            sigma[perm[h]] = perm[self.sigma[h]];
            alpha[perm[h]] = perm[self.alpha[h]];
        }
        Ok(RootedMap {
            sigma,
            alpha,
            root: perm[self.root],
        })
    }
}

/// A set of edges, stored as a flag on both halves of each edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSubset {
    member: Vec<bool>,
}

impl EdgeSubset {
    pub fn empty(m: &RootedMap) -> Self {
        EdgeSubset {
            member: vec![false; m.half_edge_count()],
        }
    }

    /// From per-half-edge flags; both halves of an edge must agree.
    pub fn from_flags(m: &RootedMap, member: Vec<bool>) -> Result<Self> {
        if member.len() != m.half_edge_count() {
            return Err(Error::InvalidMap("subset length differs from half-edge count".into()));
        }
        if (0..member.len()).any(|h| member[h] != member[m.alpha(h)]) {
            return Err(Error::InvalidMap("subset flags differ across an edge".into()));
        }
        Ok(EdgeSubset { member })
    }

    pub fn flags(&self) -> &[bool] {
        &self.member
    }

    /// Whether the edge containing half-edge `h` is in the set.
    pub fn contains(&self, h: usize) -> bool {
        self.member[h]
    }

    pub fn set(&mut self, m: &RootedMap, h: usize, value: bool) {
        self.member[h] = value;
        self.member[m.alpha(h)] = value;
    }

    pub fn toggle(&mut self, m: &RootedMap, h: usize) {
        let v = !self.member[h];
        self.set(m, h, v);
    }

    pub fn edge_count(&self) -> usize {
        self.member.iter().filter(|&&b| b).count() / 2
    }

    pub fn complement(&self) -> EdgeSubset {
        EdgeSubset {
            member: self.member.iter().map(|b| !b).collect(),
        }
    }

    /// Connected components of the spanning subgraph `(V, T)`; isolated
    /// vertices count.
    pub fn components_spanning(&self, m: &RootedMap) -> usize {
        let (vid, nv) = m.vertex_ids();
        let mut uf = UnionFind::new(nv);
        for h in 0..m.half_edge_count() {
            if self.member[h] {
                uf.union(vid[h], vid[m.alpha(h)]);
            }
        }
        uf.sets()
    }

    /// Connected components of the subgraph formed by the edges alone.
    pub fn components_edge_induced(&self, m: &RootedMap) -> usize {
        let (vid, nv) = m.vertex_ids();
        let mut touched = vec![false; nv];
        for h in 0..m.half_edge_count() {
            if self.member[h] {
                touched[vid[h]] = true;
            }
        }
        let isolated = touched.iter().filter(|&&t| !t).count();
        self.components_spanning(m) - isolated
    }

    /// The dual edges of the complement, as a subset of the dual map's edges.
    /// Components of this on `m.dual()` are the components of `T'`.
    pub fn dual_complement(&self) -> EdgeSubset {
        self.complement()
    }

    /// Whether the set is a spanning tree of `m`.
    pub fn is_spanning_tree(&self, m: &RootedMap) -> bool {
        self.edge_count() + 1 == m.vertex_count() && self.components_spanning(m) == 1
    }
}
